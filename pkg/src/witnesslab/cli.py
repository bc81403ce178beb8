"""Command-line interface.

Exit codes: 0 ok, 2 parse/format error, 3 precondition failure,
4 numeric failure (including a failed step in ``paper-demo``).
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import catalog
from .bipartite import partial_transpose
from .conditions import (
    T_GRID,
    analyze_witness,
    certify_non_face,
    certify_non_optimal,
    check_B,
    search_non_optimality,
)
from .errors import (
    BadDimension,
    InvalidLambda,
    NotHermitian,
    NotPSD,
    ParseError,
    TOutOfRange,
    WitnessLabError,
)
from .experiments import MAX_AMBIENT, ExperimentSpec, run_experiment
from .fileio import read_matrix, read_subspace, write_matrix, write_subspace
from .matrix_core import is_psd, orthogonal_complement, range_of, rank_with_tolerance
from .product_search import SeesawConfig, is_completely_entangled

EXIT_OK, EXIT_PARSE, EXIT_PRECONDITION, EXIT_NUMERIC = 0, 2, 3, 4


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _cfg(args) -> SeesawConfig:
    return SeesawConfig(restarts=args.restarts, seed=args.seed)


def _fmt_report(r: dict) -> str:
    flag = " (heuristic)" if r["heuristic_flag"] else ""
    ev = r["evidence"]
    bits = []
    for key in ("max_overlap", "rank", "vector_count", "complement_dim", "residual", "t", "candidate", "proof"):
        if ev.get(key) is not None:
            bits.append(f"{key}={ev[key]}")
    line = f"  condition {r['condition_id']}: {r['verdict']}{flag}"
    if bits:
        line += "  [" + ", ".join(bits) + "]"
    for note in r["notes"]:
        line += f"\n      - {note}"
    return line


def cmd_analyze(args) -> int:
    Q = read_matrix(args.path)
    try:
        Q.hermitian()
    except NotHermitian as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    ok, lam = is_psd(Q.mat, args.tol)
    if not ok:
        print(f"precondition failed: input Q is not PSD (lambda_min = {lam!r})", file=sys.stderr)
        return EXIT_PRECONDITION
    analysis = analyze_witness(Q, _cfg(args), side=args.pt_side, psd_tol=args.tol, non_optimality=True)
    out = {"psd": {"holds": ok, "lambda_min": lam}, **analysis.to_dict()}
    if args.json:
        print(_dump(out))
    else:
        print(f"Q: {Q.dim_a}x{Q.dim_b} PSD (lambda_min = {lam:.3e})")
        print(f"support dim = {analysis.support.dim}, complement dim = {analysis.complement.dim}")
        for r in out["reports"]:
            print(_fmt_report(r))
    return EXIT_OK


def _paper_steps(lam: float, t: float, cfg: SeesawConfig) -> list[dict]:
    fam = catalog.build_segment(lam, t)
    E = catalog.build_E(lam)
    steps = []

    def step(name, passed, **evidence):
        steps.append({"step": name, "status": "PASS" if passed else "FAIL", "evidence": evidence})

    ok, lam_min = is_psd(fam.A0.mat)
    step("A0 is PSD", lam_min >= -1e-10, lambda_min=lam_min)
    pt_dev = float(np.max(np.abs(partial_transpose(fam.A0).mat - fam.A0.mat)))
    step("A0 equals its partial transpose", pt_dev <= 1e-12, max_deviation=pt_dev)
    r0 = rank_with_tolerance(fam.A0.mat)
    step("rank of A0 is 4", r0 == 4, rank=r0)
    d0 = range_of(fam.A0.mat).distance(E)
    step("range of A0 equals E", d0 <= 1e-8, projector_distance=d0)
    ok_t, lam_t = is_psd(fam.At.mat)
    dt = range_of(fam.At.mat).distance(E)
    step("A_t is PSD and supported on E", ok_t and dt <= 1e-8, lambda_min=lam_t, projector_distance=dt)
    rb = check_B(E, (3, 3), cfg)
    mo = rb.evidence["max_overlap"]
    step("E is completely entangled (condition B holds)", rb.verdict == "holds" and mo < 1 - 1e-3,
         max_overlap=mo, heuristic=rb.heuristic)
    rd = certify_non_face(E, fam.A0)
    step("non-face certificate accepted (condition D fails)", rd.verdict == "fails",
         support_distance=rd.evidence["support_distance"], pt_deviation=rd.evidence["pt_deviation"])
    W = partial_transpose(fam.At)
    P = (1.0 / np.linalg.norm(fam.A0.mat)) * fam.A0
    found = None
    for s in T_GRID:
        rep = certify_non_optimal(W, P, s, cfg)
        if rep.verdict == "fails":
            found = rep
            break
    step("A_t^tau minus a multiple of A0 stays block-positive (not optimal)",
         found is not None and not found.heuristic,
         t=None if found is None else found.evidence["t"],
         proof=None if found is None else found.evidence.get("proof"))
    rs = search_non_optimality(W, cfg)
    step("certificate search finds A_t^tau non-optimal", rs.verdict == "fails",
         candidate=rs.evidence.get("candidate"), t=rs.evidence.get("t"), heuristic=rs.heuristic)
    return steps


def cmd_paper_demo(args) -> int:
    if not (0.0 < args.t < 1.0):
        raise TOutOfRange(f"--t must lie in the open interval (0, 1), got {args.t}")
    steps = _paper_steps(args.lam, args.t, _cfg(args))
    all_pass = all(s["status"] == "PASS" for s in steps)
    if args.json:
        print(_dump({"lambda": args.lam, "t": args.t, "steps": steps, "all_pass": all_pass}))
    else:
        print(f"lambda = {args.lam}, t = {args.t}")
        for s in steps:
            ev = ", ".join(f"{k}={v}" for k, v in s["evidence"].items())
            print(f"  [{s['status']}] {s['step']}  ({ev})")
        print("ALL PASS" if all_pass else "SOME STEPS FAILED")
    return EXIT_OK if all_pass else EXIT_NUMERIC


def cmd_subspace(args) -> int:
    dims, space = read_subspace(args.path)
    v = is_completely_entangled(space, dims, _cfg(args))
    out = {"dims": list(dims), "subspace_dim": space.dim, "check": args.check, **v.to_dict()}
    if args.json:
        print(_dump(out))
    else:
        print(f"subspace of C^{dims[0]} (x) C^{dims[1]}, dim {space.dim}")
        label = v.kind + (" (heuristic)" if v.heuristic and v.kind == "entangled" else "")
        print(f"verdict: {label}; best product overlap = {v.max_overlap!r}")
        if v.certificate is not None:
            print(f"certificate: x = {np.round(v.certificate.x, 10).tolist()}")
            print(f"             y = {np.round(v.certificate.y, 10).tolist()}")
            print(f"residual ||P v - v|| = {v.residual:.3e}")
        elif args.check == "product":
            print("no product vector certificate found")
    return EXIT_OK


def cmd_random_ces(args) -> int:
    if args.m * args.n > MAX_AMBIENT:
        raise BadDimension(f"m*n must be <= {MAX_AMBIENT}")
    spec = ExperimentSpec(m=args.m, n=args.n, k=args.k, trials=args.trials, seed=args.seed,
                          cfg=SeesawConfig(restarts=args.restarts, seed=args.seed))
    result = run_experiment(spec)
    if args.csv:
        Path(args.csv).write_text(result.to_csv(), encoding="utf-8")
    print(result.summary())
    return EXIT_OK


def cmd_export(args) -> int:
    what = args.what
    if what in ("A0", "A1", "At"):
        fam = catalog.build_segment(args.lam, args.t)
        write_matrix(args.out, {"A0": fam.A0, "A1": fam.A1, "At": fam.At}[what])
    else:
        E = catalog.build_E(args.lam)
        if what == "E":
            vecs = catalog.spanning_vectors(args.lam)
        else:
            vecs = list(orthogonal_complement(E).basis.T)
        write_subspace(args.out, 3, 3, vecs)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="witnesslab",
                                description="Optimality checks for decomposable entanglement witnesses.")
    sub = p.add_subparsers(dest="command", required=True)

    def search_flags(sp):
        sp.add_argument("--restarts", type=int, default=64, help="seesaw restarts (default 64)")
        sp.add_argument("--seed", type=int, default=0, help="master seed (default 0)")

    a = sub.add_parser("analyze", help="check conditions A, B, C and non-optimality for a PSD matrix Q")
    a.add_argument("path")
    a.add_argument("--pt-side", choices=("a", "b"), default="b")
    a.add_argument("--tol", type=float, default=1e-10, help="PSD tolerance on lambda_min")
    a.add_argument("--json", action="store_true")
    search_flags(a)
    a.set_defaults(func=cmd_analyze)

    d = sub.add_parser("paper-demo", help="reproduce the A_t counterexample chain")
    d.add_argument("--lambda", dest="lam", type=float, default=2.0)
    d.add_argument("--t", type=float, default=0.5)
    d.add_argument("--json", action="store_true")
    search_flags(d)
    d.set_defaults(func=cmd_paper_demo)

    s = sub.add_parser("subspace", help="search a subspace for product vectors")
    s.add_argument("path")
    s.add_argument("--check", choices=("ces", "product"), default="ces")
    s.add_argument("--json", action="store_true")
    search_flags(s)
    s.set_defaults(func=cmd_subspace)

    r = sub.add_parser("random-ces", help="CES statistics of random subspaces")
    r.add_argument("--m", type=int, default=3)
    r.add_argument("--n", type=int, default=3)
    r.add_argument("--k", type=int, required=True)
    r.add_argument("--trials", type=int, default=20)
    r.add_argument("--csv", metavar="PATH")
    search_flags(r)
    r.set_defaults(func=cmd_random_ces)

    e = sub.add_parser("export", help="write catalog matrices/subspaces as JSON files")
    e.add_argument("what", choices=("A0", "A1", "At", "E", "Eperp"))
    e.add_argument("--lambda", dest="lam", type=float, default=2.0)
    e.add_argument("--t", type=float, default=0.5)
    e.add_argument("--out", required=True)
    e.set_defaults(func=cmd_export)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (InvalidLambda, TOutOfRange, BadDimension, NotPSD, NotHermitian, ValueError) as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (WitnessLabError, np.linalg.LinAlgError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
