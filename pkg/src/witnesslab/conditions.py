"""Optimality conditions for decomposable witnesses W = Q^tau.

Every check returns a :class:`ConditionReport` with a three-valued verdict.
Verdicts backed by a certificate (a product vector, a spanning set, a
PT-symmetric PSD matrix, a decomposition of the perturbed witness) are marked
``heuristic=False``; verdicts that rest on a seesaw search failing to find
something are marked ``heuristic=True``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .bipartite import (
    BipartiteOperator,
    ProductVector,
    Side,
    embed,
    partial_conjugate,
    partial_transpose,
)
from .errors import NonPositiveT, NotPSD
from .matrix_core import (
    DEFAULT_RANK_TOL,
    PSD_TOL,
    Subspace,
    hermitian_eigen,
    is_psd,
    orthogonal_complement,
    orthonormalize,
    range_of,
)
from .product_search import (
    CERTIFICATE_RESIDUAL,
    SeesawConfig,
    block_positivity,
    enumerate_product_vectors,
    is_completely_entangled,
)

ConditionId = Literal["A", "B", "C", "D_certificate", "O1"]
Verdict = Literal["holds", "fails", "inconclusive"]

SUBSPACE_EQ_TOL = 1e-8
PT_SYMMETRY_TOL = 1e-10
T_GRID = tuple(2.0**-k for k in range(21))


@dataclass
class ConditionReport:
    condition_id: ConditionId
    verdict: Verdict
    evidence: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    heuristic: bool = False

    def to_dict(self) -> dict:
        return {
            "condition_id": self.condition_id,
            "verdict": self.verdict,
            "evidence": _jsonable(self.evidence),
            "heuristic_flag": self.heuristic,
            "notes": list(self.notes),
        }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, ProductVector):
        return obj.to_dict()
    if isinstance(obj, BipartiteOperator):
        return {"dim_a": obj.dim_a, "dim_b": obj.dim_b,
                "re": obj.mat.real.tolist(), "im": obj.mat.imag.tolist()}
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return {"re": obj.real.tolist(), "im": obj.imag.tolist()}
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    return obj


@dataclass
class WitnessAnalysis:
    Q: BipartiteOperator
    W: BipartiteOperator
    support: Subspace
    complement: Subspace
    reports: list[ConditionReport]
    side: Side = "b"

    def report(self, condition_id: str) -> ConditionReport:
        for r in self.reports:
            if r.condition_id == condition_id:
                return r
        raise KeyError(condition_id)

    def to_dict(self) -> dict:
        return {
            "dims": list(self.Q.dims),
            "pt_side": self.side,
            "support_dim": self.support.dim,
            "complement_dim": self.complement.dim,
            "reports": [r.to_dict() for r in self.reports],
        }


def _require_psd(a: BipartiteOperator, name: str, tol: float = PSD_TOL) -> float:
    ok, lam = is_psd(a.mat, tol)
    if not ok:
        raise NotPSD(f"{name} is not PSD (lambda_min = {lam:.3e})")
    return lam


def check_B(space: Subspace, dims: tuple[int, int], cfg: SeesawConfig | None = None) -> ConditionReport:
    """Condition B: ``space`` contains no product vector."""
    v = is_completely_entangled(space, dims, cfg)
    evidence = {"max_overlap": v.max_overlap, "subspace_dim": space.dim}
    if v.kind == "has_product_vector":
        evidence.update(certificate=v.certificate, residual=v.residual)
        return ConditionReport("B", "fails", evidence,
                               ["product vector found in the support"])
    if v.kind == "entangled":
        return ConditionReport("B", "holds", evidence,
                               ["seesaw found no product vector; not a certified global optimum"],
                               heuristic=space.dim > 0)
    return ConditionReport("B", "inconclusive", evidence,
                           ["max product overlap too close to 1 to decide"], heuristic=True)


def check_C(space: Subspace, dims: tuple[int, int], cfg: SeesawConfig | None = None) -> ConditionReport:
    """Condition C: the orthogonal complement contains a nonzero product vector."""
    comp = orthogonal_complement(space)
    evidence = {"complement_dim": comp.dim}
    if comp.dim == comp.ambient_dim:
        n, m = dims
        cert = ProductVector(np.eye(n)[0], np.eye(m)[0])
        evidence.update(certificate=cert, residual=0.0, max_overlap=1.0)
        return ConditionReport("C", "holds", evidence, ["complement is the whole space"])
    v = is_completely_entangled(comp, dims, cfg)
    evidence["max_overlap"] = v.max_overlap
    if v.kind == "has_product_vector":
        evidence.update(certificate=v.certificate, residual=v.residual)
        return ConditionReport("C", "holds", evidence)
    return ConditionReport("C", "inconclusive", evidence,
                           ["no product vector found in the complement; absence is not certified"],
                           heuristic=True)


def check_A(space: Subspace, dims: tuple[int, int], cfg: SeesawConfig | None = None,
            rank_tol: float = DEFAULT_RANK_TOL) -> ConditionReport:
    """Condition A: partial conjugates of product vectors in the complement span everything."""
    n, m = dims
    comp = orthogonal_complement(space)
    found = enumerate_product_vectors(comp, dims, cfg)
    conj = [embed(partial_conjugate(p)) for p in found]
    span = orthonormalize(conj, rank_tol, ambient_dim=n * m)
    evidence = {"rank": span.dim, "target_rank": n * m, "vector_count": len(found),
                "product_vectors": found}
    if span.dim == n * m:
        return ConditionReport("A", "holds", evidence)
    return ConditionReport("A", "inconclusive", evidence,
                           ["enumeration of product vectors may be incomplete"], heuristic=True)


def analyze_witness(Q: BipartiteOperator, cfg: SeesawConfig | None = None, side: Side = "b",
                    psd_tol: float = PSD_TOL, non_optimality: bool = False) -> WitnessAnalysis:
    """Support, complement, W = Q^tau and the reports for conditions B, C, A.

    With ``non_optimality=True`` the O1 certificate search is appended too.
    """
    cfg = cfg or SeesawConfig()
    lam = _require_psd(Q, "Q", psd_tol)
    support = range_of(Q.mat)
    comp = orthogonal_complement(support)
    W = partial_transpose(Q, side)
    reports = [check_B(support, Q.dims, cfg), check_C(support, Q.dims, cfg),
               check_A(support, Q.dims, cfg)]
    if non_optimality:
        reports.append(search_non_optimality(W, cfg, side=side))
    for r in reports:
        r.evidence.setdefault("q_lambda_min", lam)
    return WitnessAnalysis(Q, W, support, comp, reports, side)


def certify_non_face(space: Subspace, Q0: BipartiteOperator, rank_tol: float = DEFAULT_RANK_TOL,
                     side: Side = "b") -> ConditionReport:
    """Verify that Q0 is PSD, supported exactly on ``space`` and PT-invariant.

    Such a Q0 is a common interior point of the CP and the copositive faces
    generated by ``space``, so the copositive one cannot be a face of the
    decomposable cone and condition D fails.
    """
    lam = _require_psd(Q0, "Q0")
    rng = range_of(Q0.mat, rank_tol)
    dist = rng.distance(space)
    pt_dev = float(np.max(np.abs(partial_transpose(Q0, side).mat - Q0.mat)))
    evidence = {"q0_lambda_min": lam, "support_distance": dist, "pt_deviation": pt_dev,
                "q0_rank": rng.dim, "subspace_dim": space.dim}
    checks = {"psd": True, "support_matches": dist <= SUBSPACE_EQ_TOL, "pt_symmetric": pt_dev <= PT_SYMMETRY_TOL}
    evidence["checks"] = checks
    if all(checks.values()):
        evidence["Q0"] = Q0
        return ConditionReport("D_certificate", "fails", evidence,
                               ["Q0 = Q0^tau is an interior point of both faces: not a face"])
    failed = [k for k, ok in checks.items() if not ok]
    return ConditionReport("D_certificate", "inconclusive", evidence,
                           [f"certificate rejected: {', '.join(failed)}"])


def _decomposable_proof(M: BipartiteOperator, side: Side) -> str | None:
    if is_psd(M.mat, PSD_TOL)[0]:
        return "M is PSD"
    if is_psd(partial_transpose(M, side).mat, PSD_TOL)[0]:
        return "partial transpose of M is PSD"
    return None


def certify_non_optimal(W: BipartiteOperator, P: BipartiteOperator, t: float,
                        cfg: SeesawConfig | None = None, side: Side = "b",
                        extra_starts=()) -> ConditionReport:
    """Test whether ``(1+t) W - t P`` stays block-positive for a CP Choi matrix P.

    If it does, W is not optimal (verdict ``fails``). Block-positivity is
    proven when M or M^tau is PSD; otherwise it is presumed from a seesaw
    minimum and the report is flagged heuristic.
    """
    if not t > 0:
        raise NonPositiveT(f"t must be positive, got {t}")
    W.hermitian()
    _require_psd(P, "P")
    M = (1.0 + t) * W - t * P
    evidence = {"t": t}
    proof = _decomposable_proof(M, side)
    if proof is not None:
        evidence.update(proof=proof, P=P)
        return ConditionReport("O1", "fails", evidence,
                               [f"(1+t)W - tP block-positive: {proof}; W is not optimal"])
    bp = block_positivity(M, cfg, extra_starts=extra_starts)
    evidence["min_product_value"] = bp.value
    if bp.kind == "violated":
        evidence["violation_certificate"] = bp.certificate
        return ConditionReport("O1", "inconclusive", evidence,
                               ["(1+t)W - tP is not block-positive for this (P, t)"])
    evidence["P"] = P
    return ConditionReport("O1", "fails", evidence,
                           ["seesaw minimum of (1+t)W - tP is nonnegative; W presumed not optimal"],
                           heuristic=True)


def _pt_symmetric_psd_in_support(Q: BipartiteOperator, side: Side, iters: int = 500) -> BipartiteOperator | None:
    """A PSD matrix supported in range(Q) with P^tau = P, if alternating projections find one."""
    support = range_of(Q.mat)
    k, U = support.dim, support.basis
    if k == 0:
        return None
    # real coordinates of Hermitian k x k matrices
    herm_basis = []
    for a in range(k):
        for b in range(a, k):
            e = np.zeros((k, k), dtype=np.complex128)
            if a == b:
                e[a, a] = 1.0
                herm_basis.append(e)
            else:
                e[a, b] = e[b, a] = 1 / np.sqrt(2)
                herm_basis.append(e)
                f = np.zeros((k, k), dtype=np.complex128)
                f[a, b], f[b, a] = 1j / np.sqrt(2), -1j / np.sqrt(2)
                herm_basis.append(f)
    cols = []
    for e in herm_basis:
        lifted = BipartiteOperator(Q.dim_a, Q.dim_b, U @ e @ U.conj().T)
        diff = partial_transpose(lifted, side).mat - lifted.mat
        cols.append(np.concatenate([diff.real.ravel(), diff.imag.ravel()]))
    A = np.column_stack(cols)
    _, s, vh = np.linalg.svd(A)
    null = vh[np.count_nonzero(s > 1e-10 * max(1.0, s[0] if s.size else 1.0)):].T
    if null.shape[1] == 0:
        return None
    basis = [sum(c * e for c, e in zip(col, herm_basis)) for col in null.T]
    traces = np.array([np.trace(b).real for b in basis])
    if np.allclose(traces, 0):
        return None

    def project_affine(X):
        # orthogonal projection onto {X in span(basis) : tr X = 1}
        coeffs = np.array([np.vdot(b, X).real for b in basis])
        lam = (1 - coeffs @ traces) / (traces @ traces)
        coeffs = coeffs + lam * traces
        return sum(c * b for c, b in zip(coeffs, basis))

    X = project_affine(np.eye(k) / k)
    for _ in range(iters):
        w, v = np.linalg.eigh(X)
        if w[0] >= -1e-13:
            break
        X = project_affine((v * np.clip(w, 0, None)) @ v.conj().T)
    w = np.linalg.eigvalsh(X)
    if w[0] < -1e-12 or w[-1] <= 0:
        return None
    P = U @ X @ U.conj().T
    P = (P + partial_transpose(BipartiteOperator(Q.dim_a, Q.dim_b, P), side).mat) / 2
    return BipartiteOperator(Q.dim_a, Q.dim_b, (P + P.conj().T) / 2)


def _candidates(W: BipartiteOperator, side: Side) -> list[tuple[str, BipartiteOperator]]:
    Wh = W.hermitian()
    eig = hermitian_eigen(Wh)
    out: list[tuple[str, BipartiteOperator]] = []
    Q = partial_transpose(W, side)
    q_psd = is_psd(Q.mat)[0]
    if q_psd:
        sym = _pt_symmetric_psd_in_support(Q, side)
        if sym is not None:
            out.append(("pt_symmetric_psd_in_support", sym))
        out.append(("support_projector", W.with_matrix(range_of(Q.mat).projector)))
    pos = eig.eigenvalues > 1e-10 * max(1.0, abs(eig.eigenvalues).max())
    if pos.any():
        u = eig.eigenvectors[:, pos]
        out.append(("psd_part", W.with_matrix((u * eig.eigenvalues[pos]) @ u.conj().T)))
        for idx in np.flatnonzero(pos):
            v = eig.eigenvectors[:, idx]
            out.append((f"eigenvector_{idx}", W.with_matrix(np.outer(v, v.conj()))))
    return out


def search_non_optimality(W: BipartiteOperator, cfg: SeesawConfig | None = None,
                          side: Side = "b") -> ConditionReport:
    """Look for a CP Choi matrix P and t > 0 with ``(1+t)W - tP`` block-positive.

    Candidates, in order: W itself when PSD; a PT-symmetric PSD matrix
    supported in range(W^tau); the projector onto that range; the PSD part
    of W; rank-one projectors onto eigenvectors of W with positive
    eigenvalue. Each is rescaled to ||W||_F and tried on t = 1, 1/2, ..., 2^-20.
    """
    cfg = cfg or SeesawConfig()
    Wh = W.hermitian()
    if is_psd(Wh)[0]:
        return ConditionReport("O1", "fails", {"candidate": "W_itself", "t": 1.0, "P": W,
                                               "proof": "W is PSD"},
                               ["W is PSD and detects nothing; not optimal"])
    norm_w = float(np.linalg.norm(Wh))
    tried = []
    violations: list[ProductVector] = []
    for name, P in _candidates(W, side):
        pn = float(np.linalg.norm(P.mat))
        if pn == 0:
            continue
        P = (norm_w / pn) * P
        for t in T_GRID:
            M = (1.0 + t) * W - t * P
            if any(_product_value(M, p) < -1e-9 for p in violations):
                continue
            rep = certify_non_optimal(W, P, t, cfg, side, extra_starts=violations[-8:])
            if rep.verdict == "fails":
                rep.evidence["candidate"] = name
                rep.evidence["candidates_tried"] = tried + [name]
                return rep
            cert = rep.evidence.get("violation_certificate")
            if cert is not None:
                violations.append(cert)
        tried.append(name)
    return ConditionReport("O1", "inconclusive",
                           {"candidates_tried": tried, "t_grid_size": len(T_GRID)},
                           ["no (P, t) certificate found; W may be optimal (not certified)"],
                           heuristic=True)


def _product_value(M: BipartiteOperator, p: ProductVector) -> float:
    v = embed(p)
    return float(np.real(np.vdot(v, M.mat @ v)))
