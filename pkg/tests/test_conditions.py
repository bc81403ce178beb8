import numpy as np
import pytest

from witnesslab import catalog
from witnesslab.bipartite import BipartiteOperator, embed, partial_conjugate, partial_transpose
from witnesslab.conditions import (
    analyze_witness,
    certify_non_face,
    certify_non_optimal,
    check_A,
    check_B,
    check_C,
    search_non_optimality,
)
from witnesslab.errors import NonPositiveT, NotPSD
from witnesslab.experiments import random_subspace
from witnesslab.matrix_core import Subspace, orthogonal_complement, orthonormalize
from witnesslab.product_search import SeesawConfig

from conftest import ket, random_psd

PSI = (ket(0, 0) + ket(1, 1) + ket(2, 2)) / np.sqrt(3)


def _assert_b_fail_sound(report, space):
    v = embed(report.evidence["certificate"])
    assert np.linalg.norm(space.projector @ v - v) <= 1e-6


def test_analyze_A1(cfg, family):
    a = analyze_witness(family.A1, cfg)
    assert a.support.dim == 1 and a.complement.dim == 8
    assert a.report("B").verdict == "holds"
    assert a.report("C").verdict == "holds"
    rep_a = a.report("A")
    assert rep_a.verdict == "holds" and rep_a.evidence["rank"] == 9
    np.testing.assert_array_equal(a.W.mat, partial_transpose(family.A1).mat)


def test_analyze_At(cfg, family):
    a = analyze_witness(family.At, cfg)
    assert a.support.dim == 4
    assert a.report("B").verdict == "holds"
    assert a.report("C").verdict == "holds"
    assert np.max(np.abs(a.support.basis.conj().T @ a.complement.basis)) < 1e-12


def test_analyze_product_support(cfg):
    q = BipartiteOperator(3, 3, np.outer(ket(0, 0), ket(0, 0)))
    a = analyze_witness(q, cfg)
    rep = a.report("B")
    assert rep.verdict == "fails"
    c = rep.evidence["certificate"]
    assert abs(c.x[0]) == pytest.approx(1) and abs(c.y[0]) == pytest.approx(1)
    _assert_b_fail_sound(rep, a.support)


def test_analyze_rejects_non_psd(cfg, family):
    with pytest.raises(NotPSD):
        analyze_witness(partial_transpose(family.A1), cfg)


def test_check_B_examples(cfg):
    assert check_B(catalog.build_E(2), (3, 3), cfg).verdict == "holds"
    s = orthonormalize([ket(0, 0) + ket(1, 1), ket(0, 1)])
    rep = check_B(s, (3, 3), cfg)
    assert rep.verdict == "fails"
    c = rep.evidence["certificate"]
    assert abs(c.x[0]) == pytest.approx(1) and abs(c.y[1]) == pytest.approx(1)
    _assert_b_fail_sound(rep, s)
    # generic 6-dim subspaces of C^4 (x) C^3 are completely entangled
    assert check_B(random_subspace(12, 6, 1), (4, 3), cfg).verdict == "holds"


def test_check_C_examples(cfg):
    E = catalog.build_E(2)
    rep = check_C(E, (3, 3), cfg)
    assert rep.verdict == "holds"
    v = embed(rep.evidence["certificate"])
    assert np.linalg.norm(E.projector @ v) <= 1e-6
    assert check_C(Subspace.zero(9), (3, 3), cfg).verdict == "holds"
    # a 6-dim subspace of C^4 (x) C^3 whose complement is also completely entangled
    s = random_subspace(12, 6, 1)
    assert check_B(orthogonal_complement(s), (4, 3), cfg).verdict == "holds"
    assert check_C(s, (4, 3), cfg).verdict == "inconclusive"


def test_check_A_examples(cfg):
    rep = check_A(orthonormalize([PSI]), (3, 3), cfg)
    assert rep.verdict == "holds" and rep.evidence["rank"] == 9
    perp = orthogonal_complement(orthonormalize([PSI]))
    for p in rep.evidence["product_vectors"]:
        assert perp.residual(embed(p)) <= 1e-6
    assert orthonormalize([embed(partial_conjugate(p)) for p in rep.evidence["product_vectors"]],
                          1e-9).dim == 9

    rep = check_A(Subspace.full(9), (3, 3), cfg)
    assert rep.verdict == "inconclusive" and rep.evidence["rank"] == 0


def test_check_A_catalog_E_snapshot(cfg):
    # regression snapshot (seed 0): six product vectors in the 5-dim complement,
    # partial conjugates spanning only 5 dimensions
    rep = check_A(catalog.build_E(2), (3, 3), cfg)
    assert rep.verdict == "inconclusive"
    assert rep.evidence["rank"] == 5
    assert rep.evidence["vector_count"] == 6


def test_certify_non_face(family):
    E = catalog.build_E(2)
    rep = certify_non_face(E, family.A0)
    assert rep.verdict == "fails"
    assert rep.evidence["support_distance"] <= 1e-8
    psi_space = orthonormalize([PSI])
    assert certify_non_face(psi_space, family.A1).verdict == "inconclusive"
    assert certify_non_face(psi_space, family.A0).verdict == "inconclusive"
    with pytest.raises(NotPSD):
        certify_non_face(E, partial_transpose(family.A1))


def test_certify_non_optimal_segment(cfg, family):
    W = partial_transpose(family.At)
    P = (1 / np.linalg.norm(family.A0.mat)) * family.A0
    rep = certify_non_optimal(W, P, 0.5, cfg)
    assert rep.verdict == "fails" and not rep.heuristic


def test_certify_non_optimal_swap_always_violated(cfg):
    W = partial_transpose(catalog.build_A1())
    e = np.eye(3)
    v = np.kron(e[0] + e[1], e[0] - e[1]) / 2
    P = BipartiteOperator(3, 3, np.outer(v, v))
    for t in (1.0, 1e-2, 1e-4):
        rep = certify_non_optimal(W, P, t, cfg)
        assert rep.verdict == "inconclusive"
        assert rep.evidence["min_product_value"] < -1e-9


def test_certify_non_optimal_psd_witness(cfg):
    W = BipartiteOperator(2, 2, np.diag([1.0, 2.0, 3.0, 4.0]))
    rep = certify_non_optimal(W, W, 1.0, cfg)
    assert rep.verdict == "fails"
    with pytest.raises(NonPositiveT):
        certify_non_optimal(W, W, 0.0, cfg)
    with pytest.raises(NotPSD):
        certify_non_optimal(W, -1 * W, 1.0, cfg)


def test_search_non_optimality_examples(cfg, family):
    rep = search_non_optimality(partial_transpose(family.At), cfg)
    assert rep.verdict == "fails"
    rep = search_non_optimality(partial_transpose(family.A1), cfg)
    assert rep.verdict == "inconclusive"
    W = BipartiteOperator(2, 2, np.eye(4))
    rep = search_non_optimality(W, cfg)
    assert rep.verdict == "fails" and rep.evidence["candidate"] == "W_itself"


def test_headline_B_holds_and_D_fails(cfg, family):
    a = analyze_witness(family.At, cfg, non_optimality=True)
    d = certify_non_face(a.support, family.A0)
    assert a.report("B").verdict == "holds" and d.verdict == "fails"
    assert a.report("O1").verdict == "fails"


def _consistent(Q, cfg):
    a = analyze_witness(Q, cfg)
    o1 = search_non_optimality(a.W, cfg)
    if a.report("A").verdict == "holds":
        # A implies optimality, which in turn forces B and C
        assert o1.verdict != "fails"
        assert a.report("B").verdict != "fails"
        assert a.report("C").verdict != "fails"
    if o1.verdict == "fails" and not o1.heuristic:
        assert a.report("A").verdict != "holds"
    return a, o1


def test_theorem_consistency_catalog(cfg):
    for lam in (2.0, 3.0):
        for t in (0.0, 0.25, 0.5, 1.0):
            _consistent(catalog.build_segment(lam, t).At, cfg)


def test_theorem_consistency_random(cfg):
    rng = np.random.default_rng(77)
    for i in range(50):
        rank = int(rng.integers(1, 10))
        _consistent(BipartiteOperator(3, 3, random_psd(rng, 9, rank)), cfg.replace(seed=i))


def test_report_serialization(cfg, family):
    a = analyze_witness(family.A1, cfg)
    for r in a.reports:
        d = r.to_dict()
        assert set(d) >= {"condition_id", "verdict", "evidence", "heuristic_flag"}
    import json
    json.dumps(a.to_dict())
