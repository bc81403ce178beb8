import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from witnesslab import catalog
from witnesslab.bipartite import (
    BipartiteOperator,
    ProductVector,
    embed,
    orthogonal_complement,
    partial_conjugate,
    partial_transpose,
)
from witnesslab.errors import DimensionMismatch, EmptyTermList, NotPSDAfterPT
from witnesslab.maps import (
    KrausTerm,
    LinearMapRep,
    apply,
    choi_of,
    identity_map,
    kraus_vector,
    pairing,
    pairing_trace,
    rank_one_pairing,
    support_of,
    transpose_map,
)
from witnesslab.matrix_core import orthonormalize
from witnesslab.product_search import SeesawConfig, enumerate_product_vectors

from conftest import random_product, random_unit


def _rand(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def test_apply_identity_and_transpose():
    rng = np.random.default_rng(0)
    X = _rand(rng, 3, 3)
    np.testing.assert_allclose(apply(identity_map(3), X), X)
    np.testing.assert_allclose(apply(choi_of([KrausTerm(np.eye(3))]), X), X)
    e01 = np.zeros((3, 3))
    e01[0, 1] = 1
    np.testing.assert_array_equal(apply(transpose_map(3), e01), e01.T)
    with pytest.raises(DimensionMismatch):
        apply(identity_map(3), np.eye(2))


def test_choi_examples(psi_projector):
    np.testing.assert_array_equal(identity_map(3).choi.mat, psi_projector.mat)
    np.testing.assert_array_equal(transpose_map(3).choi.mat, partial_transpose(catalog.build_A1()).mat)
    with pytest.raises(EmptyTermList):
        choi_of([])
    with pytest.raises(DimensionMismatch):
        choi_of([KrausTerm(np.eye(2)), KrausTerm(np.eye(3))])


@pytest.mark.parametrize("seed", range(5))
def test_rank_one_transposed_equals_plain(seed):
    # phi^{x y*} = phi_{conj(x) y*}
    rng = np.random.default_rng(seed)
    x, y = _rand(rng, 3), _rand(rng, 4)
    a = choi_of([KrausTerm(np.outer(x, y.conj()), "transposed")])
    b = choi_of([KrausTerm(np.outer(x.conj(), y.conj()), "plain")])
    np.testing.assert_allclose(a.choi.mat, b.choi.mat, atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), m=st.integers(1, 4), n=st.integers(1, 4))
def test_choi_then_apply_matches_kraus(seed, m, n):
    rng = np.random.default_rng(seed)
    terms = [KrausTerm(_rand(rng, m, n), kind) for kind in ("plain", "transposed", "plain")]
    phi = choi_of(terms)
    X = _rand(rng, m, m)
    direct = sum(t.V.conj().T @ (X.T if t.kind == "transposed" else X) @ t.V for t in terms)
    np.testing.assert_allclose(apply(phi, X), direct, atol=1e-10)


def test_choi_kinds_are_psd_or_pt_psd():
    rng = np.random.default_rng(2)
    plain = choi_of([KrausTerm(_rand(rng, 3, 2)) for _ in range(3)])
    assert np.linalg.eigvalsh(plain.choi.mat)[0] > -1e-10
    cop = choi_of([KrausTerm(_rand(rng, 3, 2), "transposed") for _ in range(3)])
    assert np.linalg.eigvalsh(partial_transpose(cop.choi).mat)[0] > -1e-10


def test_pairing_examples():
    e = np.eye(3)
    p = ProductVector(e[0], e[0])
    A = BipartiteOperator(3, 3, np.outer(embed(p), embed(p)))
    E00 = np.zeros((3, 3))
    E00[0, 0] = 1
    phi = choi_of([KrausTerm(E00, "transposed")])
    assert pairing(A, phi) == pytest.approx(1)
    assert rank_one_pairing(p, E00) == pytest.approx(1)
    q = ProductVector(e[1], e[2])
    Aq = BipartiteOperator(3, 3, np.outer(embed(q), embed(q)))
    assert pairing(Aq, phi) == pytest.approx(0)


def test_pairing_vanishes_on_complement_of_support():
    # Phi = sum phi^{W_i} with the W_i spanning E; product vectors whose partial
    # conjugates lie in E^perp pair to zero
    lam = 2.0
    E = catalog.build_E(lam)
    Ws = [w.reshape(3, 3).conj().T for w in catalog.spanning_vectors(lam)]
    Phi = choi_of([KrausTerm(W, "transposed") for W in Ws])
    assert support_of(Phi).distance(E) < 1e-8
    found = enumerate_product_vectors(orthogonal_complement(E), (3, 3), SeesawConfig(seed=3))
    assert found
    for v in found:
        p = partial_conjugate(v)
        A = BipartiteOperator(3, 3, np.outer(embed(p), embed(p).conj()))
        assert abs(pairing(A, Phi)) < 1e-9
        assert sum(rank_one_pairing(p, W) for W in Ws) < 1e-9


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), dims=st.sampled_from([(2, 2), (3, 3), (3, 4), (2, 3)]))
def test_pairing_two_paths_agree(seed, dims):
    rng = np.random.default_rng(seed)
    n, m = dims
    A = BipartiteOperator(n, m, _rand(rng, n * m, n * m))
    phi = choi_of([KrausTerm(_rand(rng, m, n), k) for k in ("plain", "transposed")])
    assert abs(pairing(A, phi) - pairing_trace(A, phi)) <= 1e-10 * max(1, np.abs(A.mat).sum())


def test_pairing_rank_one_closed_form_seeded():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(200):
        n, m = rng.integers(2, 5, size=2)
        p = random_product(rng, n, m)
        V = _rand(rng, m, n)
        v = embed(p)
        A = BipartiteOperator(n, m, np.outer(v, v.conj()))
        generic = pairing(A, choi_of([KrausTerm(V, "transposed")]))
        worst = max(worst, abs(generic - rank_one_pairing(p, V)))
    assert worst <= 1e-10


def test_duality_sign_on_separable_and_decomposable():
    rng = np.random.default_rng(11)
    for _ in range(30):
        n, m = 3, 3
        A = sum(
            rng.uniform() * np.outer(embed(p), embed(p).conj())
            for p in (random_product(rng, n, m) for _ in range(5))
        )
        phi = choi_of([KrausTerm(_rand(rng, m, n), k) for k in ("plain", "transposed", "transposed")])
        assert pairing(BipartiteOperator(n, m, A), phi) >= -1e-9


def test_support_of_examples():
    rng = np.random.default_rng(5)
    V = _rand(rng, 3, 3)
    s = support_of(choi_of([KrausTerm(V, "transposed")]))
    assert s.dim == 1
    assert s.residual(kraus_vector(V) / np.linalg.norm(kraus_vector(V))) < 1e-10
    sp = support_of(choi_of([KrausTerm(V, "plain")]), kind="positive")
    assert sp.residual(kraus_vector(V) / np.linalg.norm(kraus_vector(V))) < 1e-10

    fam = catalog.build_segment(2.0, 0.5)
    st_ = support_of(LinearMapRep.from_choi(partial_transpose(fam.At)))
    assert st_.distance(catalog.build_E(2.0)) < 1e-8
    s1 = support_of(LinearMapRep.from_choi(partial_transpose(fam.A1)))
    psi = np.zeros(9)
    psi[[0, 4, 8]] = 1 / np.sqrt(3)
    assert s1.dim == 1 and s1.residual(psi) < 1e-12

    with pytest.raises(NotPSDAfterPT):
        support_of(LinearMapRep.from_choi(fam.A1))
