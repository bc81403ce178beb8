import numpy as np
import pytest

from witnesslab import catalog
from witnesslab.bipartite import BipartiteOperator, ProductVector
from witnesslab.product_search import SeesawConfig


def random_unit(rng, d):
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_hermitian(rng, d):
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (g + g.conj().T) / 2


def random_product(rng, n, m):
    return ProductVector(random_unit(rng, n), random_unit(rng, m))


def random_psd(rng, d, rank):
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    return g @ g.conj().T


def ket(i, j, dim_b=3, dim_a=3):
    v = np.zeros(dim_a * dim_b, dtype=complex)
    v[i * dim_b + j] = 1
    return v


@pytest.fixture
def rng():
    return np.random.default_rng(20240613)


@pytest.fixture(scope="session")
def cfg():
    return SeesawConfig()


@pytest.fixture(scope="session")
def family():
    return catalog.build_segment(2.0, 0.5)


@pytest.fixture(scope="session")
def psi_projector():
    psi = ket(0, 0) + ket(1, 1) + ket(2, 2)
    return BipartiteOperator(3, 3, np.outer(psi, psi))
