"""Linear maps M_m -> M_n stored by their Choi matrices.

The Choi matrix of ``phi`` is ``C = sum_{jl} phi(e_jl) (x) e_jl`` on
C^n (x) C^m, so ``C[(i,j),(k,l)] = phi(e_jl)[i,k]``. Elementary maps are

    phi_V : X -> V* X V        (completely positive term)
    phi^V : X -> V* X^t V      (completely copositive term)

for an ``m x n`` matrix ``V``. The bilinear pairing of a matrix
``A = sum y (x) x`` in M_n (x) M_m with a map is ``sum Tr(phi(x) y^t)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .bipartite import BipartiteOperator, ProductVector, Subspace, partial_transpose
from .errors import DimensionMismatch, EmptyTermList, NotPSD, NotPSDAfterPT
from .matrix_core import DEFAULT_RANK_TOL, PSD_TOL, as_matrix, is_psd, range_of

TermKind = Literal["plain", "transposed"]


@dataclass(frozen=True)
class KrausTerm:
    V: np.ndarray
    kind: TermKind = "plain"

    def __post_init__(self):
        object.__setattr__(self, "V", as_matrix(self.V))
        if self.kind not in ("plain", "transposed"):
            raise ValueError(f"unknown term kind {self.kind!r}")

    @property
    def shape(self) -> tuple[int, int]:
        return self.V.shape

    def __call__(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.complex128)
        if self.kind == "transposed":
            X = X.T
        return self.V.conj().T @ X @ self.V


@dataclass(frozen=True)
class LinearMapRep:
    dim_in: int  # m
    dim_out: int  # n
    choi: BipartiteOperator

    def __post_init__(self):
        if self.choi.dims != (self.dim_out, self.dim_in):
            raise DimensionMismatch(
                f"Choi dims {self.choi.dims} != (dim_out, dim_in) = ({self.dim_out}, {self.dim_in})"
            )

    @property
    def hermiticity_preserving(self) -> bool:
        m = self.choi.mat
        return bool(np.max(np.abs(m - m.conj().T)) <= 1e-10)

    def __add__(self, other: "LinearMapRep") -> "LinearMapRep":
        return LinearMapRep(self.dim_in, self.dim_out, self.choi + other.choi)

    def __mul__(self, c) -> "LinearMapRep":
        return LinearMapRep(self.dim_in, self.dim_out, c * self.choi)

    __rmul__ = __mul__

    @classmethod
    def from_choi(cls, choi: BipartiteOperator) -> "LinearMapRep":
        return cls(dim_in=choi.dim_b, dim_out=choi.dim_a, choi=choi)


def _matrix_unit(m: int, j: int, l: int) -> np.ndarray:
    e = np.zeros((m, m), dtype=np.complex128)
    e[j, l] = 1.0
    return e


def apply(phi: LinearMapRep, X) -> np.ndarray:
    X = as_matrix(X)
    if X.shape != (phi.dim_in, phi.dim_in):
        raise DimensionMismatch(f"input of shape {X.shape}, map expects {phi.dim_in}x{phi.dim_in}")
    return np.einsum("ijkl,jl->ik", phi.choi.tensor(), X)


def choi_of(terms: Sequence[KrausTerm]) -> LinearMapRep:
    """Choi matrix of the sum of the given elementary maps."""
    terms = list(terms)
    if not terms:
        raise EmptyTermList("at least one Kraus term is required")
    m, n = terms[0].shape
    if any(t.shape != (m, n) for t in terms):
        raise DimensionMismatch("Kraus terms have inconsistent shapes")
    c = np.zeros((n, m, n, m), dtype=np.complex128)
    for j in range(m):
        for l in range(m):
            e = _matrix_unit(m, j, l)
            c[:, j, :, l] = sum(t(e) for t in terms)
    choi = BipartiteOperator(n, m, c.reshape(n * m, n * m))
    return LinearMapRep(dim_in=m, dim_out=n, choi=choi)


def identity_map(n: int) -> LinearMapRep:
    return choi_of([KrausTerm(np.eye(n), "plain")])


def transpose_map(n: int) -> LinearMapRep:
    return choi_of([KrausTerm(np.eye(n), "transposed")])


def _check_dims(a: BipartiteOperator, phi: LinearMapRep) -> None:
    if a.dims != phi.choi.dims:
        raise DimensionMismatch(f"operator dims {a.dims} != map Choi dims {phi.choi.dims}")


def pairing(a: BipartiteOperator, phi: LinearMapRep) -> complex | float:
    """Bilinear pairing ``<A, phi>`` by expanding the second factor in matrix units.

    ``A = sum_{jl} Y_jl (x) e_jl`` with ``Y_jl`` the n x n block, so the pairing
    is ``sum_{jl} Tr(phi(e_jl) Y_jl^t)``. Returns a float when the imaginary
    part vanishes (Hermitian inputs).
    """
    _check_dims(a, phi)
    t = a.tensor()
    total = 0j
    for j in range(phi.dim_in):
        for l in range(phi.dim_in):
            block = t[:, j, :, l]
            total += np.trace(apply(phi, _matrix_unit(phi.dim_in, j, l)) @ block.T)
    return _maybe_real(total, a, phi)


def pairing_trace(a: BipartiteOperator, phi: LinearMapRep) -> complex | float:
    """Same pairing evaluated as ``Tr(A C^t)`` on the Choi matrix."""
    _check_dims(a, phi)
    total = complex(np.trace(a.mat @ phi.choi.mat.T))
    return _maybe_real(total, a, phi)


def _maybe_real(z: complex, a: BipartiteOperator, phi: LinearMapRep):
    herm = np.allclose(a.mat, a.mat.conj().T, atol=1e-10) and phi.hermiticity_preserving
    return float(z.real) if herm else complex(z)


def rank_one_pairing(p: ProductVector, V) -> float:
    """Closed form of ``<pp*, phi^V>`` for a product vector ``p = a (x) b``.

    With ``Z = conj(b) a^t`` in M_{m x n} and ``(V|Z) = sum V_jk conj(Z_jk)``
    the pairing equals ``|(V|Z)|^2``.
    """
    V = as_matrix(V)
    a, b = p.x, p.y
    if V.shape != (b.size, a.size):
        raise DimensionMismatch(f"V has shape {V.shape}, expected {(b.size, a.size)}")
    Z = np.outer(b.conj(), a)
    return float(abs(np.sum(V * Z.conj())) ** 2)


def kraus_vector(V) -> np.ndarray:
    """Vector in C^n (x) C^m spanning the support of ``phi^V`` (and of ``phi_V``).

    For ``phi^V`` the Choi matrix is ``(w w*)^tau`` with ``w = vec(V*)``
    (row-major), so the support is the line through ``w``.
    """
    return as_matrix(V).conj().T.ravel()


def support_of(phi: LinearMapRep, kind: Literal["copositive", "positive"] = "copositive",
               rel_tol: float = DEFAULT_RANK_TOL, tol: float = PSD_TOL) -> Subspace:
    """Support of a completely copositive or completely positive map."""
    if kind == "copositive":
        q = partial_transpose(phi.choi, "b").mat
        ok, lam = is_psd(q, tol)
        if not ok:
            raise NotPSDAfterPT(f"partial transpose of Choi matrix has eigenvalue {lam:.3e}")
    elif kind == "positive":
        q = phi.choi.mat
        ok, lam = is_psd(q, tol)
        if not ok:
            raise NotPSD(f"Choi matrix has eigenvalue {lam:.3e}")
    else:
        raise ValueError(f"kind must be 'copositive' or 'positive', got {kind!r}")
    return range_of(q, rel_tol)
