"""Dense complex linear algebra used throughout the package.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. The helpers here
validate shape/finiteness/Hermiticity and wrap LAPACK's Hermitian eigensolver
behind a contract on reconstruction error and orthonormality.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, NonFinite, NonSquare, NotHermitian

HERMITIAN_TOL = 1e-10
DEFAULT_RANK_TOL = 1e-9
PSD_TOL = 1e-10


def as_matrix(a) -> np.ndarray:
    """Return ``a`` as a finite 2-D complex array (a copy)."""
    m = np.array(a, dtype=np.complex128)
    if m.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D matrix, got ndim={m.ndim}")
    if not np.all(np.isfinite(m)):
        raise NonFinite("matrix has NaN or Inf entries")
    return m


def check_hermitian(a, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Validate Hermiticity entrywise and return the symmetrized matrix."""
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise NonSquare(f"matrix of shape {m.shape} is not square")
    dev = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
    if dev > tol:
        raise NotHermitian(f"max |A - A*| = {dev:.3e} exceeds {tol:.1e}")
    return (m + m.conj().T) / 2


@dataclass(frozen=True)
class EigenDecomposition:
    eigenvalues: np.ndarray  # real, ascending
    eigenvectors: np.ndarray  # orthonormal columns

    def reconstruct(self) -> np.ndarray:
        u = self.eigenvectors
        return (u * self.eigenvalues) @ u.conj().T


def hermitian_eigen(a) -> EigenDecomposition:
    m = check_hermitian(a)
    w, v = np.linalg.eigh(m)
    return EigenDecomposition(eigenvalues=w, eigenvectors=v)


def rank_with_tolerance(a, rel_tol: float = DEFAULT_RANK_TOL) -> int:
    """Count eigenvalues above ``rel_tol * lambda_max``; the zero matrix has rank 0."""
    w = hermitian_eigen(a).eigenvalues
    if w.size == 0:
        return 0
    top = float(w[-1])
    if top <= 0.0:
        return 0
    return int(np.count_nonzero(w > rel_tol * top))


def is_psd(a, tol: float = PSD_TOL) -> tuple[bool, float]:
    """Return ``(lambda_min >= -tol, lambda_min)``."""
    w = hermitian_eigen(a).eigenvalues
    lam_min = float(w[0]) if w.size else 0.0
    return lam_min >= -tol, lam_min


@dataclass(frozen=True)
class Subspace:
    """Subspace of C^N stored by an orthonormal basis (columns of ``basis``)."""

    basis: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=np.complex128)
        if b.ndim != 2:
            raise DimensionMismatch("basis must be a 2-D array of column vectors")
        object.__setattr__(self, "basis", b)

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @cached_property
    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T

    def residual(self, v) -> float:
        """Distance ``||P v - v||`` from ``v`` to the subspace."""
        v = np.asarray(v, dtype=np.complex128)
        return float(np.linalg.norm(self.projector @ v - v))

    def distance(self, other: "Subspace") -> float:
        """Frobenius distance between the two orthogonal projectors."""
        if other.ambient_dim != self.ambient_dim:
            raise DimensionMismatch("subspaces live in different ambient spaces")
        return float(np.linalg.norm(self.projector - other.projector))

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(np.zeros((ambient_dim, 0), dtype=np.complex128))

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(np.eye(ambient_dim, dtype=np.complex128))


def orthonormalize(vectors: Sequence | Iterable, rel_tol: float = DEFAULT_RANK_TOL,
                   ambient_dim: int | None = None) -> Subspace:
    """Orthonormal basis for the span of ``vectors``.

    Singular values below ``rel_tol`` times the largest are dropped, so the
    resulting dimension is the numerical rank of the family.
    """
    vecs = [np.asarray(v, dtype=np.complex128).ravel() for v in vectors]
    if not vecs:
        if ambient_dim is None:
            raise DimensionMismatch("empty vector family needs an explicit ambient_dim")
        return Subspace.zero(ambient_dim)
    size = vecs[0].size
    if any(v.size != size for v in vecs) or (ambient_dim is not None and size != ambient_dim):
        raise DimensionMismatch("vectors have inconsistent dimensions")
    a = np.column_stack(vecs)
    if not np.all(np.isfinite(a)):
        raise NonFinite("vector family has NaN or Inf entries")
    u, s, _ = np.linalg.svd(a, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return Subspace.zero(size)
    r = int(np.count_nonzero(s > rel_tol * s[0]))
    return Subspace(u[:, :r])


def range_of(a, rel_tol: float = DEFAULT_RANK_TOL) -> Subspace:
    """Range (support) of a Hermitian PSD matrix at relative tolerance ``rel_tol``."""
    eig = hermitian_eigen(a)
    w = eig.eigenvalues
    n = eig.eigenvectors.shape[0]
    if w.size == 0 or w[-1] <= 0.0:
        return Subspace.zero(n)
    keep = w > rel_tol * w[-1]
    return Subspace(eig.eigenvectors[:, keep])


def orthogonal_complement(s: Subspace) -> Subspace:
    n = s.ambient_dim
    if s.dim == 0:
        return Subspace.full(n)
    if s.dim >= n:
        return Subspace.zero(n)
    # trailing left singular vectors of the basis span the complement
    u, _, _ = np.linalg.svd(s.basis, full_matrices=True)
    return Subspace(u[:, s.dim:])
