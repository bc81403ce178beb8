"""Operators and vectors on C^n (x) C^m.

Index convention: the composite index of ``(i, j)`` with ``i`` in the first
factor (dimension ``dim_a``) and ``j`` in the second (``dim_b``) is
``i * dim_b + j``. Every routine in the package relies on this.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import DimensionMismatch
from .matrix_core import (
    Subspace,
    as_matrix,
    check_hermitian,
    orthogonal_complement as _orthogonal_complement,
)

Side = Literal["a", "b"]

__all__ = [
    "BipartiteOperator",
    "ProductVector",
    "Subspace",
    "embed",
    "partial_transpose",
    "partial_conjugate",
    "product_overlap",
    "orthogonal_complement",
]


@dataclass(frozen=True)
class BipartiteOperator:
    dim_a: int
    dim_b: int
    mat: np.ndarray

    def __post_init__(self):
        m = as_matrix(self.mat)
        side = self.dim_a * self.dim_b
        if self.dim_a < 1 or self.dim_b < 1 or m.shape != (side, side):
            raise DimensionMismatch(
                f"matrix shape {m.shape} does not match dims ({self.dim_a}, {self.dim_b})"
            )
        object.__setattr__(self, "mat", m)

    @property
    def dims(self) -> tuple[int, int]:
        return self.dim_a, self.dim_b

    @property
    def size(self) -> int:
        return self.dim_a * self.dim_b

    def tensor(self) -> np.ndarray:
        """View as a rank-4 tensor ``T[i, j, k, l] = mat[(i,j), (k,l)]``."""
        return self.mat.reshape(self.dim_a, self.dim_b, self.dim_a, self.dim_b)

    def hermitian(self) -> np.ndarray:
        return check_hermitian(self.mat)

    def with_matrix(self, mat) -> "BipartiteOperator":
        return BipartiteOperator(self.dim_a, self.dim_b, mat)

    def __add__(self, other: "BipartiteOperator") -> "BipartiteOperator":
        _same_dims(self, other)
        return self.with_matrix(self.mat + other.mat)

    def __sub__(self, other: "BipartiteOperator") -> "BipartiteOperator":
        _same_dims(self, other)
        return self.with_matrix(self.mat - other.mat)

    def __mul__(self, c) -> "BipartiteOperator":
        return self.with_matrix(c * self.mat)

    __rmul__ = __mul__

    @classmethod
    def identity(cls, dim_a: int, dim_b: int) -> "BipartiteOperator":
        return cls(dim_a, dim_b, np.eye(dim_a * dim_b))

    @classmethod
    def projector_onto(cls, dim_a: int, dim_b: int, vectors) -> "BipartiteOperator":
        """Orthogonal projector onto the span of ``vectors``."""
        from .matrix_core import orthonormalize

        return cls(dim_a, dim_b, orthonormalize(vectors, ambient_dim=dim_a * dim_b).projector)


def _same_dims(p: BipartiteOperator, q: BipartiteOperator) -> None:
    if p.dims != q.dims:
        raise DimensionMismatch(f"dims {p.dims} != {q.dims}")


@dataclass(frozen=True)
class ProductVector:
    """Unit product vector x (x) y; both factors are normalized on construction."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.complex128).ravel()
        y = np.asarray(self.y, dtype=np.complex128).ravel()
        nx, ny = np.linalg.norm(x), np.linalg.norm(y)
        if nx == 0 or ny == 0 or not (np.isfinite(nx) and np.isfinite(ny)):
            raise ValueError("product vector factors must be nonzero and finite")
        object.__setattr__(self, "x", x / nx)
        object.__setattr__(self, "y", y / ny)

    @property
    def dims(self) -> tuple[int, int]:
        return self.x.size, self.y.size

    def to_dict(self) -> dict:
        return {
            "x": {"re": self.x.real.tolist(), "im": self.x.imag.tolist()},
            "y": {"re": self.y.real.tolist(), "im": self.y.imag.tolist()},
        }


def embed(p: ProductVector, dims: tuple[int, int] | None = None) -> np.ndarray:
    if dims is not None and p.dims != tuple(dims):
        raise DimensionMismatch(f"product vector dims {p.dims} != {tuple(dims)}")
    return np.kron(p.x, p.y)


def partial_transpose(op: BipartiteOperator, side: Side = "b") -> BipartiteOperator:
    t = op.tensor()
    if side == "b":
        out = t.transpose(0, 3, 2, 1)
    elif side == "a":
        out = t.transpose(2, 1, 0, 3)
    else:
        raise ValueError(f"side must be 'a' or 'b', got {side!r}")
    return op.with_matrix(out.reshape(op.size, op.size))


def partial_conjugate(p: ProductVector) -> ProductVector:
    """Conjugate the second factor: x (x) y -> x (x) conj(y)."""
    return ProductVector(p.x, p.y.conj())


def product_overlap(p: ProductVector, h: BipartiteOperator) -> float:
    """Expectation ``<x(x)y| H |x(x)y>`` for Hermitian ``H``."""
    mat = h.hermitian()
    v = embed(p, h.dims)
    return float(np.real(np.vdot(v, mat @ v)))


def orthogonal_complement(s: Subspace) -> Subspace:
    return _orthogonal_complement(s)
