"""The 3x3 example family: A0(lambda), A1, the subspace E(lambda) and the segment A_t."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bipartite import BipartiteOperator
from .errors import InvalidLambda, TOutOfRange
from .matrix_core import Subspace, orthonormalize

DEFAULT_LAMBDA = 2.0


def _ket(i: int, j: int) -> np.ndarray:
    v = np.zeros(9, dtype=np.complex128)
    v[3 * i + j] = 1.0
    return v


def _check_lambda(lam: float) -> float:
    lam = float(lam)
    if not np.isfinite(lam) or lam <= 0 or lam == 1.0:
        raise InvalidLambda(f"lambda must be positive and != 1, got {lam}")
    return lam


def spanning_vectors(lam: float) -> list[np.ndarray]:
    """The four unnormalized spanning vectors of E(lambda), with mu = 1/lambda."""
    lam = _check_lambda(lam)
    mu = 1.0 / lam
    return [
        _ket(0, 0) + _ket(1, 1) + _ket(2, 2),
        lam * _ket(0, 1) + mu * _ket(1, 0),
        lam * _ket(1, 2) + mu * _ket(2, 1),
        lam * _ket(2, 0) + mu * _ket(0, 2),
    ]


def build_A0(lam: float = DEFAULT_LAMBDA) -> BipartiteOperator:
    lam = _check_lambda(lam)
    l2, m2 = lam**2, 1.0 / lam**2
    a = np.zeros((9, 9))
    for r in (0, 4, 8):
        for c in (0, 4, 8):
            a[r, c] = 1.0
    for idx, val in zip(range(1, 8), (l2, m2, m2, None, l2, l2, m2)):
        if val is not None:
            a[idx, idx] = val
    for r, c in ((1, 3), (2, 6), (5, 7)):
        a[r, c] = a[c, r] = 1.0
    return BipartiteOperator(3, 3, a)


def build_A1() -> BipartiteOperator:
    psi = _ket(0, 0) + _ket(1, 1) + _ket(2, 2)
    return BipartiteOperator(3, 3, np.outer(psi, psi.conj()))


def build_E(lam: float = DEFAULT_LAMBDA) -> Subspace:
    return orthonormalize(spanning_vectors(lam))


@dataclass(frozen=True)
class PaperFamily:
    lam: float
    t_seg: float
    A0: BipartiteOperator
    A1: BipartiteOperator
    At: BipartiteOperator
    E_basis: tuple

    @property
    def mu(self) -> float:
        return 1.0 / self.lam

    @property
    def E(self) -> Subspace:
        return orthonormalize(self.E_basis)


def build_segment(lam: float = DEFAULT_LAMBDA, t_seg: float = 0.5) -> PaperFamily:
    """A_t = (1 - t) A0 + t A1 together with its ingredients."""
    lam = _check_lambda(lam)
    t_seg = float(t_seg)
    if not (0.0 <= t_seg <= 1.0):
        raise TOutOfRange(f"t must lie in [0, 1], got {t_seg}")
    a0, a1 = build_A0(lam), build_A1()
    if t_seg == 0.0:
        at = a0
    elif t_seg == 1.0:
        at = a1
    else:
        at = (1.0 - t_seg) * a0 + t_seg * a1
    return PaperFamily(lam, t_seg, a0, a1, at, tuple(spanning_vectors(lam)))
