"""Seesaw optimization of ``<x(x)y| H |x(x)y>`` over unit product vectors.

With ``y`` fixed the objective is the Rayleigh quotient of the contracted
n x n matrix ``H_y[i,k] = sum_{jl} conj(y_j) H[(i,j),(k,l)] y_l``; its extremal
eigenvector is the optimal ``x``. Alternating the two half-steps never makes
the objective worse, so every restart climbs to a local extremum.

Restarts are run as a batch: all restarts share one stack of small Hermitian
eigenproblems per half-step. Each restart draws its start from its own child
of ``SeedSequence(cfg.seed)``, which keeps results independent of batching and
of how restarts are split across threads.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

from .bipartite import BipartiteOperator, ProductVector, embed, product_overlap
from .errors import DimensionMismatch
from .matrix_core import Subspace

Mode = Literal["maximize", "minimize"]

PRODUCT_OVERLAP_THRESHOLD = 1 - 1e-8
CERTIFICATE_RESIDUAL = 1e-6
VIOLATION_TOL = 1e-9
THREADS_ENV = "WITNESSLAB_THREADS"


@dataclass(frozen=True)
class SeesawConfig:
    restarts: int = 64
    max_iters: int = 500
    conv_tol: float = 1e-12
    seed: int = 0
    dedup_tol: float = 1e-6

    def __post_init__(self):
        if self.restarts < 1 or self.max_iters < 1:
            raise ValueError("restarts and max_iters must be >= 1")
        if not (self.conv_tol > 0 and self.dedup_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.seed < 0:
            raise ValueError("seed must be a nonnegative integer")

    def replace(self, **changes) -> "SeesawConfig":
        from dataclasses import replace

        return replace(self, **changes)


@dataclass
class SearchOutcome:
    best_value: float
    best_vector: ProductVector
    all_local_optima: list[tuple[float, ProductVector]]
    iterations_used: list[int]
    monotone: bool = True


def _random_unit(rng: np.random.Generator, d: int) -> np.ndarray:
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def _starts(seed: int, count: int, n: int, m: int) -> tuple[np.ndarray, np.ndarray]:
    xs = np.empty((count, n), dtype=np.complex128)
    ys = np.empty((count, m), dtype=np.complex128)
    for r, child in enumerate(np.random.SeedSequence(seed).spawn(count)):
        rng = np.random.default_rng(child)
        xs[r] = _random_unit(rng, n)
        ys[r] = _random_unit(rng, m)
    return xs, ys


def _values(T: np.ndarray, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    n, m = T.shape[0], T.shape[1]
    v = (X[:, :, None] * Y[:, None, :]).reshape(len(X), n * m)
    hv = v @ T.reshape(n * m, n * m).T
    return np.einsum("ri,ri->r", v.conj(), hv).real


def _contract(Tp: np.ndarray, Z: np.ndarray) -> np.ndarray:
    """``out[r] = sum_{ab} conj(z_a) z_b Tp[a, b]`` for a prepared tensor ``Tp``."""
    d = Z.shape[1]
    outer = (Z.conj()[:, :, None] * Z[:, None, :]).reshape(len(Z), d * d)
    k = int(round(np.sqrt(Tp.shape[1])))
    out = (outer @ Tp).reshape(len(Z), k, k)
    return (out + out.conj().transpose(0, 2, 1)) / 2


def _prepare(T: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n, m = T.shape[0], T.shape[1]
    ty = T.transpose(1, 3, 0, 2).reshape(m * m, n * n)  # contract the second factor
    tx = T.transpose(0, 2, 1, 3).reshape(n * n, m * m)  # contract the first factor
    return tx, ty


def _half_step_x(ty, Y, pick):
    w, v = np.linalg.eigh(_contract(ty, Y))
    return v[:, :, pick], w[:, pick]


def _half_step_y(tx, X, pick):
    w, v = np.linalg.eigh(_contract(tx, X))
    return v[:, :, pick], w[:, pick]


def _seesaw_batch(T: np.ndarray, X: np.ndarray, Y: np.ndarray, maximize: bool,
                  max_iters: int, conv_tol: float):
    """Run alternating updates on a batch of starts; returns (X, Y, iters, monotone)."""
    X, Y = X.copy(), Y.copy()
    pick = -1 if maximize else 0
    sign = 1.0 if maximize else -1.0
    scale = max(1.0, float(np.max(np.abs(T))) * T.shape[0] * T.shape[1])
    slack = 1e-12 * scale
    tx, ty = _prepare(T)
    value = _values(T, X, Y)
    iters = np.zeros(len(X), dtype=int)
    active = np.ones(len(X), dtype=bool)
    monotone = True
    for _ in range(max_iters):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        Xa, Ya, prev = X[idx], Y[idx], value[idx]
        Xa, v1 = _half_step_x(ty, Ya, pick)
        Ya, v2 = _half_step_y(tx, Xa, pick)
        if np.any(sign * (v1 - prev) < -slack) or np.any(sign * (v2 - v1) < -slack):
            monotone = False
        X[idx], Y[idx], value[idx] = Xa, Ya, v2
        iters[idx] += 1
        active[idx[np.abs(v2 - prev) < conv_tol]] = False
    return X, Y, iters, monotone


def _thread_count() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        n = int(raw)
    except ValueError:
        n = 1
    if n <= 0:
        n = os.cpu_count() or 1
    return n


def _check_h(h: BipartiteOperator) -> np.ndarray:
    return h.hermitian().reshape(h.dim_a, h.dim_b, h.dim_a, h.dim_b)


def seesaw_extremize(h: BipartiteOperator, mode: Mode = "maximize",
                     cfg: SeesawConfig | None = None,
                     extra_starts: Sequence[ProductVector] = ()) -> SearchOutcome:
    """Multi-start seesaw for the extremum of ``<x(x)y|H|x(x)y>``.

    ``extra_starts`` are appended after the seeded random starts (used for
    warm starts); the reported values are re-evaluated directly from the
    returned vectors.
    """
    cfg = cfg or SeesawConfig()
    if mode not in ("maximize", "minimize"):
        raise ValueError(f"mode must be 'maximize' or 'minimize', got {mode!r}")
    T = _check_h(h)
    n, m = h.dims
    X0, Y0 = _starts(cfg.seed, cfg.restarts, n, m)
    if extra_starts:
        X0 = np.vstack([X0] + [p.x[None, :] for p in extra_starts])
        Y0 = np.vstack([Y0] + [p.y[None, :] for p in extra_starts])
    maximize = mode == "maximize"

    workers = min(_thread_count(), len(X0))
    if workers > 1:
        chunks = np.array_split(np.arange(len(X0)), workers)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(
                lambda c: _seesaw_batch(T, X0[c], Y0[c], maximize, cfg.max_iters, cfg.conv_tol),
                chunks,
            ))
        X = np.vstack([p[0] for p in parts])
        Y = np.vstack([p[1] for p in parts])
        iters = np.concatenate([p[2] for p in parts])
        monotone = all(p[3] for p in parts)
    else:
        X, Y, iters, monotone = _seesaw_batch(T, X0, Y0, maximize, cfg.max_iters, cfg.conv_tol)

    optima = []
    for r in range(len(X)):
        p = ProductVector(X[r], Y[r])
        optima.append((product_overlap(p, h), p))
    vals = np.array([v for v, _ in optima])
    best = int(np.argmax(vals) if maximize else np.argmin(vals))
    return SearchOutcome(
        best_value=optima[best][0],
        best_vector=optima[best][1],
        all_local_optima=optima,
        iterations_used=[int(i) for i in iters],
        monotone=monotone,
    )


def polish_product_vector(p: ProductVector, space: Subspace, steps: int = 6) -> ProductVector:
    """Gauss-Newton refinement of a near-product vector inside ``space``.

    Minimizes ``||(I - P)(x (x) y)||``. The residual is complex-bilinear in
    ``(x, y)``, so each step is a complex least-squares solve.
    """
    comp = np.eye(space.ambient_dim) - space.projector
    n, m = p.dims
    x, y = p.x.copy(), p.y.copy()
    best = p
    best_res = space.residual(embed(p))
    for _ in range(steps):
        r = comp @ np.kron(x, y)
        jx = comp @ np.kron(np.eye(n), y[:, None])
        jy = comp @ np.kron(x[:, None], np.eye(m))
        delta, *_ = np.linalg.lstsq(np.hstack([jx, jy]), -r, rcond=None)
        x = x + delta[:n]
        y = y + delta[n:]
        x /= np.linalg.norm(x)
        y /= np.linalg.norm(y)
        cand = ProductVector(x, y)
        res = space.residual(embed(cand))
        if res < best_res:
            best, best_res = cand, res
        else:
            break
    return best


@dataclass
class CESVerdict:
    kind: Literal["entangled", "has_product_vector", "inconclusive"]
    max_overlap: float
    certificate: ProductVector | None = None
    residual: float | None = None
    heuristic: bool = True

    def to_dict(self) -> dict:
        return {
            "verdict": self.kind,
            "max_overlap": self.max_overlap,
            "residual": self.residual,
            "heuristic_flag": self.heuristic,
            "certificate": None if self.certificate is None else self.certificate.to_dict(),
        }


def _check_space(space: Subspace, dims: tuple[int, int]) -> None:
    if space.ambient_dim != dims[0] * dims[1]:
        raise DimensionMismatch(f"subspace of C^{space.ambient_dim} is not in C^{dims[0]}(x)C^{dims[1]}")


def is_completely_entangled(space: Subspace, dims: tuple[int, int],
                            cfg: SeesawConfig | None = None, gap: float = 1e-4) -> CESVerdict:
    """Search ``space`` for a product vector by maximizing ``<v|P|v>``.

    A hit above ``1 - 1e-8`` is polished and returned as a certificate (a
    product vector within ``1e-6`` of the space). A maximum below ``1 - gap``
    gives the heuristic verdict "entangled"; anything in between is
    inconclusive.
    """
    cfg = cfg or SeesawConfig()
    dims = tuple(dims)
    _check_space(space, dims)
    if space.dim == 0:
        return CESVerdict("entangled", 0.0, heuristic=False)
    h = BipartiteOperator(dims[0], dims[1], space.projector)
    out = seesaw_extremize(h, "maximize", cfg)
    value = out.best_value
    if value > 1 - max(gap, 1e-4):
        cert = polish_product_vector(out.best_vector, space)
        res = space.residual(embed(cert))
        value = max(value, product_overlap(cert, h))
        if value > PRODUCT_OVERLAP_THRESHOLD and res <= CERTIFICATE_RESIDUAL:
            return CESVerdict("has_product_vector", value, cert, res, heuristic=False)
    if value < 1 - gap:
        return CESVerdict("entangled", value)
    return CESVerdict("inconclusive", value)


def _dedup(vectors: list[ProductVector], tol: float) -> list[ProductVector]:
    kept: list[ProductVector] = []
    embedded: list[np.ndarray] = []
    for p in vectors:
        v = embed(p)
        if all(abs(np.vdot(u, v)) <= 1 - tol for u in embedded):
            kept.append(p)
            embedded.append(v)
    return kept


def enumerate_product_vectors(space: Subspace, dims: tuple[int, int],
                              cfg: SeesawConfig | None = None) -> list[ProductVector]:
    """Distinct product vectors found in ``space`` (possibly an incomplete list).

    Each local maximum of the overlap that exceeds ``1 - 1e-8`` after polishing
    is kept; duplicates up to phase are dropped.
    """
    cfg = cfg or SeesawConfig()
    dims = tuple(dims)
    _check_space(space, dims)
    if space.dim == 0:
        return []
    h = BipartiteOperator(dims[0], dims[1], space.projector)
    out = seesaw_extremize(h, "maximize", cfg)
    hits = []
    for value, p in out.all_local_optima:
        if value <= 1 - 1e-4:
            continue
        q = polish_product_vector(p, space)
        if product_overlap(q, h) > PRODUCT_OVERLAP_THRESHOLD and space.residual(embed(q)) <= CERTIFICATE_RESIDUAL:
            hits.append(q)
    return _dedup(hits, cfg.dedup_tol)


@dataclass
class BlockPositivityVerdict:
    kind: Literal["violated", "presumed_nonneg"]
    value: float
    certificate: ProductVector | None = None
    heuristic: bool = field(default=True)

    def to_dict(self) -> dict:
        return {
            "verdict": self.kind,
            "value": self.value,
            "heuristic_flag": self.heuristic,
            "certificate": None if self.certificate is None else self.certificate.to_dict(),
        }


def block_positivity(w: BipartiteOperator, cfg: SeesawConfig | None = None,
                     extra_starts: Sequence[ProductVector] = ()) -> BlockPositivityVerdict:
    """One-sided block-positivity test: a negative product expectation disproves it."""
    out = seesaw_extremize(w, "minimize", cfg, extra_starts=extra_starts)
    if out.best_value < -VIOLATION_TOL:
        return BlockPositivityVerdict("violated", out.best_value, out.best_vector, heuristic=False)
    return BlockPositivityVerdict("presumed_nonneg", out.best_value, out.best_vector)


def sample_oracle(h: BipartiteOperator, mode: Mode, num_samples: int, seed: int,
                  refine_iters: int = 50) -> float:
    """Extremum over seeded random product vectors, each refined by a few seesaw steps.

    Independent of ``seesaw_extremize``: its own start stream, a compiled
    per-sample loop and a closed-form small eigensolver. Meant for
    cross-checking the seesaw in tests.
    """
    from ._oracle_kernel import refine_samples

    T = _check_h(h)
    n, m = h.dims
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((num_samples, n)) + 1j * rng.standard_normal((num_samples, n))
    Y = rng.standard_normal((num_samples, m)) + 1j * rng.standard_normal((num_samples, m))
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    Y /= np.linalg.norm(Y, axis=1, keepdims=True)
    maximize = mode == "maximize"
    vals = refine_samples(np.ascontiguousarray(T), X, Y, maximize, refine_iters)
    return float(vals.max() if maximize else vals.min())
