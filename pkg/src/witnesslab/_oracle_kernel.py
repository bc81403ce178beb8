"""Compiled per-sample seesaw refinement used by ``sample_oracle``."""
import numpy as np
from numba import njit


@njit(cache=True)
def _extremal_2x2(a, maximize):
    p, c, b = a[0, 0].real, a[1, 1].real, a[0, 1]
    rad = np.sqrt(((p - c) / 2) ** 2 + abs(b) ** 2)
    lam = (p + c) / 2 + (rad if maximize else -rad)
    v = np.empty(2, dtype=np.complex128)
    # null vector of (A - lam) from the larger of the two rows
    r1 = abs(b) ** 2 + (lam - p) ** 2
    r2 = (lam - c) ** 2 + abs(b) ** 2
    if r1 >= r2 and r1 > 0:
        v[0], v[1] = b, lam - p
    elif r2 > 0:
        v[0], v[1] = lam - c, np.conj(b)
    else:
        v[0], v[1] = 1.0, 0.0
    return lam, v / np.sqrt((abs(v[0]) ** 2 + abs(v[1]) ** 2))


@njit(cache=True)
def _extremal_3x3(a, maximize):
    q = (a[0, 0].real + a[1, 1].real + a[2, 2].real) / 3
    off = abs(a[0, 1]) ** 2 + abs(a[0, 2]) ** 2 + abs(a[1, 2]) ** 2
    d0, d1, d2 = a[0, 0].real - q, a[1, 1].real - q, a[2, 2].real - q
    p = np.sqrt((d0 * d0 + d1 * d1 + d2 * d2 + 2 * off) / 6)
    v = np.zeros(3, dtype=np.complex128)
    if p == 0.0:
        v[0] = 1.0
        return q, v
    # det((A - qI)/p) for Hermitian A with real diagonal
    b00, b11, b22 = d0 / p, d1 / p, d2 / p
    b01, b02, b12 = a[0, 1] / p, a[0, 2] / p, a[1, 2] / p
    det = (b00 * b11 * b22 + 2 * (b01 * b12 * np.conj(b02)).real
           - b00 * abs(b12) ** 2 - b11 * abs(b02) ** 2 - b22 * abs(b01) ** 2)
    r = min(1.0, max(-1.0, det / 2))
    phi = np.arccos(r) / 3
    lam = q + 2 * p * (np.cos(phi) if maximize else np.cos(phi + 2 * np.pi / 3))
    m00, m11, m22 = a[0, 0].real - lam, a[1, 1].real - lam, a[2, 2].real - lam
    m01, m02, m12 = a[0, 1], a[0, 2], a[1, 2]
    m10, m20, m21 = np.conj(m01), np.conj(m02), np.conj(m12)
    # cross products of row pairs of (A - lam I); pick the best conditioned
    c0 = (m01 * m12 - m02 * m11, m02 * m10 - m00 * m12, m00 * m11 - m01 * m10)
    c1 = (m01 * m22 - m02 * m21, m02 * m20 - m00 * m22, m00 * m21 - m01 * m20)
    c2 = (m11 * m22 - m12 * m21, m12 * m20 - m10 * m22, m10 * m21 - m11 * m20)
    n0 = abs(c0[0]) ** 2 + abs(c0[1]) ** 2 + abs(c0[2]) ** 2
    n1 = abs(c1[0]) ** 2 + abs(c1[1]) ** 2 + abs(c1[2]) ** 2
    n2 = abs(c2[0]) ** 2 + abs(c2[1]) ** 2 + abs(c2[2]) ** 2
    best, nb = c0, n0
    if n1 > nb:
        best, nb = c1, n1
    if n2 > nb:
        best, nb = c2, n2
    nb = np.sqrt(nb)
    if nb < 1e-12 * p * p:
        w, u = np.linalg.eigh(a)
        k = 2 if maximize else 0
        return w[k], u[:, k].copy()
    v[0], v[1], v[2] = best[0] / nb, best[1] / nb, best[2] / nb
    return lam, v


@njit(cache=True)
def _extremal(a, maximize):
    d = a.shape[0]
    if d == 2:
        return _extremal_2x2(a, maximize)
    if d == 3:
        return _extremal_3x3(a, maximize)
    w, u = np.linalg.eigh(a)
    k = d - 1 if maximize else 0
    return w[k], u[:, k].copy()


@njit(cache=True)
def refine_samples(T, X, Y, maximize, iters):
    """Seesaw-refine every sample independently; returns the final objective values."""
    n, m = T.shape[0], T.shape[1]
    out = np.empty(X.shape[0])
    hy = np.empty((n, n), dtype=np.complex128)
    hx = np.empty((m, m), dtype=np.complex128)
    for r in range(X.shape[0]):
        x = X[r].copy()
        y = Y[r].copy()
        prev = np.inf
        val = 0.0
        for _ in range(iters):
            for i in range(n):
                for k in range(n):
                    s = 0j
                    for j in range(m):
                        for l in range(m):
                            s += np.conj(y[j]) * T[i, j, k, l] * y[l]
                    hy[i, k] = s
            _, x = _extremal(hy, maximize)
            for j in range(m):
                for l in range(m):
                    s = 0j
                    for i in range(n):
                        for k in range(n):
                            s += np.conj(x[i]) * T[i, j, k, l] * x[k]
                    hx[j, l] = s
            val, y = _extremal(hx, maximize)
            if abs(val - prev) < 1e-13 * max(1.0, abs(val)):
                break
            prev = val
        # direct re-evaluation of <x(x)y|H|x(x)y>
        s = 0j
        for i in range(n):
            for j in range(m):
                for k in range(n):
                    for l in range(m):
                        s += np.conj(x[i] * y[j]) * T[i, j, k, l] * x[k] * y[l]
        out[r] = s.real
    return out
