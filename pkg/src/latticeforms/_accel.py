"""Numeric inner loops, compiled with numba when available.

Set ``LATTICEFORMS_DISABLE_NUMBA=1`` to force the pure-numpy path. Both paths
are always importable as ``*_numba`` / ``*_numpy`` so they can be compared.
"""

from __future__ import annotations

import math
import os

import numpy as np

try:
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    NUMBA_AVAILABLE = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]):
            return args[0]
        return lambda f: f


USE_NUMBA = NUMBA_AVAILABLE and os.environ.get("LATTICEFORMS_DISABLE_NUMBA", "") not in ("1", "true", "yes")


def box_ranges(centers: np.ndarray, radii: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Integer offsets k with |c + k| <= r per coordinate, as (lo, hi) arrays."""
    lo = np.ceil(-radii[None, :] - centers).astype(np.int64)
    hi = np.floor(radii[None, :] - centers).astype(np.int64)
    return lo, hi


# ---------------------------------------------------------------------------
# Gaussian lattice sums: sum_{x in c + Z^n, q+(x) <= R} e(u q(x)) exp(-2 pi v q+(x))
# ---------------------------------------------------------------------------


@njit(cache=True)
def _theta_sum_numba(G, P, centers, lo, hi, u, v, R):
    ncos, n = centers.shape
    out = np.zeros(ncos, dtype=np.complex128)
    counts = np.zeros(ncos, dtype=np.int64)
    x = np.empty(n)
    k = np.empty(n, dtype=np.int64)
    two_pi = 2.0 * math.pi
    for j in range(ncos):
        empty = False
        for i in range(n):
            k[i] = lo[j, i]
            if lo[j, i] > hi[j, i]:
                empty = True
        if empty:
            continue
        acc = 0.0 + 0.0j
        cnt = 0
        while True:
            for i in range(n):
                x[i] = centers[j, i] + k[i]
            qq = 0.0
            qp = 0.0
            for a in range(n):
                for b in range(n):
                    qq += x[a] * G[a, b] * x[b]
                    qp += x[a] * P[a, b] * x[b]
            qq *= 0.5
            qp *= 0.5
            if qp <= R:
                acc += np.exp(1j * two_pi * u * qq - two_pi * v * qp)
                cnt += 1
            # odometer
            i = 0
            while i < n:
                k[i] += 1
                if k[i] <= hi[j, i]:
                    break
                k[i] = lo[j, i]
                i += 1
            if i == n:
                break
        out[j] = acc
        counts[j] = cnt
    return out, counts


def _theta_sum_numpy(G, P, centers, lo, hi, u, v, R):
    ncos, n = centers.shape
    out = np.zeros(ncos, dtype=np.complex128)
    counts = np.zeros(ncos, dtype=np.int64)
    for j in range(ncos):
        if np.any(lo[j] > hi[j]):
            continue
        axes = [np.arange(lo[j, i], hi[j, i] + 1) for i in range(n)]
        K = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n)
        X = K + centers[j][None, :]
        qq = 0.5 * np.einsum("ia,ab,ib->i", X, G, X)
        qp = 0.5 * np.einsum("ia,ab,ib->i", X, P, X)
        keep = qp <= R
        out[j] = np.exp(2j * np.pi * u * qq[keep] - 2 * np.pi * v * qp[keep]).sum()
        counts[j] = int(keep.sum())
    return out, counts


def theta_sum(G, P, centers, radii, u, v, R, use_numba: bool | None = None):
    G = np.ascontiguousarray(G, dtype=np.float64)
    P = np.ascontiguousarray(P, dtype=np.float64)
    centers = np.ascontiguousarray(centers, dtype=np.float64)
    lo, hi = box_ranges(centers, np.asarray(radii, dtype=np.float64))
    if centers.shape[1] == 0:
        return np.ones(centers.shape[0], dtype=np.complex128), np.ones(centers.shape[0], dtype=np.int64)
    fn = _theta_sum_numba if (USE_NUMBA if use_numba is None else use_numba) else _theta_sum_numpy
    return fn(G, P, centers, lo, hi, float(u), float(v), float(R))


theta_sum_numba = _theta_sum_numba
theta_sum_numpy = _theta_sum_numpy


# ---------------------------------------------------------------------------
# Coset series: sum_j (c_j tau + d_j)^{-k} Im(gamma_j tau)^s w_j
# ---------------------------------------------------------------------------


@njit(cache=True)
def _coset_series_numba(c, d, W, taus, k, s):
    m = taus.shape[0]
    ncos, dim = W.shape
    out = np.zeros((m, dim), dtype=np.complex128)
    for t in range(m):
        tau = taus[t]
        v = tau.imag
        for j in range(ncos):
            jj = c[j] * tau + d[j]
            a2 = jj.real * jj.real + jj.imag * jj.imag
            f = np.exp(-k * np.log(jj) + s * math.log(v / a2))
            for r in range(dim):
                out[t, r] += f * W[j, r]
    return out


def _coset_series_numpy(c, d, W, taus, k, s):
    J = c[None, :] * taus[:, None] + d[None, :]
    F = np.exp(-k * np.log(J) + s * np.log(taus.imag[:, None] / np.abs(J) ** 2))
    return F @ W


def coset_series(c, d, W, taus, k, s, use_numba: bool | None = None):
    c = np.ascontiguousarray(c, dtype=np.float64)
    d = np.ascontiguousarray(d, dtype=np.float64)
    W = np.ascontiguousarray(W, dtype=np.complex128)
    taus = np.ascontiguousarray(np.atleast_1d(taus), dtype=np.complex128)
    fn = _coset_series_numba if (USE_NUMBA if use_numba is None else use_numba) else _coset_series_numpy
    return fn(c, d, W, taus, complex(k), complex(s))


coset_series_numba = _coset_series_numba
coset_series_numpy = _coset_series_numpy
