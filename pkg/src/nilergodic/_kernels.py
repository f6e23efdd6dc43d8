"""Compiled inner loops for the level-3 orbit uniformity estimator.

The recursion needs the level-1 moving-average power of every double
multiplicative derivative, O(K^2) sequences of length ~N; results are
accumulated per outer shift and reduced in fixed order so repeated runs are
bit-identical.
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange


@njit(cache=True)
def _ma_power(h, K):
    M = h.shape[0]
    n_win = M - K + 1
    if n_win <= 0:
        return 0.0
    s = 0.0 + 0.0j
    for i in range(K):
        s += h[i]
    acc = s.real * s.real + s.imag * s.imag
    for i in range(K, M):
        s += h[i] - h[i - K]
        acc += s.real * s.real + s.imag * s.imag
    return acc / (n_win * K * K)


@njit(cache=True)
def _level2_power(g, K):
    total = K * _ma_power(g * np.conj(g), K)
    for j in range(1, K):
        total += 2.0 * (K - j) * _ma_power(g[j:] * np.conj(g[:g.shape[0] - j]), K)
    return total / (K * K)


@njit(parallel=True, cache=True)
def level3_power(f, K):
    parts = np.zeros(K)
    for j1 in prange(K):
        g = f[j1:] * np.conj(f[:f.shape[0] - j1])
        w = 1.0 * K if j1 == 0 else 2.0 * (K - j1)
        parts[j1] = w * _level2_power(g, K)
    return parts.sum() / (K * K)
