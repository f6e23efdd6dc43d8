"""Uniformity norms: cyclic Gowers norms and orbit-based seminorm estimators.

Two regimes, kept apart by an interpretation tag on the data:

* CYCLIC: exact Gowers box norms on Z_N, with an FFT fast path at level 2
  and brute-force oracles for small N.
* ORBIT: finite-window estimators of the ergodic uniformity seminorms,
  built from Fejer-smoothed averages of multiplicative derivatives along a
  sampled orbit; truncation parameters (N, K) are recorded in every result.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

MAX_ORBIT_LEVEL = 3


@dataclass(frozen=True)
class FiniteSequence:
    """A complex data vector tagged with how it should be interpreted."""

    values: np.ndarray
    interpretation: str = "cyclic"  # "cyclic" | "orbit"

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex).ravel()
        if len(vals) < 1:
            raise ValueError("need at least one sample")
        if self.interpretation not in ("cyclic", "orbit"):
            raise ValueError(f"unknown interpretation {self.interpretation!r}")
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return len(self.values)


def cyclic(values) -> FiniteSequence:
    return FiniteSequence(np.asarray(values), "cyclic")


def orbit_sample(values) -> FiniteSequence:
    return FiniteSequence(np.asarray(values), "orbit")


@dataclass(frozen=True)
class UniformityEstimate:
    """A level-k uniformity value together with its provenance.

    `value` is the 2^k-th root; `power` is the raw averaged quantity
    value**(2**k), which is the scale on which the smoothed recursion and
    its finite-truncation bias live.
    """

    level: int
    value: float
    method: str  # "brute" | "fft" | "recursive" | "orbit"
    N: int
    K: int | None = None
    power: float = field(default=0.0)

    def row(self):
        return (self.method, self.level, self.N,
                self.K if self.K is not None else "", self.value)


def mean(f: FiniteSequence) -> complex:
    """The plain average; the level-0 convention (integral of f)."""
    return complex(np.mean(f.values))


# ---------------------------------------------------------------------------
# cyclic Gowers norms


def _cyclic_power(vals: np.ndarray, k: int) -> float:
    """The 2^k-th power of the U^k(Z_N) norm via derivative recursion."""
    n = len(vals)
    if k == 1:
        return abs(np.mean(vals)) ** 2
    if k == 2:
        fhat = np.fft.fft(vals) / n
        return float(np.sum(np.abs(fhat) ** 4))
    total = 0.0
    for h in range(n):
        total += _cyclic_power(vals * np.conj(np.roll(vals, -h)), k - 1)
    return total / n


def gowers_norm_cyclic(f: FiniteSequence, k: int) -> UniformityEstimate:
    """The U^k(Z_N) norm, 1 <= k <= 4, by the box-averaging recursion."""
    if f.interpretation != "cyclic":
        raise ValueError("cyclic norm needs cyclic data")
    if not 1 <= k <= 4:
        raise ValueError("supported levels are 1..4 (use mean() for level 0)")
    p = _cyclic_power(f.values, k)
    return UniformityEstimate(k, float(max(p, 0.0) ** (2.0 ** -k)),
                              "recursive", len(f), power=float(p))


def gowers_norm_brute(f: FiniteSequence, k: int) -> UniformityEstimate:
    """Direct summation over all cubes; oracle for small N, 1 <= k <= 3."""
    vals = f.values
    n = len(vals)
    if k == 1:
        p = abs(np.mean(vals)) ** 2
    elif k == 2:
        if n > 256:
            raise ValueError("brute-force U^2 capped at N = 256")
        idx = np.arange(n)
        h1 = idx[:, None]
        h2 = idx[None, :]
        acc = 0.0 + 0.0j
        for x in range(n):  # chunk over the base point to bound memory
            acc += np.sum(vals[x] * np.conj(vals[(x + h1) % n])
                          * np.conj(vals[(x + h2) % n])
                          * vals[(x + h1 + h2) % n])
        p = acc.real / n ** 3
    elif k == 3:
        if n > 32:
            raise ValueError("brute-force U^3 capped at N = 32")
        idx = np.arange(n)
        x = idx[:, None, None, None]
        h1 = idx[None, :, None, None]
        h2 = idx[None, None, :, None]
        h3 = idx[None, None, None, :]
        prod = (vals[x % n] * np.conj(vals[(x + h1) % n])
                * np.conj(vals[(x + h2) % n]) * vals[(x + h1 + h2) % n])
        prod = (prod * np.conj(vals[(x + h3) % n]) * vals[(x + h1 + h3) % n]
                * vals[(x + h2 + h3) % n]
                * np.conj(vals[(x + h1 + h2 + h3) % n]))
        p = np.sum(prod).real / n ** 4
    else:
        raise ValueError("brute force supports levels 1..3")
    return UniformityEstimate(k, float(max(p, 0.0) ** (2.0 ** -k)),
                              "brute", n, power=float(p))


def gowers_u2_fft(f: FiniteSequence) -> UniformityEstimate:
    """U^2 via the fourth-moment identity for normalized Fourier coefficients."""
    if f.interpretation != "cyclic":
        raise ValueError("the FFT identity needs cyclic data")
    n = len(f)
    fhat = np.fft.fft(f.values) / n
    p = float(np.sum(np.abs(fhat) ** 4))
    return UniformityEstimate(2, p ** 0.25, "fft", n, power=p)


def u_vs_lp_check(f: FiniteSequence, l: int) -> tuple[float, float]:
    """The U^{l+1} norm and the empirical L^{2^l} norm it is dominated by."""
    u = gowers_norm_cyclic(f, l + 1).value
    lp = float(np.mean(np.abs(f.values) ** (2 ** l)) ** (2.0 ** -l))
    return u, lp


# ---------------------------------------------------------------------------
# orbit estimators


def _moving_average_power(vals: np.ndarray, K: int) -> float:
    """Mean of |window average of length K|^2 over all full windows.

    This is the Fejer-smoothed autocorrelation sum in closed form: averaging
    the squared modulus of a length-K moving average weights the lag-j
    correlation by (K-|j|)/K^2.
    """
    csum = np.concatenate([[0.0 + 0.0j], np.cumsum(vals)])
    windows = (csum[K:] - csum[:-K]) / K
    return float(np.mean(np.abs(windows) ** 2))


def _orbit_power(vals: np.ndarray, level: int, K: int) -> float:
    if level == 1:
        return _moving_average_power(vals, K)
    total = K * _orbit_power(vals * np.conj(vals), level - 1, K)
    for j in range(1, K):
        dj = vals[j:] * np.conj(vals[:-j])
        total += 2.0 * (K - j) * _orbit_power(dj, level - 1, K)
    return total / K ** 2


def _orbit_power_level3(vals: np.ndarray, K: int) -> float:
    from ._kernels import level3_power
    return float(level3_power(np.ascontiguousarray(vals, dtype=np.complex128),
                              K))


def ghk_orbit_estimate(f_orbit: FiniteSequence, k: int,
                       K: int | None = None) -> UniformityEstimate:
    """Level-k uniformity seminorm estimate from an orbit sample.

    Level 1 is the mean squared modulus of the length-K moving average;
    level l+1 is the Fejer-weighted average over shifts |j| < K of the
    level-l estimate of n -> f(n+j) conj(f(n)), mirroring the smoothed
    recursion defining the seminorms.  The (N, K) truncation is recorded;
    there is no finite-data bound on the gap to the true seminorm.
    """
    if f_orbit.interpretation != "orbit":
        raise ValueError("orbit estimator needs orbit-sampled data")
    if not 1 <= k <= MAX_ORBIT_LEVEL:
        raise ValueError(f"orbit levels supported: 1..{MAX_ORBIT_LEVEL}")
    n = len(f_orbit)
    if K is None:
        K = int(np.sqrt(n))
    if K >= n / 2:
        raise ValueError(f"window K={K} too large for orbit length {n}")
    if k == 3:
        p = _orbit_power_level3(f_orbit.values, K)
    else:
        p = _orbit_power(f_orbit.values, k, K)
    return UniformityEstimate(k, float(max(p, 0.0) ** (2.0 ** -k)),
                              "orbit", n, K=K, power=float(p))
