"""Random trigonometric polynomials defeating any sup-norm average bound.

P(t) = sum_{n=1}^N r_n a_n cos(n t) with Rademacher signs r_n and the
profile a_n = sqrt(log n / n).  The squared L^2 norm grows like
(log N)^2 / 4 while the product of the sup norm and the fourth-moment
spectral quantity only grows like a smaller power of log N, so the ratio

    rho(N) = l2sq / (sup * u2)

is unbounded in N: no inequality l2sq <= C * sup * u2 can hold with a
fixed constant.  Everything here is exact or certified: l2sq and u2 have
closed forms from orthogonality, and the sup is a dense-grid maximum with
a derivative-based error bound.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def default_profile(N: int) -> np.ndarray:
    """a_n = sqrt(log n / n) for n = 1..N (a_1 = 0)."""
    n = np.arange(1, N + 1, dtype=float)
    return np.sqrt(np.log(n) / n)


def constant_profile(N: int) -> np.ndarray:
    """a_n = 1/sqrt(N), a normalized flat contrast case."""
    return np.full(N, 1.0 / np.sqrt(N))


PROFILES = {"default": default_profile, "constant": constant_profile}


@dataclass(frozen=True)
class RandomTrigPoly:
    """P(t) = sum_n signs[n-1] * coeffs[n-1] * cos(n t)."""

    coeffs: np.ndarray  # a_1..a_N, nonnegative
    signs: np.ndarray   # r_1..r_N in {-1, +1}
    seed: int

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        s = np.asarray(self.signs, dtype=float)
        if len(c) != len(s):
            raise ValueError("coefficient/sign length mismatch")
        if np.any(c < 0):
            raise ValueError("coefficients must be nonnegative")
        if not np.all(np.abs(s) == 1.0):
            raise ValueError("signs must be +-1")
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "signs", s)

    @property
    def N(self) -> int:
        return len(self.coeffs)

    def eval(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        n = np.arange(1, self.N + 1)
        c = self.signs * self.coeffs
        flat = t.ravel()
        out = np.empty(flat.shape)
        step = max(1, 2 ** 22 // max(self.N, 1))  # bound the outer product
        for i in range(0, len(flat), step):
            out[i:i + step] = np.cos(np.multiply.outer(flat[i:i + step], n)) @ c
        return out.reshape(t.shape)

    def grid_values(self, m: int) -> np.ndarray:
        """Values at t_j = 2 pi j / m, j = 0..m-1, via an inverse real FFT."""
        if m < 2 * self.N + 2:
            raise ValueError("grid too coarse for the band width")
        spec = np.zeros(m // 2 + 1)
        spec[1:self.N + 1] = 0.5 * m * self.signs * self.coeffs
        return np.fft.irfft(spec, m)


def build(N: int, seed: int, profile: str = "default") -> RandomTrigPoly:
    """Seeded Rademacher signs (PCG64) with the named coefficient profile."""
    if N < 2:
        raise ValueError("need N >= 2")
    rng = np.random.default_rng(seed)
    signs = rng.integers(0, 2, size=N) * 2.0 - 1.0
    return RandomTrigPoly(PROFILES[profile](N), signs, seed)


def l2_squared(P: RandomTrigPoly) -> float:
    """Exact: orthogonality of cosines gives (1/2) sum a_n^2."""
    return float(0.5 * np.sum(P.coeffs ** 2))


def u2_value(P: RandomTrigPoly) -> float:
    """Exact fourth-moment quantity (sum |c_hat|^4)^{1/4} = (sum a_n^4/8)^{1/4}.

    Each cosine splits into two conjugate frequencies of modulus a_n/2, so
    the fourth-power sum is 2 * (a_n/2)^4 = a_n^4 / 8.
    """
    return float(np.sum(P.coeffs ** 4) / 8.0) ** 0.25


def sup_norm(P: RandomTrigPoly, grid_factor: int = 16):
    """Grid sup over [0, 2 pi) with golden-section refinement and a bound.

    Returns (sup_estimate, error_bound): the true sup lies in
    [sup_estimate, grid_max + bound].  The bound is the smaller of the
    coefficient bound ||P'||_inf * spacing / 2 with ||P'||_inf <= sum n a_n
    and the degree bound: ||P'||_inf <= N ||P||_inf for a degree-N
    trigonometric polynomial, solved for the sup, which gives
    grid_max * (N spacing / 2) / (1 - N spacing / 2).
    """
    m = grid_factor * P.N
    vals = np.abs(P.grid_values(m))
    i = int(np.argmax(vals))
    spacing = 2.0 * np.pi / m
    t_i = i * spacing
    best = _golden_refine(lambda t: -abs(float(P.eval(t))),
                          t_i - spacing, t_i + spacing)
    grid_max = float(vals[i])
    sup = max(grid_max, abs(float(P.eval(best))))
    coeff_bound = float(np.sum(np.arange(1, P.N + 1) * P.coeffs)) \
        * spacing / 2.0
    half = P.N * spacing / 2.0
    degree_bound = grid_max * half / (1.0 - half) if half < 1.0 else np.inf
    return sup, min(coeff_bound, degree_bound)


def _golden_refine(f, a, b, tol=1e-10):
    inv = (np.sqrt(5.0) - 1.0) / 2.0
    c, d = b - inv * (b - a), a + inv * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - inv * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def norms(P: RandomTrigPoly):
    """(l2sq, u2, sup) with the sup's grid error bound discarded here;
    use sup_norm directly when the certificate is needed."""
    return l2_squared(P), u2_value(P), sup_norm(P)[0]


def ratio(P: RandomTrigPoly) -> float:
    l2sq, u2, sup = norms(P)
    return l2sq / (sup * u2) if sup * u2 > 0 else np.inf


def growth_experiment(n_schedule, seeds, profile: str = "default"):
    """rho(N) per (N, seed) plus the per-N median.

    Returns (rows, medians): rows are dicts with all norm components; the
    medians list pairs (N, median rho).  Unboundedness of rho refutes any
    fixed constant in the sup-norm version of the average bound; the
    finitary shadow asserted by the suite is growth of the median.
    """
    rows = []
    medians = []
    for N in n_schedule:
        rhos = []
        for seed in seeds:
            P = build(N, seed, profile)
            l2sq, u2, sup = norms(P)
            r = l2sq / (sup * u2)
            rows.append({"N": N, "seed": seed, "l2sq": l2sq, "u2": u2,
                         "sup": sup, "ratio": r})
            rhos.append(r)
        medians.append((N, float(np.median(rhos))))
    return rows, medians
