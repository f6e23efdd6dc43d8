"""Concrete measure-preserving systems, Folner windows, orbits and averages.

Systems are closed-form invertible maps preserving the uniform (Haar)
measure: torus rotations, the Anzai skew product, nilrotations on a
nilmanifold, and finite products.  Coordinates are reduced to the
fundamental domain after every step so orbits of length 10^6 stay exact to
machine precision.  Folner sequences are interval families in Z, with the
temperedness diagnostic computed by exact integer interval unions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .groups import FilteredGroup, GroupElement, GroupError
from .nilfunc import NilFunction, e
from .uniformity import FiniteSequence, orbit_sample


# ---------------------------------------------------------------------------
# systems


class DynSystem:
    """An invertible measure-preserving map in coordinates."""

    dim: int

    def step(self, state: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def orbit_points(self, x0, n_steps: int) -> np.ndarray:
        """States x, Tx, ..., T^{n_steps-1}x as an (n_steps, dim) array."""
        s = np.asarray(x0, dtype=float).reshape(self.dim)
        out = np.empty((n_steps, self.dim))
        for n in range(n_steps):
            out[n] = s
            s = self.step(s)
        return out


@dataclass(frozen=True)
class Rotation(DynSystem):
    """x -> x + alpha on T^d."""

    alpha: tuple

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(float(a) for a in
                                                np.atleast_1d(self.alpha)))

    @property
    def dim(self):
        return len(self.alpha)

    def step(self, state):
        return (state + np.array(self.alpha)) % 1.0


@dataclass(frozen=True)
class AnzaiSkew(DynSystem):
    """(x, y) -> (x + alpha, y + x) on T^2; the standard 2-step test map."""

    alpha: float
    dim = 2

    def step(self, state):
        x, y = state
        return np.array([(x + self.alpha) % 1.0, (y + x) % 1.0])


class HeisenbergNil(DynSystem):
    """Left rotation g -> a g on a nilmanifold, in fundamental-domain coords."""

    def __init__(self, a: GroupElement):
        self.a = a
        self.group: FilteredGroup = a.group
        self.dim = self.group.dim

    def step(self, state):
        moved = self.group.multiply(self.a.vec, state)
        return self.group.fractional(moved)

    def orbit_points(self, x0, n_steps: int):
        # a^n in closed form, then one reduction per point: no drift over
        # long orbits, unlike step-by-step iteration
        ns = np.arange(n_steps, dtype=float)[:, None]
        an = self.group.power(self.a.vec, ns[..., 0])
        pts = self.group.multiply(an, np.asarray(x0, dtype=float))
        return self.group.fractional(pts)


class Product(DynSystem):
    """The product of component systems on the product space."""

    def __init__(self, factors):
        self.factors = list(factors)
        self.dim = sum(f.dim for f in self.factors)

    def step(self, state):
        out = np.empty(self.dim)
        i = 0
        for f in self.factors:
            out[i:i + f.dim] = f.step(state[i:i + f.dim])
            i += f.dim
        return out


# ---------------------------------------------------------------------------
# observables


@dataclass(frozen=True)
class Character:
    """e(m . x) as a function of the coordinate state."""

    freqs: tuple

    def __post_init__(self):
        object.__setattr__(self, "freqs",
                           tuple(int(v) for v in np.atleast_1d(self.freqs)))

    def __call__(self, states):
        return e(np.asarray(states, dtype=float) @ np.array(self.freqs,
                                                            dtype=float))

    def space_mean(self):
        return 1.0 + 0.0j if all(v == 0 for v in self.freqs) else 0.0 + 0.0j


@dataclass(frozen=True)
class NilObservable:
    """A nilmanifold function evaluated on HeisenbergNil states."""

    func: NilFunction

    def __call__(self, states):
        return self.func.eval(states)

    def space_mean(self):
        return self.func.space_mean()


def orbit(sys: DynSystem, x0, f, n_steps: int) -> FiniteSequence:
    """The sampled sequence f(T^n x0), n = 0..n_steps-1, as orbit data."""
    pts = sys.orbit_points(x0, n_steps)
    return orbit_sample(np.asarray(f(pts), dtype=complex).ravel())


def measure_preservation_check(sys: DynSystem, sample: int = 100000,
                               max_freq: int = 3, seed: int = 0):
    """Compare low-order Fourier moments before/after one step of the map.

    Returns (max moment discrepancy, statistical threshold 4/sqrt(sample)).
    """
    rng = np.random.default_rng(seed)
    pts = rng.uniform(0.0, 1.0, size=(sample, sys.dim))
    pushed = np.array([sys.step(p) for p in pts])
    worst = 0.0
    grids = np.stack(np.meshgrid(*[np.arange(-max_freq, max_freq + 1)] *
                                 sys.dim, indexing="ij"), -1).reshape(-1, sys.dim)
    for m in grids:
        if not np.any(m):
            continue
        before = np.mean(e(pts @ m.astype(float)))
        after = np.mean(e(pushed @ m.astype(float)))
        worst = max(worst, abs(before - after))
    return worst, 4.0 / np.sqrt(sample)


# ---------------------------------------------------------------------------
# Folner sequences


@dataclass(frozen=True)
class FolnerSeq:
    """A schedule of integer intervals [b_j, b_j + N_j), j = 0, 1, ..."""

    kind: str  # "intervals" | "shifted"
    windows: tuple  # ((b_0, N_0), (b_1, N_1), ...), N_j strictly increasing? monotone

    def __post_init__(self):
        ws = tuple((int(b), int(n)) for b, n in self.windows)
        if any(n < 1 for _, n in ws):
            raise ValueError("window lengths must be positive")
        if any(ws[j + 1][1] < ws[j][1] for j in range(len(ws) - 1)):
            raise ValueError("window lengths must be monotone")
        object.__setattr__(self, "windows", ws)

    def __len__(self):
        return len(self.windows)

    def window(self, j: int) -> tuple[int, int]:
        return self.windows[j]

    def required_length(self, J: int | None = None) -> int:
        ws = self.windows[: (J if J is not None else len(self.windows))]
        return max(b + n for b, n in ws)


def interval_windows(lengths) -> FolnerSeq:
    """The standard Folner family of initial intervals [0, N_j)."""
    return FolnerSeq("intervals", tuple((0, int(n)) for n in lengths))


def shifted_windows(pairs) -> FolnerSeq:
    return FolnerSeq("shifted", tuple(pairs))


def doubling_lengths(start: int, stop: int):
    out = []
    n = start
    while n <= stop:
        out.append(n)
        n *= 2
    return out


def _merge_intervals(ivs):
    """Total size of a union of inclusive integer intervals [lo, hi]."""
    ivs = sorted(ivs)
    total = 0
    cur_lo, cur_hi = ivs[0]
    for lo, hi in ivs[1:]:
        if lo > cur_hi + 1:
            total += cur_hi - cur_lo + 1
            cur_lo, cur_hi = lo, hi
        else:
            cur_hi = max(cur_hi, hi)
    return total + cur_hi - cur_lo + 1


def temperedness_check(phi: FolnerSeq, upto: int | None = None):
    """Exact bounded-union ratios |U_{k<=n} Phi_k^{-1} Phi_{n+1}| / |Phi_{n+1}|.

    For intervals the difference set Phi_k^{-1} Phi_{n+1} is again an
    interval, so the union cardinalities are computed exactly.  Returns
    (max ratio, list of per-prefix ratios).
    """
    J = len(phi) if upto is None else min(upto, len(phi))
    ratios = []
    for n in range(J - 1):
        b1, n1 = phi.window(n + 1)
        ivs = []
        for k in range(n + 1):
            bk, nk = phi.window(k)
            ivs.append((b1 - (bk + nk - 1), b1 + n1 - 1 - bk))
        ratios.append(_merge_intervals(ivs) / n1)
    return (max(ratios) if ratios else 1.0), ratios


# ---------------------------------------------------------------------------
# averages


def birkhoff_average(sys: DynSystem, x0, f, phi: FolnerSeq,
                     J: int | None = None):
    """Partial averages of f along the Folner windows, plus the space mean.

    Returns (list of per-window averages, reference integral of f).
    """
    J = len(phi) if J is None else J
    need = phi.required_length(J)
    vals = orbit(sys, x0, f, need).values
    csum = np.concatenate([[0.0 + 0.0j], np.cumsum(vals)])
    avgs = [(csum[b + n] - csum[b]) / n for b, n in phi.windows[:J]]
    ref = f.space_mean() if hasattr(f, "space_mean") else None
    return avgs, ref


def maximal_function_diagnostic(sys: DynSystem, f, phi: FolnerSeq, x0s,
                                lambdas):
    """Empirical tail of the maximal average against the weak (1,1) scale.

    Returns rows (lambda, fraction of sampled x0 with max_j |avg| > lambda,
    lambda^{-1} * empirical L1 norm of f).
    """
    maxima = []
    l1 = None
    for x0 in x0s:
        avgs, _ = birkhoff_average(sys, x0, f, phi)
        maxima.append(max(abs(a) for a in avgs))
        if l1 is None:
            vals = orbit(sys, x0, f, phi.required_length()).values
            l1 = float(np.mean(np.abs(vals)))
    maxima = np.array(maxima)
    return [(float(lam), float(np.mean(maxima > lam)), float(l1 / lam))
            for lam in lambdas]
