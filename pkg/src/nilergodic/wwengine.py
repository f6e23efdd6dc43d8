"""Weighted ergodic averages and the experiments built on them.

The central objects are finite-window averages (1/N) sum a_n f(T^n x) with
nilsequence (or linear-phase) weights a_n, together with:

* an exact sup over all linear phase weights per window (zero-padded FFT
  with a reported off-grid correction bound),
* normalized sups over declared finite nilsequence families (the true sup
  over an infinite-dimensional family is not computable; the declared grid
  is recorded in every report),
* a van der Corput inequality checker in which the usual asymptotic
  remainders are replaced by explicit finite-N bounds, making the lemma a
  falsifiable inequality on concrete data,
* the ratio experiment comparing normalized weighted averages against
  orbit uniformity estimates,
* weighted multiple ergodic averages over a target rotation evaluated on
  an L^2 grid, reported as a Cauchy trace.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .groups import FilteredGroup
from .nilfunc import NilFunction, e, sobolev_norm
from .polyseq import PolySeq
from .systems import FolnerSeq
from .uniformity import FiniteSequence, ghk_orbit_estimate


@dataclass
class WeightedAverageReport:
    """Per-window values of a weighted-average experiment, with provenance."""

    kind: str
    rows: list = field(default_factory=list)  # dicts, one per window
    normalization: str = "none"
    metadata: dict = field(default_factory=dict)

    @property
    def values(self):
        return [r["value"] for r in self.rows]

    def final(self):
        return self.rows[-1]["value"]


def _window_values(f_orbit: FiniteSequence, phi: FolnerSeq, J):
    J = len(phi) if J is None else J
    need = phi.required_length(J)
    if len(f_orbit) < need:
        raise ValueError(
            f"orbit of length {len(f_orbit)} does not cover the windows "
            f"(need {need})")
    return f_orbit.values, phi.windows[:J]


def weighted_average(f_orbit: FiniteSequence, w, phi: FolnerSeq,
                     J: int | None = None) -> WeightedAverageReport:
    """Exact partial averages (1/N) sum_{n in window} w(n) f(n)."""
    vals, windows = _window_values(f_orbit, phi, J)
    w = np.asarray(w, dtype=complex).ravel()
    if len(w) < phi.required_length(len(windows)):
        raise ValueError("weight sequence shorter than the windows")
    prod = vals * w[: len(vals)]
    csum = np.concatenate([[0.0 + 0.0j], np.cumsum(prod)])
    report = WeightedAverageReport("weighted-average")
    for b, n in windows:
        report.rows.append({"N": n, "b": b,
                            "value": complex(csum[b + n] - csum[b]) / n})
    return report


def uniform_sup_linear(f_orbit: FiniteSequence, phi: FolnerSeq,
                       J: int | None = None,
                       pad: int = 4) -> WeightedAverageReport:
    """Per window, the sup over all unimodular linear weights lambda^n.

    The sup of |(1/N) sum f(n) lambda^n| over lambda in T is evaluated as
    the max modulus of the pad-times zero-padded DFT; each row carries a
    correction bound pi * N * spacing * sup|f| covering the off-grid gap.
    """
    vals, windows = _window_values(f_orbit, phi, J)
    if any(b != 0 for b, _ in windows):
        raise ValueError("FFT sup needs initial-interval windows")
    report = WeightedAverageReport("uniform-sup-linear",
                                   metadata={"pad": pad})
    for _, n in windows:
        spec = np.abs(np.fft.fft(vals[:n], pad * n)) / n
        spacing = 1.0 / (pad * n)
        bound = np.pi * n * spacing * float(np.max(np.abs(vals[:n])))
        report.rows.append({"N": n, "value": float(np.max(spec)),
                            "correction_bound": bound})
    return report


def sobolev_order(G: FilteredGroup) -> int:
    """The derivative order sum_{r=1}^l (d_r - d_{r+1}) C(l, r-1)."""
    l = G.length
    total = 0
    for r in range(1, l + 1):
        dr = G.subgroup_dim(r)
        dr1 = G.subgroup_dim(r + 1) if r < l else 0
        total += (dr - dr1) * math.comb(l, r - 1)
    return total


def nilsequence_weights(g: PolySeq, F: NilFunction, n_max: int) -> np.ndarray:
    """The sequence F(g(n)) for n = 0..n_max-1."""
    pts = g.evaluate_many(range(n_max))
    return np.asarray(F.eval(pts), dtype=complex)


def uniform_sup_nilsequence(f_orbit: FiniteSequence, family,
                            phi: FolnerSeq, J: int | None = None,
                            M: int = 24) -> WeightedAverageReport:
    """Max over a declared (PolySeq, NilFunction) family of the normalized
    weighted average; normalization is the W^{k, 2^l} norm with k from the
    filtration-degree formula."""
    vals, windows = _window_values(f_orbit, phi, J)
    if not family:
        raise ValueError("empty weight family")
    need = phi.required_length(len(windows))
    prepared = []
    for g, F in family:
        k = sobolev_order(g.group)
        p = 2 ** g.group.length
        norm = sobolev_norm(F, k, p, M=M)
        if norm == 0:
            raise ValueError("zero-norm family member")
        prepared.append((nilsequence_weights(g, F, need), norm))
    report = WeightedAverageReport(
        "uniform-sup-nilsequence",
        normalization="W^{k,2^l} with k from the filtration formula",
        metadata={"family_size": len(family)})
    for b, n in windows:
        best = 0.0
        for w, norm in prepared:
            avg = abs(np.mean(w[b:b + n] * vals[b:b + n]))
            best = max(best, avg / norm)
        report.rows.append({"N": n, "value": float(best)})
    return report


def van_der_corput_check(u, N: int, K: int, C: float | None = None):
    """Finite-N van der Corput inequality with an explicit remainder.

    For u_n (scalars or vectors, n = 0..N+K-2 at least) bounded by C:

        lhs  =  || (1/N) sum_{n<N} u_n ||^2
        rhs  =  | (1/K^2) sum_{|j|<K} (K-|j|) S_j |,
                S_j = (1/N) sum_{n<N} <u_{n+j}, u_n>

    and lhs <= 2*rhs + remainder with
    remainder = 4 C^2 K / N + 2 C^2 K^2 / N^2, the two terms bounding the
    window-shift substitution and the correlation re-windowing exactly.
    Returns (lhs, rhs_main, remainder_bound).
    """
    u = np.asarray(u, dtype=complex)
    if u.ndim == 1:
        u = u[:, None]
    if len(u) < N + K - 1:
        raise ValueError(f"need at least N+K-1 = {N + K - 1} samples")
    if K >= N:
        raise ValueError("K must be smaller than N")
    if C is None:
        C = float(np.max(np.linalg.norm(u, axis=1)))
    lhs = float(np.linalg.norm(np.mean(u[:N], axis=0)) ** 2)
    total = K * np.real(np.sum(u[:N] * np.conj(u[:N]))) / N
    for j in range(1, K):
        s_j = np.sum(u[j:N + j] * np.conj(u[:N])) / N
        total += 2.0 * (K - j) * np.real(s_j)
    rhs_main = abs(total) / K ** 2
    remainder = 4.0 * C * C * K / N + 2.0 * (C * K / N) ** 2
    return lhs, float(rhs_main), float(remainder)


def main_estimate_ratio(f_orbit: FiniteSequence, phi: FolnerSeq,
                        level: int = 1, K: int | None = None,
                        eps: float = 0.05, family=None,
                        J: int | None = None) -> WeightedAverageReport:
    """Normalized sup-average divided by (orbit U^{level+1} estimate + eps).

    With the default family=None the numerator is the exact linear-phase
    FFT sup (the level-1 case); otherwise the declared nilsequence family.
    The denominator is computed once from the full orbit.
    """
    est = ghk_orbit_estimate(f_orbit, level + 1, K)
    if family is None:
        sup = uniform_sup_linear(f_orbit, phi, J)
    else:
        sup = uniform_sup_nilsequence(f_orbit, family, phi, J)
    report = WeightedAverageReport(
        "main-estimate-ratio",
        metadata={"eps": eps, "estimate": est.value, "estimate_K": est.K,
                  "level": level + 1})
    for row in sup.rows:
        report.rows.append({"N": row["N"], "numerator": row["value"],
                            "denominator": est.value + eps,
                            "value": row["value"] / (est.value + eps)})
    return report


def weighted_multiple_average(weights, beta, polys, freqs,
                              phi: FolnerSeq, J: int | None = None,
                              M: int = 512) -> WeightedAverageReport:
    """Weighted multiple averages over a rotation target, on an L^2 grid.

    Computes A_N(y) = (1/N) sum_n phi(n) prod_i e(m_i (y + p_i(n) beta))
    on an M-point grid for each window, and reports the Cauchy trace
    ||A_{N_{j+1}} - A_{N_j}||_{L^2(grid)}.  Polynomials are integer
    coefficient tuples (ascending); guards: degree <= 4, at most 3 factors.
    """
    polys = [tuple(int(c) for c in p) for p in polys]
    freqs = [int(m) for m in freqs]
    if len(polys) != len(freqs):
        raise ValueError("one frequency per polynomial")
    if len(polys) > 3:
        raise ValueError("at most 3 polynomial factors supported")
    if any(len(p) - 1 > 4 for p in polys):
        raise ValueError("polynomial degree capped at 4")
    w = np.asarray(weights.values if isinstance(weights, FiniteSequence)
                   else weights, dtype=complex)
    J = len(phi) if J is None else J
    need = phi.required_length(J)
    if len(w) < need:
        raise ValueError("weight orbit shorter than the windows")
    n = np.arange(need, dtype=object)
    phase = np.zeros(need, dtype=float)
    bfrac = Fraction(beta)  # exact value of the float argument
    for p, m in zip(polys, freqs):
        pn = sum(c * n ** i for i, c in enumerate(p))
        # exact rational mod-1 reduction: n^4 * beta overflows float precision
        phase += np.array([float((m * int(v) * bfrac) % 1) for v in pn])
    seq = w[:need] * e(phase)
    csum = np.concatenate([[0.0 + 0.0j], np.cumsum(seq)])
    grid = (np.arange(M) + 0.5) / M
    mtot = sum(freqs)
    profile = e(mtot * grid)
    report = WeightedAverageReport(
        "weighted-multiple", metadata={"beta": beta, "grid": M,
                                       "freqs": freqs, "polys": polys})
    prev = None
    for b, nn in phi.windows[:J]:
        c = complex(csum[b + nn] - csum[b]) / nn
        a_grid = c * profile
        cauchy = (float(np.sqrt(np.mean(np.abs(a_grid - prev) ** 2)))
                  if prev is not None else np.nan)
        report.rows.append({"N": nn, "coefficient": c, "value": cauchy})
        prev = a_grid
    return report
