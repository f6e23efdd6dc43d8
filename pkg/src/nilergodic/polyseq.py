"""Polynomial sequences for a filtration, discrete derivatives, cube sequences.

A sequence is stored in Taylor-binomial form

    g(n) = a_0 * a_1^C(n,1) * ... * a_l^C(n,l),

with the i-th coefficient required to lie in the i-th filtration subgroup.
Binomials C(n, j) are computed in exact integer arithmetic, also for
negative n, before any coordinate is touched.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .groups import (
    CubeGroup,
    FilteredGroup,
    GroupElement,
    GroupError,
    cube_filtration,
    identity,
    pair_element,
    reduce_to_fundamental_domain,
)


def binomial(n: int, j: int) -> int:
    """C(n, j) = n(n-1)...(n-j+1)/j!, integer-valued for every integer n."""
    if j < 0:
        return 0
    num = 1
    for t in range(j):
        num *= n - t
    return num // math.factorial(j)


@dataclass(frozen=True)
class PolySeq:
    """A polynomial sequence in Taylor-binomial coefficient form."""

    group: FilteredGroup
    coeffs: tuple  # (a_0, ..., a_l), a_i a GroupElement in the i-th subgroup

    def __post_init__(self):
        if len(self.coeffs) != self.group.length + 1:
            raise GroupError(
                f"need {self.group.length + 1} Taylor coefficients, "
                f"got {len(self.coeffs)}")
        for i, a in enumerate(self.coeffs):
            if a.group != self.group:
                raise GroupError("coefficient group mismatch")
            if i >= 1 and not a.in_subgroup(i):
                raise GroupError(f"coefficient a_{i} is not in subgroup {i}")
        object.__setattr__(self, "coeffs", tuple(self.coeffs))

    def __call__(self, n: int) -> GroupElement:
        return self.evaluate(n)

    def evaluate(self, n: int) -> GroupElement:
        out = self.coeffs[0]
        for j in range(1, len(self.coeffs)):
            out = out * (self.coeffs[j] ** binomial(n, j))
        return out

    def evaluate_many(self, ns) -> np.ndarray:
        """Coordinates of g(n) for an array of integers n, shape (len(ns), dim)."""
        ns = [int(n) for n in np.asarray(ns).ravel()]
        g = self.group
        out = np.broadcast_to(self.coeffs[0].vec, (len(ns), g.dim)).copy()
        for j in range(1, len(self.coeffs)):
            e = np.array([float(binomial(n, j)) for n in ns])
            out = g.multiply(out, g.power(self.coeffs[j].vec, e))
        return out


def constant(group: FilteredGroup, c: GroupElement) -> PolySeq:
    """The constant sequence n -> c."""
    coeffs = [c] + [identity(group) for _ in range(group.length)]
    return PolySeq(group, tuple(coeffs))


def left_multiple(c: GroupElement, g: PolySeq) -> "SequenceHandle":
    """The sequence n -> c * g(n)."""
    return SequenceHandle(g.group, lambda n: c * g(n))


class SequenceHandle:
    """A group-valued sequence given by an evaluation rule.

    Used for discrete derivatives, whose closed Taylor form we never need:
    polynomiality is certified by iterating the derivative, not assumed.
    """

    def __init__(self, group: FilteredGroup, rule):
        self.group = group
        self._rule = rule

    def __call__(self, n: int) -> GroupElement:
        return self._rule(n)

    def evaluate(self, n: int) -> GroupElement:
        return self._rule(n)


def discrete_derivative(g, k: int) -> SequenceHandle:
    """The sequence n -> g(n)^{-1} g(n+k)."""
    return SequenceHandle(g.group, lambda n: g(n).inv() * g(n + k))


def iterated_derivative(g, ks) -> SequenceHandle:
    """Apply discrete derivatives for the shifts ks in order."""
    out = g
    for k in ks:
        out = discrete_derivative(out, k)
    return out


def is_identity_sequence(g, ns, tol: float = 1e-9) -> bool:
    """Whether g(n) is the identity at every sampled n."""
    return all(g(n).is_identity(tol) for n in ns)


def cube_sequence(g: PolySeq, k: int) -> SequenceHandle:
    """The conjugated cube sequence paired from the k-shifted and plain orbits.

    Component 0 at n is {g(k)}^{-1} g(n+k) g(k)^{-1} {g(k)}, component 1 is
    the same with k = 0; the pair lies in the first cube subgroup for all n.
    """
    cube = cube_filtration(g.group)
    if not isinstance(cube, CubeGroup):
        raise GroupError("cube sequence needs a nontrivial group")
    gk = g(k)
    g0 = g(0)
    fk, _ = reduce_to_fundamental_domain(gk)
    f0, _ = reduce_to_fundamental_domain(g0)

    def rule(n: int) -> GroupElement:
        c0 = fk.inv() * g(n + k) * gk.inv() * fk
        c1 = f0.inv() * g(n) * g0.inv() * f0
        return pair_element(cube, c0, c1)

    return SequenceHandle(cube, rule)
