"""Arithmetic in filtered nilpotent Lie groups via Mal'cev coordinates.

The group menu is fixed: abelian groups with the constant filtration, the
3-dimensional Heisenberg group with its lower central series, direct squares,
and cube groups of these.  All group laws are closed-form, so products,
inverses and fundamental-domain reductions are exact up to rounding.

Coordinate convention: the i-th filtration subgroup occupies the *last* d_i
Mal'cev coordinates; membership in it means the first (d_1 - d_i) coordinates
vanish.  The lattice consists of the integer-coordinate points, and the
fundamental domain is the half-open unit box in coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

LATTICE_TOL = 1e-9


class GroupError(ValueError):
    """Structural error: mismatched groups or malformed coordinates."""


class FilteredGroup:
    """Base class: a nilpotent group with a rational filtration.

    Subclasses provide the closed-form group law on coordinate arrays with
    shape (..., dim); all operations broadcast over leading axes.
    """

    dim: int       # d_1, the coordinate length
    length: int    # filtration length l

    def subgroup_dim(self, i: int) -> int:
        """Dimension d_i of the i-th filtration subgroup (d_0 = d_1)."""
        raise NotImplementedError

    def multiply(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def inverse(self, a: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def power(self, a: np.ndarray, m) -> np.ndarray:
        """a^m for integer m (m may be an integer array broadcast with a)."""
        raise NotImplementedError

    def reduce(self, a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Split a = k * gamma with k in [0,1)^dim and gamma in the lattice."""
        k = self.fractional(a)
        gamma = self.multiply(self.inverse(k), a)
        return k, np.round(gamma)

    def fractional(self, a: np.ndarray) -> np.ndarray:
        """The fundamental-domain representative {a}."""
        raise NotImplementedError

    def identity(self) -> np.ndarray:
        return np.zeros(self.dim)

    def in_subgroup(self, a: np.ndarray, i: int, tol: float = LATTICE_TOL):
        """Whether a lies in the i-th filtration subgroup, up to tol."""
        if i <= 0:
            i = 1
        if i > self.length:
            return np.all(np.abs(a) < tol, axis=-1)
        nzero = self.dim - self.subgroup_dim(i)
        if nzero == 0:
            return np.full(np.shape(a)[:-1], True)
        return np.all(np.abs(a[..., :nzero]) < tol, axis=-1)

    def serialize(self) -> str:
        raise NotImplementedError

    def __eq__(self, other):
        return type(self) is type(other) and self.__dict__ == other.__dict__

    def __hash__(self):
        return hash((type(self).__name__, tuple(sorted(self.__dict__.items()))))


class AbelianGroup(FilteredGroup):
    """R^d with lattice Z^d and the constant filtration of length l.

    Every subgroup in the filtration is the whole group; this is the
    polynomial-phase filtration that turns degree-l phase polynomials into
    l-step sequences.
    """

    def __init__(self, d: int, length: int):
        if d < 0 or length < 0:
            raise GroupError("dimension and length must be nonnegative")
        if d == 0 and length > 0:
            raise GroupError("trivial group has length 0")
        self.dim = d
        self.length = length

    def subgroup_dim(self, i: int) -> int:
        return self.dim if i <= self.length else 0

    def multiply(self, a, b):
        return np.asarray(a, dtype=float) + np.asarray(b, dtype=float)

    def inverse(self, a):
        return -np.asarray(a, dtype=float)

    def power(self, a, m):
        return np.asarray(a, dtype=float) * np.asarray(m)[..., None] \
            if np.ndim(m) else np.asarray(a, dtype=float) * m

    def fractional(self, a):
        a = np.asarray(a, dtype=float)
        return a - np.floor(a)

    def serialize(self) -> str:
        return f"abelian:{self.dim}:{self.length}"

    def __repr__(self):
        return f"AbelianGroup(d={self.dim}, l={self.length})"


class Heisenberg3(FilteredGroup):
    """The 3-dimensional Heisenberg group, upper-triangular model.

    Coordinates (x, y, z) with (x,y,z)*(x',y',z') = (x+x', y+y', z+z'+x*y').
    Lower central series: dims (3, 1), length 2; the center is the z-axis.
    """

    dim = 3
    length = 2
    _dims = (3, 1)

    def subgroup_dim(self, i: int) -> int:
        return self._dims[i - 1] if 1 <= i <= 2 else (3 if i <= 0 else 0)

    def multiply(self, a, b):
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        out = a + b
        out[..., 2] += a[..., 0] * b[..., 1]
        return out

    def inverse(self, a):
        a = np.asarray(a, dtype=float)
        out = -a.copy()
        out[..., 2] = a[..., 0] * a[..., 1] - a[..., 2]
        return out

    def power(self, a, m):
        a = np.asarray(a, dtype=float)
        m = np.asarray(m, dtype=float)
        if m.ndim:
            m = m[..., None]
        out = a * m
        m0 = m[..., 0] if np.ndim(m) else m
        out[..., 2] += a[..., 0] * a[..., 1] * m0 * (m0 - 1) / 2
        return out

    def fractional(self, a):
        a = np.asarray(a, dtype=float)
        out = np.empty(np.shape(a))
        x, y, z = a[..., 0], a[..., 1], a[..., 2]
        out[..., 0] = x - np.floor(x)
        out[..., 1] = y - np.floor(y)
        zz = z - x * np.floor(y)
        out[..., 2] = zz - np.floor(zz)
        return out

    def serialize(self) -> str:
        return "heisenberg3"

    def __repr__(self):
        return "Heisenberg3()"


class _PairGroup(FilteredGroup):
    """Common arithmetic for groups whose elements are pairs over an inner group."""

    def __init__(self, inner: FilteredGroup):
        self.inner = inner
        self.dim = 2 * inner.dim

    def _halves(self, a):
        a = np.asarray(a, dtype=float)
        d = self.inner.dim
        return a[..., :d], a[..., d:]

    def multiply(self, a, b):
        a0, a1 = self._halves(a)
        b0, b1 = self._halves(b)
        return np.concatenate(
            [self.inner.multiply(a0, b0), self.inner.multiply(a1, b1)], axis=-1)

    def inverse(self, a):
        a0, a1 = self._halves(a)
        return np.concatenate(
            [self.inner.inverse(a0), self.inner.inverse(a1)], axis=-1)

    def power(self, a, m):
        a0, a1 = self._halves(a)
        return np.concatenate(
            [self.inner.power(a0, m), self.inner.power(a1, m)], axis=-1)

    def fractional(self, a):
        a0, a1 = self._halves(a)
        return np.concatenate(
            [self.inner.fractional(a0), self.inner.fractional(a1)], axis=-1)


class DirectSquare(_PairGroup):
    """G x G with the product filtration, componentwise group law."""

    def __init__(self, inner: FilteredGroup):
        super().__init__(inner)
        self.length = inner.length

    def subgroup_dim(self, i: int) -> int:
        return 2 * self.inner.subgroup_dim(i)

    def in_subgroup(self, a, i, tol: float = LATTICE_TOL):
        a0, a1 = self._halves(a)
        return self.inner.in_subgroup(a0, i, tol) & self.inner.in_subgroup(a1, i, tol)

    def serialize(self) -> str:
        return f"square({self.inner.serialize()})"

    def __repr__(self):
        return f"DirectSquare({self.inner!r})"


class CubeGroup(_PairGroup):
    """The cube group of an inner filtered group.

    Elements are pairs (g0, g1); the i-th subgroup consists of pairs with
    both components in the inner i-th subgroup and g0^{-1} g1 one level
    deeper.  The subgroup dimensions satisfy d~_i = d_i + d_{i+1}.
    """

    def __init__(self, inner: FilteredGroup):
        super().__init__(inner)
        self.length = inner.length

    def subgroup_dim(self, i: int) -> int:
        return self.inner.subgroup_dim(i) + self.inner.subgroup_dim(i + 1)

    def in_subgroup(self, a, i, tol: float = LATTICE_TOL):
        if i <= 0:
            i = 1
        a0, a1 = self._halves(a)
        diff = self.inner.multiply(self.inner.inverse(a0), a1)
        return (self.inner.in_subgroup(a0, i, tol)
                & self.inner.in_subgroup(a1, i, tol)
                & self.inner.in_subgroup(diff, i + 1, tol))

    def in_lattice(self, a, tol: float = LATTICE_TOL):
        """Membership in the cube lattice: integer pairs with g0^{-1}g1 one level down."""
        a = np.asarray(a, dtype=float)
        integral = np.all(np.abs(a - np.round(a)) < tol, axis=-1)
        a0, a1 = self._halves(a)
        diff = self.inner.multiply(self.inner.inverse(a0), a1)
        return integral & self.inner.in_subgroup(diff, 2, tol)

    def serialize(self) -> str:
        return f"cube({self.inner.serialize()})"

    def __repr__(self):
        return f"CubeGroup({self.inner!r})"


TRIVIAL = AbelianGroup(0, 0)


@dataclass(frozen=True)
class GroupElement:
    """A point of a filtered group, given by its Mal'cev coordinates."""

    group: FilteredGroup
    coords: tuple

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=float)
        if c.shape != (self.group.dim,):
            raise GroupError(
                f"expected {self.group.dim} coordinates, got shape {c.shape}")
        object.__setattr__(self, "coords", tuple(float(v) for v in c))

    @property
    def vec(self) -> np.ndarray:
        return np.array(self.coords)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        if self.group != other.group:
            raise GroupError("elements belong to different groups")
        return GroupElement(self.group, self.group.multiply(self.vec, other.vec))

    def inv(self) -> "GroupElement":
        return GroupElement(self.group, self.group.inverse(self.vec))

    def __pow__(self, m: int) -> "GroupElement":
        return GroupElement(self.group, self.group.power(self.vec, m))

    def in_subgroup(self, i: int, tol: float = LATTICE_TOL) -> bool:
        return bool(self.group.in_subgroup(self.vec, i, tol))

    def is_identity(self, tol: float = LATTICE_TOL) -> bool:
        return bool(np.all(np.abs(self.vec) < tol))


def identity(group: FilteredGroup) -> GroupElement:
    return GroupElement(group, group.identity())


def multiply(a: GroupElement, b: GroupElement) -> GroupElement:
    return a * b


def inverse(a: GroupElement) -> GroupElement:
    return a.inv()


def commutator(a: GroupElement, b: GroupElement) -> GroupElement:
    return a.inv() * b.inv() * a * b


def reduce_to_fundamental_domain(g: GroupElement) -> tuple[GroupElement, GroupElement]:
    """Write g = k * gamma with k in the unit box and gamma in the lattice."""
    k, gamma = g.group.reduce(g.vec)
    return GroupElement(g.group, k), GroupElement(g.group, gamma)


def cube_filtration(g: FilteredGroup) -> FilteredGroup:
    """The cube group of g; trivial stays trivial."""
    if g.dim == 0:
        return g
    return CubeGroup(g)


def pair_element(cube: _PairGroup, g0: GroupElement, g1: GroupElement) -> GroupElement:
    if g0.group != cube.inner or g1.group != cube.inner:
        raise GroupError("pair components must belong to the inner group")
    return GroupElement(cube, np.concatenate([g0.vec, g1.vec]))


def split_element(g: GroupElement) -> tuple[GroupElement, GroupElement]:
    if not isinstance(g.group, _PairGroup):
        raise GroupError("not a pair-group element")
    a0, a1 = g.group._halves(g.vec)
    return GroupElement(g.group.inner, a0), GroupElement(g.group.inner, a1)


_GROUP_PARSERS = {}


def parse_group(text: str) -> FilteredGroup:
    """Inverse of FilteredGroup.serialize, for CLI configs."""
    text = text.strip()
    if text == "heisenberg3":
        return Heisenberg3()
    if text.startswith("abelian:"):
        _, d, l = text.split(":")
        return AbelianGroup(int(d), int(l))
    if text.startswith("square(") and text.endswith(")"):
        return DirectSquare(parse_group(text[7:-1]))
    if text.startswith("cube(") and text.endswith(")"):
        return CubeGroup(parse_group(text[5:-1]))
    if text == "trivial":
        return TRIVIAL
    raise GroupError(f"unknown group descriptor: {text!r}")
