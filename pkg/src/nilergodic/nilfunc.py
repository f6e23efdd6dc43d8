"""Functions on nilmanifolds: vertical characters, Fourier modes, Sobolev norms.

Functions are finite sums of vertical-character modes.  On tori a mode is a
single character; on the Heisenberg manifold a nonzero vertical frequency m
is represented by "theta atoms"

    c * e(k(x+x0) + m z + m x0 y) * sum_j P(u_j) exp(-alpha u_j^2) e(j(x+x0)),
    u_j = y + j/m + t0,   e(t) = exp(2 pi i t),

whose infinite j-sum is exactly invariant under the integer lattice and
transforms by e(m t) under the central translation by t.  The family is
closed under right-invariant derivatives and left translations, so all
Sobolev quantities can be computed from exact derivatives; the finite
difference scheme is kept as an independent cross-check (it is numerically
unusable beyond second order).

Haar measure is Lebesgue measure on the Mal'cev coordinate box; integrals
use the midpoint rule, which is spectrally accurate for this family.
"""

from __future__ import annotations

import warnings

import numpy as np

from .groups import (
    AbelianGroup,
    CubeGroup,
    FilteredGroup,
    GroupElement,
    GroupError,
    Heisenberg3,
    cube_filtration,
    reduce_to_fundamental_domain,
)

TWO_PI_I = 2j * np.pi


def e(t):
    """The unit character exp(2 pi i t)."""
    return np.exp(TWO_PI_I * np.asarray(t, dtype=float))


def _as_coords(g):
    if isinstance(g, GroupElement):
        return g.vec
    return np.asarray(g, dtype=float)


# ---------------------------------------------------------------------------
# mode objects


class TorusMode:
    """c * e(m . x) on a torus; the whole group is vertical here."""

    def __init__(self, m, c):
        self.m = tuple(int(v) for v in m)
        self.c = complex(c)

    def eval_box(self, pts):
        return self.c * e(pts @ np.array(self.m, dtype=float))

    def deriv(self, b):
        return TorusMode(self.m, self.c * TWO_PI_I * self.m[b])

    def translate(self, a):
        return TorusMode(self.m, self.c * complex(e(float(np.dot(self.m, a)))))

    def conj(self):
        return TorusMode(tuple(-v for v in self.m), np.conj(self.c))

    def scaled(self, s):
        return TorusMode(self.m, self.c * s)

    def vertical_frequency(self, group):
        return self.m

    def max_horizontal_freq(self):
        return max((abs(v) for v in self.m), default=0)

    def central_term(self):
        return self.c if all(v == 0 for v in self.m) else 0.0


class TrigMode:
    """Heisenberg vertical frequency 0: a trigonometric polynomial in (x, y)."""

    def __init__(self, freqs):
        self.freqs = {(int(k1), int(k2)): complex(c)
                      for (k1, k2), c in freqs.items() if c != 0}

    def eval_box(self, pts):
        out = np.zeros(pts.shape[:-1], dtype=complex)
        for (k1, k2), c in self.freqs.items():
            out = out + c * e(k1 * pts[..., 0] + k2 * pts[..., 1])
        return out

    def deriv(self, b):
        if b == 2:
            return TrigMode({})
        return TrigMode({k: c * TWO_PI_I * k[b] for k, c in self.freqs.items()})

    def translate(self, a):
        return TrigMode({k: c * complex(e(k[0] * a[0] + k[1] * a[1]))
                         for k, c in self.freqs.items()})

    def conj(self):
        return TrigMode({(-k1, -k2): np.conj(c)
                         for (k1, k2), c in self.freqs.items()})

    def scaled(self, s):
        return TrigMode({k: c * s for k, c in self.freqs.items()})

    def vertical_frequency(self, group):
        return (0,)

    def max_horizontal_freq(self):
        return max((max(abs(k1), abs(k2)) for k1, k2 in self.freqs), default=0)

    def central_term(self):
        return self.freqs.get((0, 0), 0.0)


def _poly_mul_u(p):
    return (0.0 + 0.0j,) + tuple(p)

def _poly_deriv(p):
    return tuple(c * (i + 1) for i, c in enumerate(p[1:])) or (0.0 + 0.0j,)

def _poly_axpy(a, p, b, q):
    n = max(len(p), len(q))
    p = tuple(p) + (0,) * (n - len(p))
    q = tuple(q) + (0,) * (n - len(q))
    return tuple(a * x + b * y for x, y in zip(p, q))


class ThetaAtom:
    """One theta atom of a Heisenberg vertical character (m != 0)."""

    __slots__ = ("c", "m", "k", "x0", "t0", "alpha", "poly")

    def __init__(self, c, m, k=0, x0=0.0, t0=0.0, alpha=np.pi,
                 poly=(1.0 + 0.0j,)):
        if m == 0:
            raise ValueError("theta atoms need a nonzero vertical frequency")
        self.c = complex(c)
        self.m = int(m)
        self.k = int(k)
        self.x0 = float(x0)
        self.t0 = float(t0)
        self.alpha = float(alpha)
        self.poly = tuple(complex(v) for v in poly)

    @property
    def beta(self):
        # coefficient of y in the phase; pinned to m*x0 by lattice invariance
        return self.m * self.x0

    def _j_range(self, ymin, ymax):
        # keep every j with non-negligible Gaussian weight on [ymin, ymax];
        # u_j vanishes near j = -m (y + t0)
        r = (np.sqrt(50.0 / self.alpha) + len(self.poly)) * abs(self.m)
        a = -self.m * (ymin + self.t0)
        b = -self.m * (ymax + self.t0)
        lo, hi = min(a, b) - r, max(a, b) + r
        return range(int(np.floor(lo)) - 1, int(np.ceil(hi)) + 2)

    def eval_box(self, pts):
        x, y, z = pts[..., 0], pts[..., 1], pts[..., 2]
        pref = self.c * e(self.k * (x + self.x0) + self.m * z + self.beta * y)
        acc = np.zeros(np.shape(x), dtype=complex)
        p = np.array(self.poly)
        for j in self._j_range(float(np.min(y)), float(np.max(y))):
            u = y + j / self.m + self.t0
            acc = acc + np.polynomial.polynomial.polyval(u, p) \
                * np.exp(-self.alpha * u * u) * e(j * (x + self.x0))
        return pref * acc

    def deriv(self, b):
        if b == 0:
            # d/dx plus the y d/dz twist; the y-proportional terms cancel
            poly = _poly_axpy(TWO_PI_I * (self.k - self.m * self.t0), self.poly,
                             TWO_PI_I * self.m, _poly_mul_u(self.poly))
            return ThetaAtom(self.c, self.m, self.k, self.x0, self.t0,
                             self.alpha, poly)
        if b == 1:
            gauss = _poly_axpy(1.0, _poly_deriv(self.poly),
                               -2.0 * self.alpha, _poly_mul_u(self.poly))
            poly = _poly_axpy(TWO_PI_I * self.beta, self.poly, 1.0, gauss)
            return ThetaAtom(self.c, self.m, self.k, self.x0, self.t0,
                             self.alpha, poly)
        if b == 2:
            return ThetaAtom(self.c * TWO_PI_I * self.m, self.m, self.k,
                             self.x0, self.t0, self.alpha, self.poly)
        raise ValueError(f"bad direction {b}")

    def translate(self, a):
        a1, a2, a3 = (float(v) for v in a)
        c = self.c * complex(e(self.m * a3 + self.beta * a2))
        return ThetaAtom(c, self.m, self.k, self.x0 + a1, self.t0 + a2,
                         self.alpha, self.poly)

    def conj(self):
        return ThetaAtom(np.conj(self.c), -self.m, -self.k, self.x0, self.t0,
                         self.alpha, tuple(np.conj(v) for v in self.poly))

    def scaled(self, s):
        return ThetaAtom(self.c * s, self.m, self.k, self.x0, self.t0,
                         self.alpha, self.poly)


class AtomSum:
    """A Heisenberg vertical character with frequency m: a sum of theta atoms."""

    def __init__(self, m, atoms):
        self.m = int(m)
        self.atoms = list(atoms)
        if any(a.m != self.m for a in self.atoms):
            raise ValueError("mixed vertical frequencies in one mode")

    def eval_box(self, pts):
        out = np.zeros(np.shape(pts)[:-1], dtype=complex)
        for a in self.atoms:
            out = out + a.eval_box(pts)
        return out

    def deriv(self, b):
        return AtomSum(self.m, [a.deriv(b) for a in self.atoms])

    def translate(self, a):
        return AtomSum(self.m, [atom.translate(a) for atom in self.atoms])

    def conj(self):
        return AtomSum(-self.m, [a.conj() for a in self.atoms])

    def scaled(self, s):
        return AtomSum(self.m, [a.scaled(s) for a in self.atoms])

    def vertical_frequency(self, group):
        return (self.m,)

    def max_horizontal_freq(self):
        r = max(np.sqrt(50.0 / a.alpha) + len(a.poly) for a in self.atoms)
        return int(max(abs(a.k) + abs(a.m) * (r + 2) for a in self.atoms))

    def central_term(self):
        return 0.0  # nonzero vertical frequency integrates to zero


# ---------------------------------------------------------------------------
# NilFunction


class NilFunction:
    """A finite sum of vertical-character modes on a nilmanifold."""

    def __init__(self, group: FilteredGroup, modes):
        self.group = group
        self.modes = list(modes)

    # -- evaluation

    def eval(self, coords) -> np.ndarray:
        """Value at group coordinates (reduced to the fundamental domain first)."""
        pts = self.group.fractional(np.atleast_2d(_as_coords(coords)))
        out = np.zeros(pts.shape[:-1], dtype=complex)
        for mode in self.modes:
            out = out + mode.eval_box(pts)
        return out

    def __call__(self, coords):
        val = self.eval(coords)
        return complex(val[0]) if val.shape == (1,) else val

    # -- structure

    @property
    def directions(self):
        return list(range(self.group.dim))

    def deriv(self, b) -> "NilFunction":
        return NilFunction(self.group, [m.deriv(b) for m in self.modes])

    def translate(self, a) -> "NilFunction":
        """The left translate y -> F(a y)."""
        a = _as_coords(a)
        return NilFunction(self.group, [m.translate(a) for m in self.modes])

    def conj(self) -> "NilFunction":
        return NilFunction(self.group, [m.conj() for m in self.modes])

    def scaled(self, s) -> "NilFunction":
        return NilFunction(self.group, [m.scaled(s) for m in self.modes])

    def __add__(self, other: "NilFunction") -> "NilFunction":
        if self.group != other.group:
            raise GroupError("cannot add functions on different groups")
        return NilFunction(self.group, self.modes + other.modes)

    # -- vertical structure

    def vertical_frequencies(self):
        freqs = []
        for m in self.modes:
            f = m.vertical_frequency(self.group)
            if f not in freqs:
                freqs.append(f)
        return sorted(freqs)

    def vertical_mode(self, m) -> "NilFunction":
        m = tuple(int(v) for v in np.atleast_1d(m))
        return NilFunction(self.group,
                           [md for md in self.modes
                            if md.vertical_frequency(self.group) == m])

    def space_mean(self) -> complex:
        return complex(sum(md.central_term() for md in self.modes))

    def max_horizontal_freq(self) -> int:
        return max((md.max_horizontal_freq() for md in self.modes), default=0)

    def is_vertical_character(self) -> bool:
        return len(self.vertical_frequencies()) <= 1


def constant_function(group: FilteredGroup, c) -> NilFunction:
    if isinstance(group, Heisenberg3):
        return NilFunction(group, [TrigMode({(0, 0): c})])
    if isinstance(group, AbelianGroup):
        return NilFunction(group, [TorusMode((0,) * group.dim, c)])
    raise GroupError(f"no function model for {group!r}")


def trig_polynomial(group: AbelianGroup, coeffs) -> NilFunction:
    """sum_m c_m e(m . x) on a torus, from a dict m -> c."""
    modes = [TorusMode(np.atleast_1d(m), c) for m, c in coeffs.items() if c != 0]
    return NilFunction(group, modes)


def heisenberg_trig(coeffs) -> NilFunction:
    """A vertical-frequency-0 function on the Heisenberg manifold."""
    return NilFunction(Heisenberg3(), [TrigMode(coeffs)])


def heisenberg_theta(m, c=1.0, k=0, t0=0.0, x0=0.0, alpha=np.pi) -> NilFunction:
    """A smooth vertical character with frequency m != 0 (one theta atom)."""
    return NilFunction(Heisenberg3(),
                       [AtomSum(m, [ThetaAtom(c, m, k=k, x0=x0, t0=t0,
                                              alpha=alpha)])])


# ---------------------------------------------------------------------------
# tensor functions on the cube group


class TensorSum:
    """sum_t F_t (x) H_t on a cube (or direct-square) nilmanifold.

    Each term evaluates as F_t(g0) * H_t(g1) on the pair (g0, g1); any
    conjugation is baked into the factors.  Derivatives along the cube
    Mal'cev directions (diagonal directions plus central directions in the
    second component) stay in the family by the product rule.
    """

    def __init__(self, cube: CubeGroup, terms):
        self.group = cube
        self.terms = list(terms)

    @property
    def directions(self):
        inner = self.group.inner
        d2 = inner.subgroup_dim(2)
        diag = [("diag", b) for b in range(inner.dim)]
        right = [("right", b) for b in range(inner.dim - d2, inner.dim)]
        return diag + right

    def eval(self, coords) -> np.ndarray:
        pts = np.atleast_2d(_as_coords(coords))
        d = self.group.inner.dim
        g0, g1 = pts[..., :d], pts[..., d:]
        out = np.zeros(pts.shape[:-1], dtype=complex)
        for f, h in self.terms:
            out = out + f.eval(g0) * h.eval(g1)
        return out

    def deriv(self, direction) -> "TensorSum":
        kind, b = direction
        new = []
        for f, h in self.terms:
            if kind == "diag":
                new.append((f.deriv(b), h))
                new.append((f, h.deriv(b)))
            elif kind == "right":
                new.append((f, h.deriv(b)))
            else:
                raise ValueError(f"bad cube direction {direction}")
        return TensorSum(self.group, new)

    def max_horizontal_freq(self) -> int:
        return max(max(f.max_horizontal_freq(), h.max_horizontal_freq())
                   for f, h in self.terms)


def cube_tensor(F: NilFunction, g, k: int) -> TensorSum:
    """The restriction of {g(k)}F (x) {g(0)}conj(F) to the cube nilmanifold."""
    cube = cube_filtration(F.group)
    fk, _ = reduce_to_fundamental_domain(g(k))
    f0, _ = reduce_to_fundamental_domain(g(0))
    return TensorSum(cube, [(F.translate(fk), F.translate(f0).conj())])


# ---------------------------------------------------------------------------
# quadrature


def box_grid(dim: int, M: int) -> np.ndarray:
    """Midpoint grid on [0,1)^dim, shape (M^dim, dim)."""
    axes = [(np.arange(M) + 0.5) / M] * dim
    mesh = np.meshgrid(*axes, indexing="ij") if dim else []
    if dim == 0:
        return np.zeros((1, 0))
    return np.stack([m.ravel() for m in mesh], axis=-1)


def quadrature(group: FilteredGroup, M: int):
    """Quadrature nodes and the constant midpoint weight for a nilmanifold.

    For cube groups the fundamental domain is parametrized as
    (g0, g0 * z) with g0 in the inner box and z in the central box; Lebesgue
    measure in these coordinates is the Haar measure.
    """
    if isinstance(group, CubeGroup):
        inner = group.inner
        d1, d2 = inner.dim, inner.subgroup_dim(2)
        g0 = box_grid(d1, M)
        zc = box_grid(d2, M)
        z = np.zeros((len(zc), d1))
        z[:, d1 - d2:] = zc
        g0r = np.repeat(g0, len(z), axis=0)
        zr = np.tile(z, (len(g0), 1))
        pts = np.concatenate([g0r, inner.multiply(g0r, zr)], axis=-1)
        return pts, 1.0 / len(pts)
    pts = box_grid(group.dim, M)
    return pts, 1.0 / len(pts)


def lp_norm(F, p: float, M: int = 64) -> float:
    pts, w = quadrature(F.group, M)
    vals = F.eval(pts)
    return float((np.sum(np.abs(vals) ** p) * w) ** (1.0 / p))


# ---------------------------------------------------------------------------
# Sobolev norms


def _fd_derivative_values(F, dirs, pts, h):
    """Nested Richardson central differences of F along right-invariant fields."""
    if not dirs:
        return F.eval(pts)
    direction, rest = dirs[0], dirs[1:]
    group = F.group

    def shifted(s):
        step = np.zeros(group.dim)
        if isinstance(group, CubeGroup):
            kind, b = direction
            d = group.inner.dim
            step[d + b] = s
            if kind == "diag":
                step[b] = s
        else:
            step[direction] = s
        return group.multiply(step, pts)

    def central(hh):
        return (_fd_derivative_values(F, rest, shifted(hh), h)
                - _fd_derivative_values(F, rest, shifted(-hh), h)) / (2.0 * hh)

    return (4.0 * central(h) - central(2.0 * h)) / 3.0


def sobolev_norm(F, j: int, p: float, M: int = 64, method: str = "analytic",
                 h: float = 1e-4) -> float:
    """The W^{j,p} norm: all right-invariant derivatives up to order j in L^p.

    method "analytic" differentiates the mode representation exactly;
    "fd" follows the central-difference/Richardson recipe (only sound for
    j <= 2, kept as an independent cross-check).
    """
    if p < 1:
        raise ValueError("p must be at least 1")
    if j < 0:
        raise ValueError("j must be nonnegative")
    pts, w = quadrature(F.group, M)
    dirs = F.directions
    total = 0.0
    if method == "analytic":
        layer = [F]
        total += np.sum(np.abs(F.eval(pts)) ** p) * w
        for _ in range(j):
            layer = [f.deriv(b) for f in layer for b in dirs]
            for f in layer:
                total += np.sum(np.abs(f.eval(pts)) ** p) * w
    elif method == "fd":
        all_tuples = [()]
        layer = [()]
        for _ in range(j):
            layer = [t + (b,) for t in layer for b in dirs]
            all_tuples.extend(layer)
        for t in all_tuples:
            vals = _fd_derivative_values(F, t, pts, h)
            total += np.sum(np.abs(vals) ** p) * w
    else:
        raise ValueError(f"unknown method {method!r}")
    return float(total ** (1.0 / p))


# ---------------------------------------------------------------------------
# vertical Fourier analysis


def _central_embed(group: FilteredGroup, t: np.ndarray) -> np.ndarray:
    dl = group.subgroup_dim(group.length)
    out = np.zeros(t.shape[:-1] + (group.dim,))
    out[..., group.dim - dl:] = t
    return out


class FiberProjection:
    """The numerical vertical-coefficient operator applied to an evaluable F."""

    def __init__(self, F, m, Q: int = 128):
        self.base = F
        self.group = F.group
        self.m = tuple(int(v) for v in np.atleast_1d(m))
        self.Q = int(Q)
        band = getattr(F, "max_vertical_freq", None)
        limit = band() if callable(band) else _max_vert(F)
        if limit is not None and self.Q <= 2 * limit:
            warnings.warn(
                f"fiber sample count Q={Q} does not exceed the vertical band "
                f"limit {limit}; coefficients may alias", RuntimeWarning)

    @property
    def directions(self):
        return self.base.directions

    def eval(self, coords) -> np.ndarray:
        pts = np.atleast_2d(_as_coords(coords))
        dl = len(self.m)
        grid = box_grid(dl, self.Q) - 0.5 / self.Q  # include t = 0
        out = np.zeros(pts.shape[:-1], dtype=complex)
        mv = np.array(self.m, dtype=float)
        for t in grid:
            shift = _central_embed(self.group, t)
            out = out + self.base.eval(self.group.multiply(shift, pts)) \
                * np.conj(e(float(t @ mv)))
        return out / len(grid)


def _max_vert(F) -> int | None:
    if isinstance(F, NilFunction):
        return max((max(abs(v) for v in f) if f else 0
                    for f in F.vertical_frequencies()), default=0)
    return None


def vertical_coefficient(F, m, Q: int = 128) -> FiberProjection:
    """The vertical Fourier coefficient at frequency m via fiber quadrature."""
    return FiberProjection(F, m, Q)


def bessel_check(F: NilFunction, p, M: int = 64):
    """Both sides of the vertical Bessel inequality, by quadrature.

    Returns (sum of p-th powers of mode norms, p-th power of the norm of F).
    ``p`` may be a single exponent or a sequence; a sequence yields one pair
    per exponent while evaluating every function on the grid only once.
    """
    exponents = np.atleast_1d(np.asarray(p, dtype=float))
    if np.any(exponents < 2):
        raise ValueError("the Bessel inequality needs p >= 2")
    pts, w = quadrature(F.group, M)
    mode_abs = [np.abs(F.vertical_mode(m).eval(pts))
                for m in F.vertical_frequencies()]
    f_abs = np.abs(F.eval(pts))
    pairs = [(float(sum(np.sum(a ** q) * w for a in mode_abs)),
              float(np.sum(f_abs ** q) * w)) for q in exponents]
    return pairs[0] if np.isscalar(p) else pairs


def vertical_series_sobolev_check(F: NilFunction, j: int, p: float,
                                  M: int = 64) -> tuple[float, float, float]:
    """Mode-wise W^{j,p} sum against the W^{j+d_l,p} norm of F, with ratio."""
    if p < 2:
        raise ValueError("p must be at least 2")
    dl = F.group.subgroup_dim(F.group.length)
    lhs = sum(sobolev_norm(F.vertical_mode(m), j, p, M)
              for m in F.vertical_frequencies())
    rhs = sobolev_norm(F, j + dl, p, M)
    return float(lhs), float(rhs), float(lhs / rhs) if rhs else np.inf


def sup_norm(F, M: int = 64, refine: int = 2) -> float:
    """Grid sup over the fundamental domain with local refinement."""
    pts, _ = quadrature(F.group, M)
    vals = np.abs(F.eval(pts))
    best = pts[int(np.argmax(vals))]
    sup = float(np.max(vals))
    width = 1.0 / M
    dim = pts.shape[-1]
    for _ in range(refine):
        offs = box_grid(dim, 9) - 0.5
        local = best + offs * (2 * width)
        lv = np.abs(F.eval(local))
        i = int(np.argmax(lv))
        if lv[i] > sup:
            sup = float(lv[i])
            best = local[i]
        width /= 4.0
    return sup


def sobolev_embedding_check(F: NilFunction, p: float, M: int = 32) -> float:
    """Ratio of the sup norm to the W^{d-d_l,p} norm, for a vertical character."""
    if not F.is_vertical_character():
        raise ValueError("input must be a single vertical character")
    d = F.group.dim
    dl = F.group.subgroup_dim(F.group.length)
    denom = sobolev_norm(F, d - dl, p, M)
    return sup_norm(F, M) / denom


def derivative_identity_check(F: NilFunction, g, k: int, ns) -> float:
    """Max error in the multiplicative-derivative identity for nilsequences.

    Compares a_{n+k} conj(a_n), computed from two direct evaluations of the
    nilsequence a_n = F(g(n) Gamma), with the tensor function evaluated along
    the conjugated cube sequence.
    """
    from .polyseq import cube_sequence

    tensor = cube_tensor(F, g, k)
    seq = cube_sequence(g, k)
    worst = 0.0
    for n in ns:
        lhs = complex(F(g(n + k).vec)) * np.conj(complex(F(g(n).vec)))
        rhs = complex(tensor.eval(seq(n).vec)[0])
        worst = max(worst, abs(lhs - rhs))
    return worst


def tensor_sobolev_check(F: NilFunction, g, k: int, j: int, p: float,
                         M: int = 16) -> tuple[float, float, float]:
    """Sobolev norm of the cube tensor against the squared W^{j,2p} norm of F."""
    tensor = cube_tensor(F, g, k)
    lhs = sobolev_norm(tensor, j, p, M)
    rhs = sobolev_norm(F, j, 2 * p, M=max(M, 32)) ** 2
    return float(lhs), float(rhs), float(lhs / rhs) if rhs else np.inf
