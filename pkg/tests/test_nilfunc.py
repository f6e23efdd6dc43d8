import numpy as np
import pytest

from nilergodic.groups import AbelianGroup, GroupElement, Heisenberg3
from nilergodic import nilfunc as nf
from nilergodic.polyseq import PolySeq

H = Heisenberg3()
CIRCLE = AbelianGroup(1, 1)


def theta_example():
    return (nf.heisenberg_theta(2, c=0.8, k=1, t0=0.1)
            + nf.heisenberg_theta(-1, c=0.5j, t0=0.3, x0=0.2)
            + nf.heisenberg_trig({(1, 0): 0.3, (0, 2): 0.2 - 0.1j}))


# -- torus functions


def test_circle_sobolev_closed_form():
    F = nf.trig_polynomial(CIRCLE, {(1,): 1.0})
    expect = np.sqrt(1.0 + (2 * np.pi) ** 2)
    assert abs(nf.sobolev_norm(F, 1, 2, M=64) - expect) < 1e-10
    assert abs(nf.lp_norm(F, 4, M=64) - 1.0) < 1e-12


def test_fd_cross_check_low_order():
    F = nf.trig_polynomial(AbelianGroup(2, 1), {(1, 0): 1.0, (2, 1): 0.5})
    for j in (1, 2):
        a = nf.sobolev_norm(F, j, 2, M=32)
        b = nf.sobolev_norm(F, j, 2, M=32, method="fd")
        assert abs(a - b) < 1e-5 * max(1.0, a)


def test_fd_cross_check_heisenberg():
    F = nf.heisenberg_theta(1, t0=0.2)
    a = nf.sobolev_norm(F, 1, 2, M=16)
    b = nf.sobolev_norm(F, 1, 2, M=16, method="fd")
    assert abs(a - b) < 1e-5 * a


def test_torus_parseval():
    F = nf.trig_polynomial(CIRCLE, {(1,): 3.0, (4,): 0.5j})
    assert abs(nf.lp_norm(F, 2, M=64) - np.sqrt(9.25)) < 1e-12


# -- Heisenberg modes


def test_theta_lattice_invariance_and_reduction():
    F = theta_example()
    rng = np.random.default_rng(0)
    pts = rng.uniform(-3, 3, size=(50, 3))
    red = H.fractional(pts)
    for mode in F.modes:
        assert np.max(np.abs(mode.eval_box(pts) - mode.eval_box(red))) < 1e-12
        gam = np.broadcast_to(np.array([2.0, -1.0, 3.0]), (50, 3))
        shifted = H.multiply(red, gam)
        assert np.max(np.abs(mode.eval_box(shifted)
                             - mode.eval_box(red))) < 1e-12


def test_vertical_character_property():
    F = nf.heisenberg_theta(2, c=1.1, k=1, t0=0.17)
    rng = np.random.default_rng(1)
    pts = rng.uniform(0, 1, size=(20, 3))
    for t in (0.2, 0.77):
        shifted = H.multiply(np.array([0.0, 0.0, t]), pts)
        assert np.max(np.abs(F.eval(shifted)
                             - nf.e(2 * t) * F.eval(pts))) < 1e-12


def test_analytic_derivatives_match_finite_differences():
    F = theta_example()
    rng = np.random.default_rng(2)
    pts = H.fractional(rng.uniform(-1, 1, size=(30, 3)))
    h = 1e-5
    for b in range(3):
        step = np.zeros(3)
        step[b] = h
        fd = (F.eval(H.multiply(step, pts))
              - F.eval(H.multiply(-step, pts))) / (2 * h)
        assert np.max(np.abs(fd - F.deriv(b).eval(pts))) < 1e-6


def test_translate_and_conj():
    F = theta_example()
    rng = np.random.default_rng(3)
    pts = rng.uniform(0, 1, size=(20, 3))
    a = np.array([0.3, -0.7, 0.2])
    assert np.max(np.abs(F.translate(a).eval(pts)
                         - F.eval(H.multiply(a, pts)))) < 1e-12
    assert np.max(np.abs(F.conj().eval(pts) - np.conj(F.eval(pts)))) < 1e-12
    assert F.conj().vertical_frequencies() == [(-2,), (0,), (1,)]


def test_vertical_modes_and_mean():
    F = theta_example()
    assert F.vertical_frequencies() == [(-1,), (0,), (2,)]
    assert not F.is_vertical_character()
    assert nf.heisenberg_theta(1).is_vertical_character()
    assert abs(F.space_mean()) < 1e-15
    G = F + nf.heisenberg_trig({(0, 0): 0.7})
    assert abs(G.space_mean() - 0.7) < 1e-15


# -- vertical Fourier analysis


def test_fiber_projection_matches_exact_mode():
    F = theta_example()
    proj = nf.vertical_coefficient(F, 2, Q=16)
    pts = np.random.default_rng(4).uniform(0, 1, size=(10, 3))
    assert np.max(np.abs(proj.eval(pts)
                         - F.vertical_mode(2).eval(pts))) < 1e-12


def test_fiber_projection_alias_warning():
    F = nf.heisenberg_theta(3)
    with pytest.warns(RuntimeWarning):
        nf.vertical_coefficient(F, 3, Q=4)


def test_bessel_equality_at_p2():
    F = theta_example()
    lhs, rhs = nf.bessel_check(F, 2, M=48)
    assert abs(lhs - rhs) < 1e-10


@pytest.mark.parametrize("p", [4, 8])
def test_bessel_inequality(p):
    F = theta_example()
    lhs, rhs = nf.bessel_check(F, p, M=32)
    assert lhs <= rhs + 1e-9


def test_bessel_rejects_small_p():
    with pytest.raises(ValueError):
        nf.bessel_check(theta_example(), 1, M=8)


def test_vertical_series_sobolev_bound():
    F = theta_example()
    lhs, rhs, ratio = nf.vertical_series_sobolev_check(F, 1, 2, M=24)
    assert lhs <= rhs
    assert 0 < ratio < 1


def test_sobolev_embedding_vertical_character():
    F = nf.heisenberg_theta(1)
    r = nf.sobolev_embedding_check(F, 2, M=24)
    assert 0 < r < 1
    with pytest.raises(ValueError):
        nf.sobolev_embedding_check(theta_example(), 2, M=8)


def test_sup_norm_of_character_is_one():
    F = nf.trig_polynomial(CIRCLE, {(3,): 1.0})
    assert abs(nf.sup_norm(F, M=64) - 1.0) < 1e-9


# -- cube tensors


def heisenberg_poly():
    a0 = GroupElement(H, (0.1, 0.2, 0.0))
    a1 = GroupElement(H, (0.33, 0.71, 0.25))
    a2 = GroupElement(H, (0.0, 0.0, 0.41))
    return PolySeq(H, (a0, a1, a2))


def test_derivative_identity_heisenberg():
    F = theta_example()
    g = heisenberg_poly()
    assert nf.derivative_identity_check(F, g, 3, range(-5, 30)) < 1e-9


def test_derivative_identity_circle():
    F = nf.trig_polynomial(CIRCLE, {(2,): 1.0, (-1,): 0.3})
    G = CIRCLE
    g = PolySeq(G, (GroupElement(G, (0.15,)),
                    GroupElement(G, (np.sqrt(2) - 1,))))
    assert nf.derivative_identity_check(F, g, 5, range(0, 50)) < 1e-9


def test_cube_quadrature_normalized():
    cube = nf.cube_filtration(H)
    pts, w = nf.quadrature(cube, 5)
    assert abs(w * len(pts) - 1.0) < 1e-12
    # Haar invariance under a left translation, checked by quadrature
    F = nf.cube_tensor(theta_example(), heisenberg_poly(), 2)
    a = np.array([0.21, 0.4, 0.05, 0.21, 0.4, 0.6])
    vals = F.eval(pts)
    moved = F.eval(cube.multiply(a, pts))
    assert abs(np.sum(np.abs(vals) ** 2) * w
               - np.sum(np.abs(moved) ** 2) * w) < 2e-3


def test_tensor_sobolev_ratio():
    F = theta_example()
    lhs, rhs, ratio = nf.tensor_sobolev_check(F, heisenberg_poly(), 3, 1, 2,
                                              M=8)
    assert np.isfinite(ratio)
    assert lhs <= 4.0 * rhs
