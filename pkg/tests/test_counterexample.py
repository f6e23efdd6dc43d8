import numpy as np
import pytest

from nilergodic import counterexample as C


def test_single_mode_closed_forms():
    P = C.RandomTrigPoly(np.array([0.0, 1.0]), np.array([1.0, 1.0]), 0)
    assert C.l2_squared(P) == pytest.approx(0.5)
    assert C.u2_value(P) == pytest.approx(0.125 ** 0.25)
    sup, bound = C.sup_norm(P)
    assert sup == pytest.approx(1.0, abs=1e-9)


def test_zero_polynomial():
    P = C.RandomTrigPoly(np.zeros(4), np.ones(4), 0)
    assert C.norms(P) == (0.0, 0.0, 0.0)


def test_build_validation_and_profile():
    with pytest.raises(ValueError):
        C.build(1, 0)
    P = C.build(64, 0)
    assert P.coeffs[0] == 0.0  # a_1 = sqrt(log 1 / 1)
    n = np.arange(1, 65)
    assert np.allclose(P.coeffs, np.sqrt(np.log(n) / n))
    with pytest.raises(ValueError):
        C.RandomTrigPoly(np.array([-1.0]), np.array([1.0]), 0)
    with pytest.raises(ValueError):
        C.RandomTrigPoly(np.array([1.0]), np.array([0.5]), 0)


def test_seed_determinism():
    a = C.build(1024, 1)
    b = C.build(1024, 1)
    assert np.array_equal(a.signs, b.signs)
    assert C.ratio(a) == C.ratio(b)
    assert not np.array_equal(a.signs, C.build(1024, 2).signs)


def test_norms_against_independent_quadrature():
    P = C.build(512, 1)
    m = 1 << 13
    vals = P.grid_values(m)
    assert abs(np.mean(vals ** 2) - C.l2_squared(P)) < 1e-10
    fh = np.fft.fft(vals) / m
    assert abs(np.sum(np.abs(fh) ** 4) ** 0.25 - C.u2_value(P)) < 1e-10


def test_l2_partial_sum_vs_integral():
    P = C.build(4096, 1)
    exact = C.l2_squared(P)
    approx = np.log(4096.0) ** 2 / 4.0
    assert abs(exact - approx) / exact < 0.05


def test_grid_values_match_direct_eval():
    P = C.build(128, 3)
    m = 16 * 128
    t = np.arange(40) * 2 * np.pi / m
    assert np.max(np.abs(P.grid_values(m)[:40] - P.eval(t))) < 1e-12


def test_sup_certificate():
    P = C.build(2048, 5)
    sup, bound = C.sup_norm(P)
    dense, dense_bound = C.sup_norm(P, grid_factor=512)
    # sup is a lower bound for the truth; the certified interval contains it
    assert sup <= dense + dense_bound
    assert dense <= sup + bound
    assert dense_bound / dense < 0.01  # tight certificate at high density
    assert abs(sup - dense) < 1e-6  # refinement already found the peak


def test_constant_profile_contrast():
    rows, med = C.growth_experiment([256, 1024, 4096], [0, 1, 2],
                                    profile="constant")
    for r in rows:
        assert r["l2sq"] == pytest.approx(0.5)
    # u2 -> 0 while sup stays order sqrt(log N): the ratio does not collapse
    assert all(m > 0 for _, m in med)


def test_growth_experiment_shape():
    rows, med = C.growth_experiment([1024, 2048], range(4))
    assert len(rows) == 8 and len(med) == 2
    assert med[1][1] > 0
