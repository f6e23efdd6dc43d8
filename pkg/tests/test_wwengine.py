import numpy as np
import pytest

from nilergodic import nilfunc as nf
from nilergodic import systems as S
from nilergodic import wwengine as W
from nilergodic.groups import (
    AbelianGroup,
    GroupElement,
    Heisenberg3,
    TRIVIAL,
)
from nilergodic.polyseq import PolySeq
from nilergodic.uniformity import orbit_sample

ALPHA = np.sqrt(2) - 1
H = Heisenberg3()


def test_sobolev_order_values():
    assert W.sobolev_order(TRIVIAL) == 0
    assert W.sobolev_order(AbelianGroup(1, 1)) == 1
    assert W.sobolev_order(H) == 4
    assert W.sobolev_order(AbelianGroup(1, 2)) == 2
    assert W.sobolev_order(AbelianGroup(2, 1)) == 2


def rotation_orbit(phi, x0=0.3):
    rot = S.Rotation((ALPHA,))
    return S.orbit(rot, [x0], S.Character((1,)), phi.required_length())


def test_resonant_weight_exact():
    phi = S.interval_windows(S.doubling_lengths(256, 4096))
    fo = rotation_orbit(phi)
    n = np.arange(len(fo))
    w = np.exp(-2j * np.pi * ((ALPHA * n) % 1.0))
    rep = W.weighted_average(fo, w, phi)
    for v in rep.values:
        assert abs(v - np.exp(2j * np.pi * 0.3)) < 1e-12


def test_offresonant_weight_geometric_bound():
    phi = S.interval_windows(S.doubling_lengths(256, 4096))
    fo = rotation_orbit(phi)
    beta = 0.123
    n = np.arange(len(fo))
    w = np.exp(-2j * np.pi * ((beta * n) % 1.0))
    rep = W.weighted_average(fo, w, phi)
    gap = abs(np.exp(2j * np.pi * (ALPHA - beta)) - 1)
    for (b, nn), v in zip(phi.windows, rep.rows):
        assert abs(v["value"]) <= 2 / (nn * gap) + 1e-12


def test_weighted_average_requires_coverage():
    phi = S.interval_windows([64, 128])
    fo = orbit_sample(np.ones(64))
    with pytest.raises(ValueError):
        W.weighted_average(fo, np.ones(128), phi)


def test_uniform_sup_linear_resonance():
    phi = S.interval_windows(S.doubling_lengths(512, 4096))
    fo = rotation_orbit(phi)
    rep = W.uniform_sup_linear(fo, phi)
    for row in rep.rows:
        # resonance nearly attained on the padded grid; exact sup is 1
        assert 0.95 <= row["value"] <= 1.0 + 1e-12


def test_uniform_sup_zero_sequence():
    phi = S.interval_windows([64])
    rep = W.uniform_sup_linear(orbit_sample(np.zeros(64)), phi)
    assert rep.rows[0]["value"] == 0.0


def test_uniform_sup_padding_self_consistency():
    anz = S.AnzaiSkew(ALPHA)
    phi = S.interval_windows(S.doubling_lengths(2048, 8192))
    fo = S.orbit(anz, [0.0, 0.0], S.Character((0, 1)),
                 phi.required_length())
    r4 = W.uniform_sup_linear(fo, phi, pad=4)
    r8 = W.uniform_sup_linear(fo, phi, pad=8)
    for a, b in zip(r4.rows, r8.rows):
        assert abs(a["value"] - b["value"]) <= a["correction_bound"]


def test_uniform_sup_rejects_shifted_windows():
    phi = S.shifted_windows([(5, 64)])
    with pytest.raises(ValueError):
        W.uniform_sup_linear(orbit_sample(np.ones(128)), phi)


def nil_family():
    gid = GroupElement(H, (0, 0, 0))
    g = PolySeq(H, (gid, GroupElement(H, (ALPHA, 0.3, 0.1)), gid))
    return [(g, nf.heisenberg_theta(1))]


def test_nilsequence_sup_constant_family_reduces_to_birkhoff():
    G = AbelianGroup(1, 1)
    gid = GroupElement(G, (0.0,))
    g = PolySeq(G, (gid, gid))
    fam = [(g, nf.trig_polynomial(G, {(0,): 2.0}))]
    phi = S.interval_windows([256, 512])
    fo = rotation_orbit(phi)
    rep = W.uniform_sup_nilsequence(fo, fam, phi, M=64)
    for (b, n), row in zip(phi.windows, rep.rows):
        birkhoff = abs(np.mean(fo.values[:n])) * 2.0
        norm = nf.sobolev_norm(fam[0][1], 1, 2, M=64)
        assert abs(row["value"] - birkhoff / norm) < 1e-12


def test_nilsequence_sup_scaling_invariance():
    phi = S.interval_windows([256, 512])
    fo = rotation_orbit(phi)
    (g, F), = nil_family()
    a = W.uniform_sup_nilsequence(fo, [(g, F)], phi, M=8)
    b = W.uniform_sup_nilsequence(fo, [(g, F.scaled(7.0))], phi, M=8)
    assert max(abs(x - y) for x, y in zip(a.values, b.values)) < 1e-12


def test_van_der_corput_constant_and_alternating():
    lhs, rhs, rem = W.van_der_corput_check(np.ones(200), 100, 10)
    assert lhs == pytest.approx(1.0)
    assert rhs == pytest.approx(1.0)
    assert lhs <= 2 * rhs + rem
    u = (-1.0) ** np.arange(200)
    lhs, rhs, rem = W.van_der_corput_check(u, 100, 10)
    assert lhs == pytest.approx(0.0, abs=1e-12)


def test_van_der_corput_random_and_vector():
    rng = np.random.default_rng(0)
    for _ in range(20):
        u = rng.uniform(-1, 1, (1049, 3)) + 1j * rng.uniform(-1, 1, (1049, 3))
        lhs, rhs, rem = W.van_der_corput_check(u, 1000, 50)
        assert lhs <= 2 * rhs + rem


def test_van_der_corput_guards():
    with pytest.raises(ValueError):
        W.van_der_corput_check(np.ones(50), 100, 10)
    with pytest.raises(ValueError):
        W.van_der_corput_check(np.ones(300), 100, 150)


def test_main_estimate_ratio_rotation():
    phi = S.interval_windows(S.doubling_lengths(4096, 16384))
    fo = rotation_orbit(phi, x0=0.0)
    rep = W.main_estimate_ratio(fo, phi, level=1, K=100)
    assert abs(rep.metadata["estimate"] - 1.0) < 0.05
    for row in rep.rows:
        assert row["value"] == pytest.approx(
            row["numerator"] / (rep.metadata["estimate"] + 0.05))
        assert row["value"] <= 1.0


def test_multiple_average_trivial_cases():
    phi = S.interval_windows(S.doubling_lengths(256, 2048))
    w = np.ones(phi.required_length())
    rep = W.weighted_multiple_average(w, 0.33, [(0, 1)], [0], phi)
    # f == 1: A_N == 1, Cauchy trace 0
    for row in rep.rows[1:]:
        assert row["value"] == pytest.approx(0.0, abs=1e-14)


def test_multiple_average_geometric_coefficient():
    beta = (np.sqrt(5) - 1) / 2
    phi = S.interval_windows([1024, 2048])
    w = np.ones(phi.required_length())
    rep = W.weighted_multiple_average(w, beta, [(0, 1)], [1], phi)
    for row in rep.rows:
        n = row["N"]
        q = np.exp(2j * np.pi * beta)
        closed = (q ** n - 1) / (n * (q - 1))
        assert abs(row["coefficient"] - closed) < 1e-9


def test_multiple_average_guards():
    phi = S.interval_windows([64])
    w = np.ones(64)
    with pytest.raises(ValueError):
        W.weighted_multiple_average(w, 0.1, [(0, 1)] * 4, [1] * 4, phi)
    with pytest.raises(ValueError):
        W.weighted_multiple_average(w, 0.1, [(0, 0, 0, 0, 0, 1)], [1], phi)
    with pytest.raises(ValueError):
        W.weighted_multiple_average(np.ones(10), 0.1, [(0, 1)], [1], phi)
