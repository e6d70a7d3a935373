"""Measurement model: closed-form fidelity versus a quadrature oracle,
success-probability laws, decay factors, and the vectorized kernel."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad
from scipy.special import erf

from cavityspin import (
    DecayFactors,
    Distinguishabilities,
    NoAcceptanceError,
    SubsystemParams,
    closed_form_fidelity,
    distinguishabilities,
    evaluate,
    fidelity,
    gamma_amplitudes,
    rayleigh_decay,
    steady_model,
    success_probability,
    two_sided_overlap,
)

SIGMA = 0.5  # quadrature standard deviation of a single coherent peak


def _peak_integral(d, x_c):
    """Numerical integral of the Gaussian outcome density over the window."""
    val, err = quad(
        lambda x: math.exp(-((x - d) ** 2) / (2.0 * SIGMA**2))
        / (SIGMA * math.sqrt(2.0 * math.pi)),
        -x_c, x_c, epsabs=1e-13, epsrel=1e-13)
    return val


def _cross_peak_integral(d_a, d_b, x_c):
    """Numerical integral of the geometric mean of two peak densities."""
    val, err = quad(
        lambda x: math.sqrt(
            math.exp(-((x - d_a) ** 2) / (2.0 * SIGMA**2))
            * math.exp(-((x - d_b) ** 2) / (2.0 * SIGMA**2)))
        / (SIGMA * math.sqrt(2.0 * math.pi)),
        -x_c, x_c, epsabs=1e-13, epsrel=1e-13)
    return val


def oracle(d11, d00, d10, d01, cross_factor, x_c, target="singlet"):
    """Quadrature-space reference for (F, P): all integrals numerical."""
    peaks = {"d11": d11, "d00": d00, "d10": d10, "d01": d01}
    ints = {k: _peak_integral(v, x_c) for k, v in peaks.items()}
    p = sum(ints.values()) / 4.0
    if target == "singlet":
        da, db = d10, d01
        ia, ib = ints["d10"], ints["d01"]
    else:
        da, db = d11, d00
        ia, ib = ints["d11"], ints["d00"]
    iab = _cross_peak_integral(da, db, x_c)
    f = (ia + ib + 2.0 * cross_factor * iab) / (4.0 * 2.0 * p)
    return f, p


def test_closed_form_matches_oracle_random_draws():
    rng = np.random.default_rng(20260824)
    for _ in range(100):
        d11, d00, d10, d01 = rng.uniform(-4.0, 4.0, size=4)
        cross = rng.uniform(0.0, 1.0)
        x_c = rng.uniform(0.05, 3.0)
        target = "singlet" if rng.uniform() < 0.5 else "triplet"
        f, p = closed_form_fidelity(d11, d00, d10, d01, cross, x_c, target)
        f_ref, p_ref = oracle(d11, d00, d10, d01, cross, x_c, target)
        assert p == pytest.approx(p_ref, abs=1e-8)
        assert f == pytest.approx(f_ref, abs=1e-8)


def test_target_pair_at_zero_law():
    # heralding peaks at zero, non-heralding peaks pushed outside the
    # window: P = erf(sqrt(2) x_c) / 2 and F = 1 with unit cross factor
    for x_c in (0.1, 0.3, 1.0, 3.0):
        p = success_probability(10.0, -10.0, 0.0, 0.0, x_c)
        assert p == pytest.approx(erf(math.sqrt(2.0) * x_c) / 2.0,
                                  abs=1e-12)
        f, _ = closed_form_fidelity(10.0, -10.0, 0.0, 0.0, 1.0, x_c,
                                    "singlet")
        assert f == pytest.approx(1.0, abs=1e-12)


def test_all_peaks_at_zero():
    # no signal at all: every configuration lands in the window alike
    p = success_probability(0.0, 0.0, 0.0, 0.0, 0.3)
    assert p == pytest.approx(erf(math.sqrt(2.0) * 0.3), abs=1e-12)
    f, _ = closed_form_fidelity(0.0, 0.0, 0.0, 0.0, 1.0, 0.3, "singlet")
    assert f == pytest.approx(0.5, abs=1e-12)


@given(st.floats(-5.0, 5.0), st.floats(-5.0, 5.0), st.floats(-5.0, 5.0),
       st.floats(-5.0, 5.0), st.floats(0.0, 1.0), st.floats(0.01, 4.0))
def test_probability_and_fidelity_bounds(d11, d00, d10, d01, cross, x_c):
    f, p = closed_form_fidelity(d11, d00, d10, d01, cross, x_c, "singlet")
    assert 0.0 <= p <= 1.0
    if p > 1e-9:
        assert -1e-12 <= f <= 1.0 + 1e-12


@given(st.floats(-3.0, 3.0), st.floats(0.05, 2.0), st.floats(0.05, 2.0))
def test_probability_monotone_in_window(d, x1, dx):
    lo = success_probability(d, -d, 0.3 * d, -0.3 * d, x1)
    hi = success_probability(d, -d, 0.3 * d, -0.3 * d, x1 + dx)
    assert hi >= lo - 1e-12


def test_distinguishabilities_from_gammas():
    a = SubsystemParams(g=0.15, kappa=0.05, gamma=0.002, nu=1302.0)
    gam = gamma_amplitudes(a, a, 1297.0)
    d = distinguishabilities(gam, 8.0)
    # matched subsystems at zero field: opposite-spin signals vanish and
    # the parallel ones are antisymmetric
    assert d.d10 == pytest.approx(0.0, abs=1e-14)
    assert d.d01 == pytest.approx(0.0, abs=1e-14)
    assert d.d00 == pytest.approx(-d.d11, abs=1e-12)
    theta = 2.0 * math.atan2(2.0 * 0.15**2 / 5.0, 0.05)
    assert d.d11 == pytest.approx(-4.0 * math.sin(2.0 * theta), abs=1e-12)


def test_rayleigh_decay_matches_hand_formula():
    a = SubsystemParams(g=0.15, kappa=0.05, gamma=0.002, nu=1302.0)
    decay = rayleigh_decay(a, a, 1297.0, 8.0)
    rate = 0.15**2 * 0.002 / 25.0
    per_channel = (64.0 / 2.0) * (rate / 2.0) * (4.0 / 0.05)
    assert decay.rates[("A", 0)] == pytest.approx(rate, abs=1e-15)
    assert decay.n_scatt[("B", 1)] == pytest.approx(per_channel, abs=1e-12)
    assert decay.rayleigh_exponent == pytest.approx(4.0 * per_channel,
                                                    abs=1e-12)
    assert decay.factor == pytest.approx(math.exp(-4.0 * per_channel))


def test_two_sided_overlap_matched_is_exactly_one():
    d = 1.234567
    assert two_sided_overlap(d, d, d, d, 1.0) == 1.0
    assert two_sided_overlap(0.3, 0.3, 0.3, 0.3, 0.99) != 1.0
    assert two_sided_overlap(0.3, 0.3, 0.4, 0.4, 1.0) != 1.0


@given(st.floats(0.0, 2.0), st.floats(0.0, 2.0), st.floats(0.0, 1.0))
def test_two_sided_overlap_bounded_for_same_sign(da, db, i_ol):
    # equal-polarization displacements of one subsystem coincide at zero
    # field; the overlap is then a true state overlap, at most 1
    val = two_sided_overlap(da, da, db, db, i_ol)
    assert val <= 1.0 + 1e-12


def test_fidelity_auto_picks_better_target():
    d = Distinguishabilities(d11=0.0, d00=0.0, d10=2.5, d01=-2.5)
    decay = DecayFactors(rayleigh_exponent=0.0)
    rep = fidelity(d, decay, 0.3, target="auto")
    assert rep.target == "triplet"
    assert rep.f > 0.99


def test_fidelity_rejects_empty_window():
    d = Distinguishabilities(d11=9.0, d00=-9.0, d10=8.5, d01=-8.5)
    decay = DecayFactors(rayleigh_exponent=0.0)
    with pytest.raises(NoAcceptanceError):
        fidelity(d, decay, 0.05)
    with pytest.raises(ValueError):
        fidelity(d, decay, -0.3)


def test_evaluate_matches_steady_model():
    a = SubsystemParams(g=0.15, kappa=0.05, gamma=0.002, nu=1302.0)
    rep = evaluate(a, a, 1297.0, 8.0, 0.3)
    out = steady_model(8.0, 0.3,
                       g_a=0.15, kappa_a=0.05, gamma_a=0.002,
                       dw_a0=5.0, dw_a1=5.0,
                       g_b=0.15, kappa_b=0.05, gamma_b=0.002,
                       dw_b0=5.0, dw_b1=5.0)
    assert rep.f == pytest.approx(float(out["f"]), abs=1e-12)
    assert rep.p_succ == pytest.approx(float(out["p_succ"]), abs=1e-12)
    assert rep.target == str(out["target"])


def test_steady_model_vectorizes_and_masks_invalid_points():
    alphas = np.array([4.0, 8.0])[:, None]
    dws = np.array([0.0, 5.0])[None, :]
    out = steady_model(alphas, 0.3,
                       g_a=0.15, kappa_a=0.05, gamma_a=0.002,
                       dw_a0=dws, dw_a1=dws,
                       g_b=0.15, kappa_b=0.05, gamma_b=0.002,
                       dw_b0=dws, dw_b1=dws)
    assert out["f"].shape == (2, 2)
    assert np.all(np.isnan(out["f"][:, 0]))  # resonant column
    assert np.all(np.isfinite(out["f"][:, 1]))


def test_steady_model_light_hole_lowers_signal():
    kw = dict(g_a=0.15, kappa_a=0.05, gamma_a=0.002, dw_a0=5.0, dw_a1=5.0,
              g_b=0.15, kappa_b=0.05, gamma_b=0.002, dw_b0=5.0, dw_b1=5.0)
    plain = steady_model(8.0, 0.3, **kw)
    lh = steady_model(8.0, 0.3, hl_a=10.0, hl_b=10.0, **kw)
    assert abs(float(lh["d11"])) < abs(float(plain["d11"]))
    assert float(lh["exponent"]) < float(plain["exponent"])
