"""Parameter containers, Zeeman shifts, and signed detunings."""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cavityspin import (
    MU_B_MEV_PER_T,
    RESONANCE_GUARD_MEV,
    PulseSpec,
    ResonanceError,
    SubsystemParams,
    detunings,
    zeeman_frequencies,
)
from cavityspin.cavity import input_pulse


def _sub(**kw):
    base = dict(g=0.15, kappa=0.05, gamma=0.002, nu=1302.0)
    base.update(kw)
    return SubsystemParams(**base)


def test_zeeman_frequencies_zero_field():
    nu0, nu1 = zeeman_frequencies(_sub())
    assert nu0 == nu1 == 1302.0


def test_zeeman_frequencies_external_field():
    # (g_h - g_e) = 2.4 with the default g factors
    nu0, nu1 = zeeman_frequencies(_sub(b_ext=1.0))
    zee = 2.4 * MU_B_MEV_PER_T
    assert nu0 == pytest.approx(1302.0 - zee, abs=1e-15)
    assert nu1 == pytest.approx(1302.0 + zee, abs=1e-15)
    assert zee == pytest.approx(0.1389211632, abs=1e-10)


def test_zeeman_frequencies_nuclear_field_opposes():
    # the Overhauser term enters with the opposite sign of the external term
    nu0, nu1 = zeeman_frequencies(_sub(b_nuc=0.5))
    ovh = -0.6 * MU_B_MEV_PER_T * 0.5
    assert nu0 == pytest.approx(1302.0 + ovh, abs=1e-15)
    assert nu1 == pytest.approx(1302.0 - ovh, abs=1e-15)


def test_detuning_sign_convention():
    # positive detuning = laser red of the transition
    d = detunings(_sub(), 1297.0)
    assert d.dw0 == pytest.approx(5.0)
    assert d.dw1 == pytest.approx(5.0)
    d = detunings(_sub(), 1307.0)
    assert d.dw0 == pytest.approx(-5.0)


@given(st.floats(-20.0, 20.0))
def test_detuning_is_nu_minus_laser(offset):
    p = _sub(b_ext=0.4)
    nu0, nu1 = zeeman_frequencies(p)
    omega_l = 1302.0 + offset
    try:
        d = detunings(p, omega_l)
    except ResonanceError:
        assert (abs(nu0 - omega_l) < RESONANCE_GUARD_MEV
                or abs(nu1 - omega_l) < RESONANCE_GUARD_MEV)
        return
    assert d.dw0 == nu0 - omega_l
    assert d.dw1 == nu1 - omega_l


def test_resonance_guard():
    with pytest.raises(ResonanceError):
        detunings(_sub(), 1302.0)
    with pytest.raises(ResonanceError):
        detunings(_sub(), 1302.0 + 0.5 * RESONANCE_GUARD_MEV)
    # an uncoupled dot never triggers the guard
    detunings(_sub(g=0.0), 1302.0)


def test_light_hole_detunings():
    d = detunings(_sub(delta_omega_hl=10.0), 1297.0)
    assert d.dw_tilde0 == pytest.approx(15.0)
    assert d.dw_tilde(1) == pytest.approx(15.0)
    assert detunings(_sub(), 1297.0).dw_tilde0 is None


def test_validation_errors():
    with pytest.raises(ValueError):
        _sub(g=-0.1)
    with pytest.raises(ValueError):
        _sub(kappa=0.0)
    with pytest.raises(ValueError):
        _sub(delta_omega_hl=-1.0)
    with pytest.raises(ValueError):
        _sub(sidedness="three-sided")
    with pytest.raises(ValueError):
        PulseSpec(alpha_in=1.0, tau_p=0.0)
    with pytest.raises(ValueError):
        PulseSpec(alpha_in=-1.0, tau_p=10.0)


def test_with_replaces_fields():
    p = _sub()
    q = p.with_(g=0.2, sidedness="two-sided")
    assert q.g == 0.2 and q.sidedness == "two-sided"
    assert p.g == 0.15  # original untouched


def test_pulse_defaults_and_peak():
    p = PulseSpec(alpha_in=8.0, tau_p=100.0)
    assert p.center == 500.0
    assert p.peak == pytest.approx(
        1.0 / math.sqrt(math.sqrt(2.0 * math.pi) * 100.0))


@given(st.floats(1.0, 5000.0))
def test_pulse_shape_is_normalized(tau_p):
    p = PulseSpec(alpha_in=1.0, tau_p=tau_p)
    t = np.linspace(p.center - 12 * tau_p, p.center + 12 * tau_p, 20001)
    norm = np.trapezoid(input_pulse(t, p) ** 2, t)
    assert norm == pytest.approx(1.0, rel=1e-9)
