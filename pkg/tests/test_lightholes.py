"""Light-hole replacement factors."""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cavityspin import (
    COUPLING_REDUCTION,
    LINEWIDTH_REDUCTION,
    LightHoleConfig,
    ResonanceError,
    rayleigh_correction,
    stark_correction,
)


def test_reduction_constants():
    assert COUPLING_REDUCTION == pytest.approx(1.0 / np.sqrt(3.0))
    assert LINEWIDTH_REDUCTION == pytest.approx(1.0 / 3.0)


def test_redshift_values():
    # dw = 5, splitting 10 -> light-hole detuning 15:
    # 1 - (1/3)(5/15) = 8/9
    assert stark_correction(5.0, 15.0) == pytest.approx(8.0 / 9.0, abs=1e-15)
    assert rayleigh_correction(5.0, 15.0) == pytest.approx(64.0 / 81.0,
                                                           abs=1e-15)


def test_blueshift_reduces_more():
    # blueshifted dot sits between the heavy- and light-hole lines, so the
    # light-hole transition is closer and the reduction is stronger:
    # dw = -5, splitting 10 -> light-hole detuning 5: 1 - (1/3)(5/5) = 2/3
    assert stark_correction(-5.0, 5.0) == pytest.approx(2.0 / 3.0, abs=1e-15)
    assert stark_correction(-5.0, 5.0) < stark_correction(5.0, 15.0)


def test_large_splitting_limit():
    assert stark_correction(5.0, 1e9 + 5.0) == pytest.approx(1.0, abs=1e-8)


@given(st.floats(0.1, 50.0), st.floats(5.0, 100.0))
def test_correction_below_one_and_rayleigh_is_square(dw, hl):
    f = stark_correction(dw, hl + dw)
    assert 0.0 < f <= 1.0
    assert rayleigh_correction(dw, hl + dw) == pytest.approx(f * f)


def test_vectorized():
    dw = np.array([5.0, -5.0])
    out = stark_correction(dw, 10.0 + dw)
    assert out.shape == (2,)
    assert out[0] == pytest.approx(8.0 / 9.0)
    assert out[1] == pytest.approx(2.0 / 3.0)


def test_light_hole_resonance_guard():
    with pytest.raises(ResonanceError):
        stark_correction(-10.0, 1e-9)


def test_config_validation():
    LightHoleConfig(delta_omega_hl=10.0)
    with pytest.raises(ValueError):
        LightHoleConfig(delta_omega_hl=0.0)
