"""Back-of-envelope estimates."""

import pytest

from cavityspin import EstimateInput, n_scatt_estimate, regime_check, snr_estimate


def _inp(**kw):
    base = dict(g=0.15, kappa=0.05, gamma=0.002, delta_omega=5.0, alpha_in=8.0)
    base.update(kw)
    return EstimateInput(**base)


def test_snr_estimate_value():
    # 4 g^2 / (kappa dw) * alpha = 4 * 0.0225 / 0.25 * 8
    assert snr_estimate(_inp()) == pytest.approx(2.88, abs=1e-12)


def test_snr_scales_linearly_with_alpha():
    assert snr_estimate(_inp(alpha_in=16.0)) == pytest.approx(
        2.0 * snr_estimate(_inp()))


def test_n_scatt_value():
    # (alpha^2/2) * 4 g^2 gamma / (kappa dw^2)
    assert n_scatt_estimate(_inp()) == pytest.approx(0.004608, abs=1e-15)


def test_n_scatt_scales_with_photon_number():
    assert n_scatt_estimate(_inp(alpha_in=16.0)) == pytest.approx(
        4.0 * n_scatt_estimate(_inp()))


def test_regime_check_border_is_strict():
    ratio, ok = regime_check(_inp())
    assert ratio == pytest.approx(225.0)
    assert ok
    # exactly the border g^2 = kappa gamma / 2 does not qualify
    g_border = (0.5 * 0.05 * 0.002) ** 0.5
    ratio, ok = regime_check(_inp(g=g_border))
    assert ratio == pytest.approx(0.5)
    assert not ok


def test_regime_check_zero_linewidth():
    ratio, ok = regime_check(_inp(gamma=0.0))
    assert ratio == float("inf") and ok


def test_validation():
    with pytest.raises(ValueError):
        _inp(delta_omega=0.0)
    with pytest.raises(ValueError):
        _inp(alpha_in=-1.0)
