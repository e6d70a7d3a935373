"""Back-of-envelope feasibility checks.

All three estimates are expressed through the cavity parameters (g, kappa)
rather than finesse and cross sections, since every downstream formula uses
the cavity form. The signal estimate is the small-angle parallel-spin
distinguishability, the scattering estimate the per-polarization elastic
photon count, and the regime check the intermediate-coupling condition
g^2 > Gamma*kappa/2.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class EstimateInput:
    g: float  # meV
    kappa: float  # meV
    gamma: float  # meV
    delta_omega: float  # meV
    alpha_in: float  # photon amplitude; alpha_in**2 = photon number

    def __post_init__(self):
        for name in ("g", "kappa", "gamma", "delta_omega", "alpha_in"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.kappa == 0 or self.delta_omega == 0:
            raise ValueError("kappa and delta_omega must be > 0")


def snr_estimate(e: EstimateInput) -> float:
    """Signal-to-noise ratio 4 g^2 / (kappa delta_omega) * alpha_in."""
    return 4.0 * e.g**2 / (e.kappa * e.delta_omega) * e.alpha_in


def n_scatt_estimate(e: EstimateInput) -> float:
    """Scattered photons per polarization, (alpha_in^2/2) * 4 g^2 Gamma / (kappa dw^2)."""
    return (e.alpha_in**2 / 2.0) * 4.0 * e.g**2 * e.gamma / (e.kappa * e.delta_omega**2)


def regime_check(e: EstimateInput) -> tuple[float, bool]:
    """Intermediate-coupling check: returns (g^2/(kappa*Gamma), ratio > 1/2).

    The inequality is strict: the border value 0.5 does not qualify.
    """
    if e.gamma == 0:
        return float("inf"), True
    ratio = e.g**2 / (e.kappa * e.gamma)
    return ratio, ratio > 0.5


__all__ = ["EstimateInput", "snr_estimate", "n_scatt_estimate", "regime_check"]
