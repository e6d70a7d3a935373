"""Physical constants and unit conversion helpers.

Unit conventions used throughout the package:

* energies and rates (g, kappa, Gamma, detunings) in meV
* times (pulse length, propagation delay, integration grids) in ps
* magnetic fields in T
* photon amplitudes dimensionless (alpha_in**2 = photon number)

The single source of truth for time<->energy conversion is ``HBAR_MEV_PS``;
no other module may hard-code a conversion factor.
"""

from __future__ import annotations

HBAR_MEV_PS: float = 0.6582119514  # reduced Planck constant, meV*ps
MU_B_MEV_PER_T: float = 0.057883818  # Bohr magneton, meV/T


def rate_to_inv_ps(energy_mev: float) -> float:
    """Convert an energy-valued rate (meV) to an angular rate in 1/ps."""
    return energy_mev / HBAR_MEV_PS


def rate_time_product(rate_mev: float, t_ps: float) -> float:
    """Dimensionless product rate*t/hbar, e.g. kappa*tau_p/hbar.

    Used to judge whether a pulse is long enough for the cavity to follow
    adiabatically (steady state holds for values well above 1).
    """
    return rate_mev * t_ps / HBAR_MEV_PS


__all__ = ["HBAR_MEV_PS", "MU_B_MEV_PER_T", "rate_to_inv_ps", "rate_time_product"]
