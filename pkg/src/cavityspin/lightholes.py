"""Light-hole corrections.

Light-hole transitions sit ``delta_omega_hl`` above the heavy-hole trion and
couple with dipole matrix elements reduced by 1/sqrt(3) (so g -> g/sqrt(3),
Gamma -> Gamma/3). Their net effect on the dispersive model is captured by
two multiplicative replacement factors:

* Stark shift:        g^2/dw -> (g^2/dw) * (1 - (1/3) |dw|/dw_tilde)
* Rayleigh rate:      Gamma_R -> Gamma_R * (1 - (1/3) |dw|/dw_tilde)^2

with the signed light-hole detuning ``dw_tilde = delta_omega_hl + dw`` (for
a blueshifted subsystem, dw < 0, this is the gap delta_omega_hl - |dw|
between laser and light-hole line). The reduction uses the magnitude of the
laser detuning: for either shift direction the light-hole transition works
against the heavy-hole one, so the relative phase per photon and the
scattering rate both decrease, fastest for a blueshifted subsystem sitting
between the two lines.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import RESONANCE_GUARD_MEV, ResonanceError

COUPLING_REDUCTION = 1.0 / np.sqrt(3.0)  # light-hole dipole moment vs heavy hole
LINEWIDTH_REDUCTION = 1.0 / 3.0


@dataclass(frozen=True)
class LightHoleConfig:
    """Heavy-light hole splitting; the reduction constants are fixed."""

    delta_omega_hl: float  # meV, > 0

    def __post_init__(self):
        if self.delta_omega_hl <= 0:
            raise ValueError("delta_omega_hl must be > 0")


def stark_correction(dw, dw_tilde):
    """Multiplicative factor on g^2/dw; accepts scalars or arrays.

    Raises :class:`ResonanceError` if the laser is (near-)resonant with the
    light-hole transition.
    """
    dw = np.asarray(dw, dtype=float)
    dw_tilde = np.asarray(dw_tilde, dtype=float)
    if np.any(np.abs(dw_tilde) < RESONANCE_GUARD_MEV):
        raise ResonanceError("laser resonant with light-hole transition")
    out = 1.0 - (1.0 / 3.0) * np.abs(dw) / dw_tilde
    return float(out) if out.ndim == 0 else out


def rayleigh_correction(dw, dw_tilde):
    """Multiplicative factor on each Rayleigh rate: stark_correction squared."""
    f = stark_correction(dw, dw_tilde)
    return f * f


__all__ = [
    "COUPLING_REDUCTION",
    "LINEWIDTH_REDUCTION",
    "LightHoleConfig",
    "stark_correction",
    "rayleigh_correction",
]
