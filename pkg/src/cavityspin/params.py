"""Parameter containers for a single quantum-dot/cavity subsystem.

Everything downstream works with *signed* laser detunings produced by
:func:`detunings`; raw transition frequencies never leave this module.
The sign convention is ``delta_omega = nu - omega_L``: positive when the
laser is red of the transition, negative for a blueshifted subsystem (this
is how tuning the laser in between two dots enters all later formulas).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional

from .constants import MU_B_MEV_PER_T

#: below this |detuning| (meV) the dispersive model is considered invalid
RESONANCE_GUARD_MEV = 1e-6

DEFAULT_G_E = -0.6  # electron g factor
DEFAULT_G_H = 1.8  # hole g factor


class ResonanceError(ValueError):
    """Laser (near-)resonant with a transition; dispersive expansion invalid."""


@dataclass(frozen=True)
class SubsystemParams:
    """One quantum dot in one microcavity.

    Parameters
    ----------
    g : float
        Light-matter coupling (meV).
    kappa : float
        Cavity field decay rate (meV).
    gamma : float
        Trion radiative linewidth (meV).
    nu : float
        Bare trion transition frequency (meV).
    g_e, g_h : float
        Electron and hole g factors (dimensionless).
    b_ext, b_nuc : float
        External and Overhauser magnetic fields (T). The nuclear field is a
        fixed scalar (quasistatic approximation); it is never sampled.
    delta_omega_hl : float, optional
        Heavy-light hole splitting (meV). ``None`` disables light-hole
        corrections entirely.
    delta_omega_cav : float
        Cavity-laser detuning ``omega_L - omega_0`` (meV).
    sidedness : str
        ``"one-sided"`` (single output mirror) or ``"two-sided"``.
    """

    g: float
    kappa: float
    gamma: float
    nu: float
    g_e: float = DEFAULT_G_E
    g_h: float = DEFAULT_G_H
    b_ext: float = 0.0
    b_nuc: float = 0.0
    delta_omega_hl: Optional[float] = None
    delta_omega_cav: float = 0.0
    sidedness: str = "one-sided"

    def __post_init__(self):
        if self.g < 0:
            raise ValueError(f"coupling g must be >= 0, got {self.g}")
        if self.kappa <= 0:
            raise ValueError(f"cavity decay kappa must be > 0, got {self.kappa}")
        if self.gamma < 0:
            raise ValueError(f"linewidth gamma must be >= 0, got {self.gamma}")
        if self.delta_omega_hl is not None and self.delta_omega_hl <= 0:
            raise ValueError("delta_omega_hl must be > 0 when present")
        if self.sidedness not in ("one-sided", "two-sided"):
            raise ValueError(f"unknown sidedness {self.sidedness!r}")

    def with_(self, **kwargs) -> "SubsystemParams":
        """Return a copy with the given fields replaced."""
        return replace(self, **kwargs)


@dataclass(frozen=True)
class SignedDetunings:
    """Signed laser detunings of one subsystem, per circular polarization.

    ``dw[q] = nu_q - omega_L`` for q in {0, 1}; ``dw_tilde[q]`` is the
    light-hole detuning ``delta_omega_hl + dw[q]`` and is ``None`` when the
    subsystem carries no light-hole splitting.
    """

    dw0: float
    dw1: float
    dw_tilde0: Optional[float] = None
    dw_tilde1: Optional[float] = None

    def dw(self, q: int) -> float:
        return self.dw1 if q else self.dw0

    def dw_tilde(self, q: int) -> Optional[float]:
        return self.dw_tilde1 if q else self.dw_tilde0


def zeeman_frequencies(p: SubsystemParams) -> tuple[float, float]:
    """Zeeman-shifted trion transition frequencies (nu_0, nu_1) in meV.

    nu_q = nu - (-1)^q (g_h - g_e) mu_B B_ext + (-1)^q g_e mu_B B_nuc
    """
    zee = (p.g_h - p.g_e) * MU_B_MEV_PER_T * p.b_ext
    ovh = p.g_e * MU_B_MEV_PER_T * p.b_nuc
    nu0 = p.nu - zee + ovh
    nu1 = p.nu + zee - ovh
    return nu0, nu1


def detunings(p: SubsystemParams, omega_l: float) -> SignedDetunings:
    """Signed detunings of both polarizations for laser frequency omega_l (meV).

    Raises
    ------
    ResonanceError
        If either |nu_q - omega_l| falls below the resonance guard, where
        the dispersive model breaks down.
    """
    nu0, nu1 = zeeman_frequencies(p)
    dw0 = nu0 - omega_l
    dw1 = nu1 - omega_l
    if p.g > 0:
        for q, dw in ((0, dw0), (1, dw1)):
            if abs(dw) < RESONANCE_GUARD_MEV:
                raise ResonanceError(
                    f"laser resonant with transition q={q} "
                    f"(|delta_omega|={abs(dw):.2e} meV < {RESONANCE_GUARD_MEV} meV)"
                )
    if p.delta_omega_hl is None:
        return SignedDetunings(dw0, dw1)
    return SignedDetunings(
        dw0, dw1, p.delta_omega_hl + dw0, p.delta_omega_hl + dw1
    )


@dataclass(frozen=True)
class PulseSpec:
    """Gaussian drive pulse.

    The input shape ``F_IN(t) = exp(-(t-t0)^2 / (4 tau_p^2)) / sqrt(sqrt(2 pi)
    tau_p)`` is normalized so that the integral of |F_IN|^2 over t equals 1.

    ``t0`` defaults to ``5 * tau_p`` so the pulse is fully contained in a
    simulation window starting at t = 0.
    """

    alpha_in: float
    tau_p: float
    t0: Optional[float] = None
    t_prop: float = 0.0

    def __post_init__(self):
        if self.tau_p <= 0:
            raise ValueError(f"pulse length tau_p must be > 0, got {self.tau_p}")
        if self.alpha_in < 0:
            raise ValueError("alpha_in must be >= 0")
        if self.t0 is None:
            object.__setattr__(self, "t0", 5.0 * self.tau_p)

    @property
    def center(self) -> float:
        return self.t0  # type: ignore[return-value]

    @property
    def peak(self) -> float:
        """Peak value of F_IN, attained at t = t0."""
        return 1.0 / math.sqrt(math.sqrt(2.0 * math.pi) * self.tau_p)


__all__ = [
    "RESONANCE_GUARD_MEV",
    "ResonanceError",
    "SubsystemParams",
    "SignedDetunings",
    "PulseSpec",
    "zeeman_frequencies",
    "detunings",
]
