"""Cavity response: pulse shapes, field amplitudes, phases, reflection and
transmission factors, and the complex per-configuration amplitudes used by
the measurement model.

All field amplitudes here are normalized per circular-polarization input
unit, i.e. the physical coherent amplitude is ``(alpha_in/sqrt(2)) * s(t)``.
Signed detunings and the signed Stark shift ``X = delta_omega_cav +
g^2/delta_omega`` (optionally light-hole corrected) carry all strategy
information; no formula below special-cases red vs blue shifts.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.integrate import solve_ivp

from .constants import HBAR_MEV_PS
from .lightholes import stark_correction
from .params import PulseSpec, SignedDetunings, SubsystemParams, detunings

#: minimum number of dense-output samples for a transient trace
MIN_TRACE_SAMPLES = 2048

#: |mean-phase integral| below which the single-phase replacement is dubious
PHASE_DISPERSION_THRESHOLD = 0.9


class IntegrationError(RuntimeError):
    """Adaptive integrator failed to meet its tolerance."""


def input_pulse(t, p: PulseSpec):
    """Normalized Gaussian input shape F_IN(t) (units 1/sqrt(ps))."""
    t = np.asarray(t, dtype=float)
    val = np.exp(-((t - p.center) ** 2) / (4.0 * p.tau_p**2)) * p.peak
    return float(val) if val.ndim == 0 else val


def stark_shift(p: SubsystemParams, dets: SignedDetunings, q: int) -> float:
    """Signed Stark shift g^2/dw_q (meV), light-hole corrected if configured."""
    dw = dets.dw(q)
    shift = p.g**2 / dw
    dwt = dets.dw_tilde(q)
    if dwt is not None:
        shift *= stark_correction(dw, dwt)
    return shift


def mirror_amplitude(kappa, y, two_sided=False):
    """Steady-state amplitude multiplying the input for one subsystem.

    ``y`` is the total intracavity frequency pull (meV): cavity-laser
    detuning plus Stark shift. One-sided cavities return the reflection
    amplitude kappa/(kappa/2 - i y) - 1 (unit modulus, lossless); two-sided
    cavities return the transmission amplitude kappa/(kappa - i y).
    """
    kappa = np.asarray(kappa, dtype=float)
    y = np.asarray(y, dtype=float)
    with np.errstate(invalid="ignore", divide="ignore"):
        if two_sided:
            out = kappa / (kappa - 1j * y)
        else:
            out = kappa / (kappa / 2.0 - 1j * y) - 1.0
    return complex(out) if out.ndim == 0 else out


def steady_reflection(g: float, kappa: float, dw: float, dcav: float = 0.0,
                      stark_factor: float = 1.0) -> complex:
    """One-sided steady reflection amplitude for an interacting cavity.

    For g = 0 this is the empty-cavity reflection; on resonance it equals 1
    (mirror-like). ``stark_factor`` is the light-hole correction on g^2/dw.
    """
    if g > 0 and dw == 0:
        raise ZeroDivisionError("dispersive reflection needs |dw| > 0 when g > 0")
    y = dcav + (stark_factor * g**2 / dw if g > 0 else 0.0)
    return complex(mirror_amplitude(kappa, y, two_sided=False))


def steady_transmission(g: float, kappa: float, dw: float, dcav: float = 0.0,
                        stark_factor: float = 1.0) -> complex:
    """Two-sided steady transmission amplitude (total linewidth 2 kappa)."""
    if g > 0 and dw == 0:
        raise ZeroDivisionError("dispersive transmission needs |dw| > 0 when g > 0")
    y = dcav + (stark_factor * g**2 / dw if g > 0 else 0.0)
    return complex(mirror_amplitude(kappa, y, two_sided=True))


@dataclass
class CavityTrace:
    """Time trace of the (normalized) intracavity and output fields.

    ``s`` is the cavity amplitude per unit circular-polarization input, so
    the empty one-sided steady state is s = (2/sqrt(kappa_t)) F_IN. ``out``
    is the complex output amplitude sqrt(kappa_t) s - F_IN (one-sided) or
    sqrt(kappa_t) s (two-sided transmission).
    """

    t: np.ndarray  # ps
    s: np.ndarray  # complex
    f_in: np.ndarray
    out: np.ndarray  # complex
    pulse: PulseSpec
    kappa: float  # meV
    y: float  # total frequency pull (meV)
    two_sided: bool

    @property
    def f_out(self) -> np.ndarray:
        """Output pulse shape |out(t)|."""
        return np.abs(self.out)

    @property
    def theta(self) -> np.ndarray:
        """Instantaneous output phase arg out(t)."""
        return np.angle(self.out)

    def steady_s(self) -> np.ndarray:
        """Steady-state prediction for s(t) on the same grid."""
        kt = self.kappa / HBAR_MEV_PS
        yt = self.y / HBAR_MEV_PS
        denom = (kt - 1j * yt) if self.two_sided else (kt / 2.0 - 1j * yt)
        return np.sqrt(kt) / denom * self.f_in

    def pulse_area(self) -> float:
        """Phi = integral |s(t)|^2 dt, expressed in 1/meV (hbar/meV) units."""
        return float(np.trapezoid(np.abs(self.s) ** 2, self.t)) / HBAR_MEV_PS


def transient_cavity_field(p: PulseSpec, g: float, kappa: float, dw: float,
                           dcav: float = 0.0, stark_factor: float = 1.0,
                           two_sided: bool = False,
                           n_samples: int = 4096,
                           rtol: float = 1e-8, atol: float = 1e-12) -> CavityTrace:
    """Integrate the driven-cavity mean-field equation for one polarization.

        ds/dt = (i y - kappa_eff/2) s + sqrt(kappa_t) F_IN(t)

    with y the frequency pull (cavity-laser detuning plus Stark shift) and
    kappa_eff = kappa (one-sided) or 2 kappa (two-sided). The window is
    [0, t0 + 6 tau_p + 10 hbar/kappa] with t0 = 5 tau_p by default.
    """
    if n_samples < MIN_TRACE_SAMPLES:
        n_samples = MIN_TRACE_SAMPLES
    if g > 0 and dw == 0:
        raise ZeroDivisionError("dispersive model needs |dw| > 0 when g > 0")
    y = dcav + (stark_factor * g**2 / dw if g > 0 else 0.0)
    kt = kappa / HBAR_MEV_PS
    yt = y / HBAR_MEV_PS
    keff = 2.0 * kt if two_sided else kt
    t_end = p.center + 6.0 * p.tau_p + 10.0 / kt
    t = np.linspace(0.0, t_end, n_samples)

    def rhs(tt, s):
        return (1j * yt - keff / 2.0) * s + np.sqrt(kt) * input_pulse(tt, p)

    sol = solve_ivp(rhs, (0.0, t_end), np.zeros(1, complex), method="DOP853",
                    t_eval=t, rtol=rtol, atol=atol)
    if not sol.success:
        raise IntegrationError(f"cavity-field integration failed: {sol.message}")
    s = sol.y[0]
    f_in = input_pulse(t, p)
    out = np.sqrt(kt) * s - (0.0 if two_sided else f_in)
    return CavityTrace(t=t, s=s, f_in=f_in, out=out, pulse=p, kappa=kappa,
                       y=y, two_sided=two_sided)


def mean_phase(trace: CavityTrace) -> float:
    """Effective single phase of the output pulse.

    Defined through exp(i theta_bar) := integral |F_OUT|^2 exp(i theta(t)) dt
    with |F_OUT|^2 normalized on the trace grid. Warns when the modulus of
    the integral drops below 0.9 (large phase dispersion: a single mean
    phase is then a poor description of the pulse).
    """
    w = trace.f_out**2
    norm = np.trapezoid(w, trace.t)
    if norm <= 0:
        raise ValueError("output pulse has zero energy")
    z = np.trapezoid(w * np.exp(1j * trace.theta), trace.t) / norm
    if abs(z) < PHASE_DISPERSION_THRESHOLD:
        warnings.warn(
            f"mean phase poorly representative: |integral| = {abs(z):.3f} < "
            f"{PHASE_DISPERSION_THRESHOLD} (strong phase dispersion)",
            stacklevel=2,
        )
    return float(np.angle(z))


def mean_cavity_phase(t: np.ndarray, amp: np.ndarray) -> float:
    """Mean phase of a cavity-field trace, weighted by |amp|^2."""
    w = np.abs(amp) ** 2
    norm = np.trapezoid(w, t)
    if norm <= 0:
        return 0.0
    z = np.trapezoid(w * np.exp(1j * np.angle(amp)), t) / norm
    return float(np.angle(z))


def steady_pulse_area(kappa: float, two_sided: bool = False) -> float:
    """Steady-state pulse area Phi in 1/meV: 4/kappa one-sided, 1/kappa two-sided."""
    return (1.0 if two_sided else 4.0) / kappa


@dataclass(frozen=True)
class GammaSet:
    """Complex output amplitudes gamma^q_{q1 q2}.

    ``values[q, q1, q2]`` is the amplitude of polarization q for the spin
    configuration (q1, q2) of subsystems (A, B); the input-polarization
    reference amplitude is 1, so the y-polarized signal follows as
    -(alpha_in/2) Im(gamma^1 - gamma^0).
    """

    values: np.ndarray  # complex, shape (2, 2, 2)

    def gamma(self, q: int, q1: int, q2: int) -> complex:
        return complex(self.values[q, q1, q2])


def _subsystem_factors(p: SubsystemParams, dets: SignedDetunings):
    """(empty, interacting_q0, interacting_q1) steady amplitudes for one subsystem."""
    two = p.sidedness == "two-sided"
    empty = mirror_amplitude(p.kappa, p.delta_omega_cav, two)
    inter = [
        mirror_amplitude(p.kappa, p.delta_omega_cav + stark_shift(p, dets, q), two)
        for q in (0, 1)
    ]
    return empty, inter[0], inter[1]


def gamma_amplitudes(a: SubsystemParams, b: SubsystemParams,
                     omega_l: float) -> GammaSet:
    """All eight gamma^q_{q1 q2} amplitudes for the cascaded two-cavity system.

    Polarization q interacts at subsystem A only when q equals A's spin q1,
    and at B only when q equals q2; non-interacting passes pick up the
    empty-cavity amplitude. Tune-between and cavity-detune strategies enter
    purely through the signed detunings and delta_omega_cav.
    """
    det_a = detunings(a, omega_l)
    det_b = detunings(b, omega_l)
    ea, ia0, ia1 = _subsystem_factors(a, det_a)
    eb, ib0, ib1 = _subsystem_factors(b, det_b)
    fa = {0: ia0, 1: ia1}
    fb = {0: ib0, 1: ib1}
    vals = np.zeros((2, 2, 2), dtype=complex)
    for q in (0, 1):
        for q1 in (0, 1):
            for q2 in (0, 1):
                va = fa[q] if q == q1 else ea
                vb = fb[q] if q == q2 else eb
                vals[q, q1, q2] = va * vb
    return GammaSet(values=vals)


def overlap_integrals(p: PulseSpec,
                      trace: Optional[CavityTrace] = None) -> tuple[float, float]:
    """(I_ol, homodyne_overlap) for a pulse.

    I_ol = integral F_IN(t) F_IN(t - 2 t_prop) dt, in closed form
    exp(-t_prop^2 / (2 tau_p^2)) for the Gaussian shape. The homodyne factor
    integral F_IN F_OUT dt is taken from the supplied trace, or is 1 in the
    steady-state (shape-preserving) limit.
    """
    i_ol = float(np.exp(-(p.t_prop**2) / (2.0 * p.tau_p**2)))
    if trace is None:
        return i_ol, 1.0
    f_out = trace.f_out
    norm = np.sqrt(np.trapezoid(f_out**2, trace.t))
    hom = float(np.trapezoid(trace.f_in * f_out / norm, trace.t))
    return i_ol, hom


__all__ = [
    "IntegrationError",
    "CavityTrace",
    "GammaSet",
    "input_pulse",
    "stark_shift",
    "mirror_amplitude",
    "steady_reflection",
    "steady_transmission",
    "transient_cavity_field",
    "mean_phase",
    "mean_cavity_phase",
    "steady_pulse_area",
    "gamma_amplitudes",
    "overlap_integrals",
]
