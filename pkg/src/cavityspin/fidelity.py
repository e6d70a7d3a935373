"""Homodyne measurement model and closed-form fidelity.

The four spin configurations displace the measured y-quadrature by the
*distinguishabilities* d_{q1 q2}; each outcome is Gaussian distributed
around its displacement with unit-variance-style width. The initial
two-spin product state has all diagonal elements 1/4 and entangled cross
coherences -1/4; Rayleigh scattering multiplies the cross coherence by
exp(-(alpha_in^2/2) sum_xq (Gamma_R_xq/2) Phi_x), and (for two-sided
cavities) the reflected-light overlap multiplies it further.

Everything here is closed form in error functions and vectorizes over
numpy arrays; the module-level ``steady_model`` is the kernel used for
parameter-grid sweeps.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.special import erf

from .cavity import (
    GammaSet,
    gamma_amplitudes,
    mirror_amplitude,
    steady_pulse_area,
)
from .lightholes import rayleigh_correction, stark_correction
from .params import PulseSpec, SubsystemParams, detunings

_SQRT2 = np.sqrt(2.0)

#: success probabilities below this are treated as "no acceptance"
P_SUCC_FLOOR = 1e-9


class NoAcceptanceError(ValueError):
    """Acceptance window so small (or peaks so far out) that P_succ ~ 0."""


@dataclass(frozen=True)
class Distinguishabilities:
    """Mean quadrature displacements of the four homodyne peaks."""

    d11: float
    d00: float
    d10: float
    d01: float

    def as_array(self) -> np.ndarray:
        return np.array([self.d11, self.d00, self.d10, self.d01])


@dataclass(frozen=True)
class DecayFactors:
    """Multiplicative decay of the entangled cross coherence.

    ``rayleigh_exponent`` is the exponent of the scattering decay (so the
    factor is exp(-rayleigh_exponent)); ``rates`` holds the per-channel
    Rayleigh rates Gamma_R_xq in meV keyed by (subsystem, polarization);
    ``n_scatt`` the per-channel scattered-photon numbers (the per-channel
    exponent contributions). ``two_sided_overlap`` is 1 for one-sided
    configurations.
    """

    rayleigh_exponent: float
    rates: dict = field(default_factory=dict)
    n_scatt: dict = field(default_factory=dict)
    two_sided_overlap: float = 1.0

    @property
    def factor(self) -> float:
        """exp(-rayleigh_exponent), without the reflected-light overlap."""
        return float(np.exp(-self.rayleigh_exponent))


@dataclass(frozen=True)
class FidelityReport:
    f: float
    p_succ: float
    x_c: float
    target: str  # "singlet" or "triplet"
    d: Distinguishabilities
    decay: DecayFactors


def distinguishabilities(gammas: GammaSet, alpha_in: float) -> Distinguishabilities:
    """d_{q1 q2} = -(alpha_in/2) Im(gamma^1_{q1 q2} - gamma^0_{q1 q2})."""
    v = gammas.values

    def d(q1, q2):
        return float(-(alpha_in / 2.0) * np.imag(v[1, q1, q2] - v[0, q1, q2]))

    return Distinguishabilities(d11=d(1, 1), d00=d(0, 0), d10=d(1, 0), d01=d(0, 1))


def _rayleigh_rate(p: SubsystemParams, dw: float, dw_tilde) -> float:
    """Gamma_R_q = g^2 Gamma / dw^2, light-hole corrected when configured."""
    rate = p.g**2 * p.gamma / dw**2
    if dw_tilde is not None:
        rate *= rayleigh_correction(dw, dw_tilde)
    return rate


def rayleigh_decay(a: SubsystemParams, b: SubsystemParams, omega_l: float,
                   alpha_in: float,
                   phi_a: Optional[float] = None,
                   phi_b: Optional[float] = None) -> DecayFactors:
    """Coherence decay from elastic scattering at both cavities.

    ``phi_a``/``phi_b`` are the pulse areas in 1/meV; when omitted the
    steady-state values (4/kappa one-sided, 1/kappa two-sided) are used.
    """
    if phi_a is None:
        phi_a = steady_pulse_area(a.kappa, a.sidedness == "two-sided")
    if phi_b is None:
        phi_b = steady_pulse_area(b.kappa, b.sidedness == "two-sided")
    rates: dict = {}
    n_scatt: dict = {}
    exponent = 0.0
    for label, p, phi in (("A", a, phi_a), ("B", b, phi_b)):
        dets = detunings(p, omega_l)
        for q in (0, 1):
            rate = _rayleigh_rate(p, dets.dw(q), dets.dw_tilde(q))
            contrib = (alpha_in**2 / 2.0) * (rate / 2.0) * phi
            rates[(label, q)] = rate
            n_scatt[(label, q)] = contrib
            exponent += contrib
    return DecayFactors(rayleigh_exponent=exponent, rates=rates, n_scatt=n_scatt)


def two_sided_overlap(d_tilde_a0, d_tilde_a1, d_tilde_b0, d_tilde_b1, i_ol):
    """Reflected-light overlap <beta^{g0 g1}|beta^{g1 g0}> for two-sided cavities.

    Multiplies the entangled cross coherence. Equals 1 exactly when the
    combined reflected displacements of the two subsystems cancel
    (in particular for matched subsystems at zero field with i_ol = 1).
    Vectorizes over arrays.
    """
    a0, a1, b0, b1 = (np.asarray(v, dtype=float)
                      for v in (d_tilde_a0, d_tilde_a1, d_tilde_b0, d_tilde_b1))
    i_ol = np.asarray(i_ol, dtype=float)
    expo = (
        -0.5 * (a0**2 + a1**2 + b0**2 + b1**2 - 2.0 * i_ol * (a1 * b0 + a0 * b1))
        - a0 * a1 - b0 * b1 + i_ol * (a0 * b0 + a1 * b1)
    )
    out = np.exp(expo)
    return float(out) if out.ndim == 0 else out


def _erf4(d, x_c):
    """2 * integral of the squared Gaussian peak at d over [-x_c, x_c]."""
    return erf(_SQRT2 * (x_c - d)) + erf(_SQRT2 * (x_c + d))


def success_probability(d11, d00, d10, d01, x_c):
    """Probability of the homodyne outcome landing inside |x| <= x_c."""
    return (_erf4(d11, x_c) + _erf4(d00, x_c)
            + _erf4(d10, x_c) + _erf4(d01, x_c)) / 8.0


def _cross_integral(d_a, d_b, x_c):
    """2 * integral of the product of the two cross-peak Gaussians."""
    return np.exp(-0.5 * (d_a - d_b) ** 2) * (
        erf((d_a + d_b + 2.0 * x_c) / _SQRT2)
        - erf((d_a + d_b - 2.0 * x_c) / _SQRT2)
    )


def closed_form_fidelity(d11, d00, d10, d01, cross_factor, x_c, target="singlet"):
    """Closed-form Bell-state fidelity; vectorizes over array inputs.

    ``cross_factor`` is the total multiplier on the entangled cross
    coherence (Rayleigh decay times, for two-sided setups, the
    reflected-light overlap). ``target`` selects which pair of
    configurations carries the entanglement: ``"singlet"`` heralds on the
    opposite-spin peaks (d10, d01), ``"triplet"`` on the parallel-spin
    peaks (d11, d00), as produced when the laser is tuned between the two
    dot resonances.

    Returns (F, P_succ).
    """
    p = success_probability(d11, d00, d10, d01, x_c)
    if target == "singlet":
        d_a, d_b = d10, d01
    elif target == "triplet":
        d_a, d_b = d11, d00
    else:
        raise ValueError(f"unknown target {target!r}")
    num = 0.5 * (_erf4(d_a, x_c) + _erf4(d_b, x_c)) \
        + cross_factor * _cross_integral(d_a, d_b, x_c)
    with np.errstate(divide="ignore", invalid="ignore"):
        f = num / (8.0 * p)
    return f, p


def fidelity(d: Distinguishabilities, decay: DecayFactors, x_c: float,
             target: str = "auto") -> FidelityReport:
    """Full fidelity report for one parameter point.

    ``target="auto"`` evaluates both the singlet and the triplet heralding
    and keeps the better one (the reflected-light overlap applies to the
    singlet cross term only, where its expression is defined).
    """
    if x_c <= 0:
        raise ValueError("measurement window x_c must be > 0")
    candidates = ("singlet", "triplet") if target == "auto" else (target,)
    best = None
    for tgt in candidates:
        cross = decay.factor * (decay.two_sided_overlap if tgt == "singlet" else 1.0)
        f, p = closed_form_fidelity(d.d11, d.d00, d.d10, d.d01, cross, x_c, tgt)
        if p < P_SUCC_FLOOR:
            raise NoAcceptanceError(
                f"success probability {p:.3e} below {P_SUCC_FLOOR}: window too "
                "small or all peaks outside the acceptance interval"
            )
        if best is None or f > best.f:
            best = FidelityReport(f=float(f), p_succ=float(p), x_c=x_c,
                                  target=tgt, d=d, decay=decay)
    return best


def evaluate(a: SubsystemParams, b: SubsystemParams, omega_l: float,
             alpha_in: float, x_c: float,
             pulse: Optional[PulseSpec] = None,
             target: str = "auto") -> FidelityReport:
    """Steady-state end-to-end evaluation for a parameter point.

    Builds the gamma amplitudes, distinguishabilities and decay factors
    from the two subsystem descriptions and applies the closed-form
    fidelity. ``pulse`` supplies tau_p and t_prop for the reflected-pulse
    overlap of two-sided configurations (ignored for one-sided ones); the
    scattering decay always uses the steady-state pulse areas.
    """
    gam = gamma_amplitudes(a, b, omega_l)
    d = distinguishabilities(gam, alpha_in)
    decay = rayleigh_decay(a, b, omega_l, alpha_in)
    if a.sidedness == "two-sided" and b.sidedness == "two-sided":
        i_ol = 1.0
        if pulse is not None:
            i_ol = float(np.exp(-(pulse.t_prop**2) / (2.0 * pulse.tau_p**2)))
        dt = {}
        for label, p in (("A", a), ("B", b)):
            dets = detunings(p, omega_l)
            for q in (0, 1):
                dw = dets.dw(q)
                val = (alpha_in / 2.0) * p.g**2 / (p.kappa * dw)
                dwt = dets.dw_tilde(q)
                if dwt is not None:
                    val *= stark_correction(dw, dwt)
                dt[(label, q)] = val
        ovl = two_sided_overlap(dt[("A", 0)], dt[("A", 1)],
                                dt[("B", 0)], dt[("B", 1)], i_ol)
        decay = DecayFactors(rayleigh_exponent=decay.rayleigh_exponent,
                             rates=decay.rates, n_scatt=decay.n_scatt,
                             two_sided_overlap=float(ovl))
    return fidelity(d, decay, x_c, target=target)


def steady_model(alpha_in, x_c, *,
                 g_a, kappa_a, gamma_a, dw_a0, dw_a1, dcav_a=0.0, hl_a=None,
                 g_b, kappa_b, gamma_b, dw_b0, dw_b1, dcav_b=0.0, hl_b=None,
                 two_sided=False, i_ol=1.0, target="auto"):
    """Vectorized steady-state model over broadcastable parameter arrays.

    Returns a dict with keys ``f``, ``p_succ``, ``target``, ``d11``,
    ``d00``, ``d10``, ``d01``, ``exponent`` (Rayleigh) and ``overlap``.
    ``hl_a``/``hl_b`` are light-hole splittings in meV or ``None``. Grid
    points with an invalid detuning (zero or light-hole resonant) come back
    as NaN instead of raising.
    """
    alpha_in = np.asarray(alpha_in, dtype=float)
    inputs = [np.asarray(v, dtype=float)
              for v in (dw_a0, dw_a1, dw_b0, dw_b1, dcav_a, dcav_b, alpha_in)]
    dw_a0, dw_a1, dw_b0, dw_b1, dcav_a, dcav_b, alpha_in = \
        np.broadcast_arrays(*inputs)

    def stark_and_rayleigh(g, gamma, dw, hl):
        with np.errstate(divide="ignore", invalid="ignore"):
            shift = g**2 / dw
            ray = g**2 * gamma / dw**2
        if hl is not None:
            with np.errstate(divide="ignore", invalid="ignore"):
                corr = 1.0 - np.abs(dw) / (3.0 * (hl + dw))
                corr = np.where(np.abs(hl + dw) < 1e-6, np.nan, corr)
            shift = shift * corr
            ray = ray * corr**2
        bad = np.abs(dw) < 1e-6
        return np.where(bad, np.nan, shift), np.where(bad, np.nan, ray)

    x_a0, ray_a0 = stark_and_rayleigh(g_a, gamma_a, dw_a0, hl_a)
    x_a1, ray_a1 = stark_and_rayleigh(g_a, gamma_a, dw_a1, hl_a)
    x_b0, ray_b0 = stark_and_rayleigh(g_b, gamma_b, dw_b0, hl_b)
    x_b1, ray_b1 = stark_and_rayleigh(g_b, gamma_b, dw_b1, hl_b)

    e_a = mirror_amplitude(kappa_a, dcav_a, two_sided)
    e_b = mirror_amplitude(kappa_b, dcav_b, two_sided)
    f_a = [mirror_amplitude(kappa_a, dcav_a + x_a0, two_sided),
           mirror_amplitude(kappa_a, dcav_a + x_a1, two_sided)]
    f_b = [mirror_amplitude(kappa_b, dcav_b + x_b0, two_sided),
           mirror_amplitude(kappa_b, dcav_b + x_b1, two_sided)]

    half_a = alpha_in / 2.0
    d11 = -half_a * np.imag(f_a[1] * f_b[1] - e_a * e_b)
    d00 = -half_a * np.imag(e_a * e_b - f_a[0] * f_b[0])
    d10 = -half_a * np.imag(f_a[1] * e_b - e_a * f_b[0])
    d01 = -half_a * np.imag(e_a * f_b[1] - f_a[0] * e_b)

    phi_a = steady_pulse_area(1.0, two_sided) / kappa_a
    phi_b = steady_pulse_area(1.0, two_sided) / kappa_b
    exponent = (alpha_in**2 / 2.0) * (
        (ray_a0 + ray_a1) / 2.0 * phi_a + (ray_b0 + ray_b1) / 2.0 * phi_b
    )
    decay = np.exp(-exponent)

    if two_sided:
        dt_a0 = half_a * x_a0 / kappa_a
        dt_a1 = half_a * x_a1 / kappa_a
        dt_b0 = half_a * x_b0 / kappa_b
        dt_b1 = half_a * x_b1 / kappa_b
        overlap = two_sided_overlap(dt_a0, dt_a1, dt_b0, dt_b1, i_ol)
    else:
        overlap = np.ones_like(decay)

    if target == "auto":
        f_s, p = closed_form_fidelity(d11, d00, d10, d01,
                                      decay * overlap, x_c, "singlet")
        f_t, _ = closed_form_fidelity(d11, d00, d10, d01, decay, x_c, "triplet")
        f = np.where(np.nan_to_num(f_t, nan=-1.0) > np.nan_to_num(f_s, nan=-1.0),
                     f_t, f_s)
        tgt = np.where(np.nan_to_num(f_t, nan=-1.0) > np.nan_to_num(f_s, nan=-1.0),
                       "triplet", "singlet")
    else:
        cross = decay * overlap if target == "singlet" else decay
        f, p = closed_form_fidelity(d11, d00, d10, d01, cross, x_c, target)
        tgt = np.full(np.shape(f), target)
    # no acceptance: all peaks outside the window; mirror the scalar path's
    # NoAcceptanceError as NaN on the grid
    f = np.where(np.nan_to_num(p, nan=0.0) < P_SUCC_FLOOR, np.nan, f)
    return {"f": f, "p_succ": p, "target": tgt,
            "d11": d11, "d00": d00, "d10": d10, "d01": d01,
            "exponent": exponent, "overlap": overlap}


__all__ = [
    "NoAcceptanceError",
    "Distinguishabilities",
    "DecayFactors",
    "FidelityReport",
    "distinguishabilities",
    "rayleigh_decay",
    "two_sided_overlap",
    "success_probability",
    "closed_form_fidelity",
    "fidelity",
    "evaluate",
    "steady_model",
]
