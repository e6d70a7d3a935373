"""Fidelity and success probability of measurement-based entanglement of
two quantum-dot spins in optical microcavities.

A weak coherent pulse reflects off (or passes through) two single-sided or
two-sided cavities, each holding a singly charged quantum dot; a homodyne
quadrature measurement of the output light projects the two spins onto an
entangled state. This package provides the analytic model (dispersive
cavity response, Faraday-rotation distinguishabilities, Rayleigh-scattering
decay, closed-form fidelity and success probability), light-hole
corrections, pulse-overlap effects for two-sided cavities, optical-Bloch
cross-checks of the dispersive approximations, and parameter optimizers
for identical and nonidentical dots.

Units: energies and rates in meV, times in ps, hbar = 0.6582 meV ps.
"""

from .constants import HBAR_MEV_PS, MU_B_MEV_PER_T
from .params import (
    RESONANCE_GUARD_MEV,
    PulseSpec,
    ResonanceError,
    SignedDetunings,
    SubsystemParams,
    detunings,
    zeeman_frequencies,
)
from .estimates import (
    EstimateInput,
    n_scatt_estimate,
    regime_check,
    snr_estimate,
)
from .cavity import (
    CavityTrace,
    GammaSet,
    IntegrationError,
    gamma_amplitudes,
    input_pulse,
    mean_cavity_phase,
    mean_phase,
    mirror_amplitude,
    overlap_integrals,
    steady_pulse_area,
    steady_reflection,
    steady_transmission,
    transient_cavity_field,
)
from .lightholes import (
    COUPLING_REDUCTION,
    LINEWIDTH_REDUCTION,
    LightHoleConfig,
    rayleigh_correction,
    stark_correction,
)
from .fidelity import (
    DecayFactors,
    Distinguishabilities,
    FidelityReport,
    NoAcceptanceError,
    closed_form_fidelity,
    distinguishabilities,
    evaluate,
    fidelity,
    rayleigh_decay,
    steady_model,
    success_probability,
    two_sided_overlap,
)
from .semiclassical import (
    ObeState,
    SemiclassicalComparison,
    analytic_damping_exponent,
    analytic_field_phase,
    integrate_obe1,
    integrate_obe2,
    semiclassical_fidelity,
)
from .optimize import (
    OptimumRecord,
    RegionScan,
    StrategyConfig,
    cavity_detune_candidates,
    max_fidelity_vs_coupling,
    optimize_identical,
    optimize_strategy,
    region_scan,
    two_sided_curve,
)

__version__ = "0.1.0"

__all__ = [
    "HBAR_MEV_PS",
    "MU_B_MEV_PER_T",
    "RESONANCE_GUARD_MEV",
    "PulseSpec",
    "ResonanceError",
    "SignedDetunings",
    "SubsystemParams",
    "detunings",
    "zeeman_frequencies",
    "EstimateInput",
    "n_scatt_estimate",
    "regime_check",
    "snr_estimate",
    "CavityTrace",
    "GammaSet",
    "IntegrationError",
    "gamma_amplitudes",
    "input_pulse",
    "mean_cavity_phase",
    "mean_phase",
    "mirror_amplitude",
    "overlap_integrals",
    "steady_pulse_area",
    "steady_reflection",
    "steady_transmission",
    "transient_cavity_field",
    "COUPLING_REDUCTION",
    "LINEWIDTH_REDUCTION",
    "LightHoleConfig",
    "rayleigh_correction",
    "stark_correction",
    "DecayFactors",
    "Distinguishabilities",
    "FidelityReport",
    "NoAcceptanceError",
    "closed_form_fidelity",
    "distinguishabilities",
    "evaluate",
    "fidelity",
    "rayleigh_decay",
    "steady_model",
    "success_probability",
    "two_sided_overlap",
    "ObeState",
    "SemiclassicalComparison",
    "analytic_damping_exponent",
    "analytic_field_phase",
    "integrate_obe1",
    "integrate_obe2",
    "semiclassical_fidelity",
    "OptimumRecord",
    "RegionScan",
    "StrategyConfig",
    "cavity_detune_candidates",
    "max_fidelity_vs_coupling",
    "optimize_identical",
    "optimize_strategy",
    "region_scan",
    "two_sided_curve",
    "__version__",
]
