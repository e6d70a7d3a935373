"""Deterministic parameter searches over the steady-state model.

Every search is a dense grid evaluation (vectorized through
``fidelity.steady_model``) followed by compass coordinate descent down to a
step of 1e-3. No stochastic optimizers: identical inputs give identical
optima, and the returned optimum always dominates every evaluated grid
point because refinement only ever accepts strict improvements.

Strategies for nonidentical quantum dots:

* ``redshift``      laser below both transitions; free parameters
                    (alpha_in, base detuning of the nearest transition),
                    with the farthest detuning capped at ``max_detuning``.
* ``tune-between``  laser between the two transition frequencies; free
                    parameters (alpha_in, asymmetry offset), where the
                    offset shifts the laser off the midpoint. Falls back
                    to the redshift scan when the splitting is too small
                    to fit the laser in between.
* ``cavity-detune`` redshift plus a cavity-laser detuning at the
                    subsystem with the higher transition frequency; the
                    detuning grid keeps the best negative and the best
                    positive candidate and refines both (the optimal
                    branch switches sign discontinuously).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from .fidelity import steady_model
from .params import SubsystemParams, zeeman_frequencies

REFINE_TOL = 1e-3

_STRATEGIES = ("redshift", "tune-between", "cavity-detune")


@dataclass(frozen=True)
class StrategyConfig:
    """Search configuration for :func:`optimize_strategy`.

    ``asym_offset`` fixes the tune-between asymmetry when given; ``None``
    scans it. ``dcav_range`` bounds the cavity-laser detuning scan of the
    cavity-detune strategy.
    """

    strategy: str
    x_c: float = 0.3
    alpha_range: tuple = (0.25, 30.0)
    alpha_step: float = 0.25
    dw_range: tuple = (1.0, 10.0)
    dw_step: float = 0.25
    max_detuning: float = 10.0
    asym_offset: Optional[float] = None
    dcav_range: tuple = (-2.0, 2.0)
    dcav_step: float = 0.05
    target: str = "auto"

    def __post_init__(self):
        if self.strategy not in _STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}; "
                             f"choose from {_STRATEGIES}")
        for name in ("alpha_range", "dw_range", "dcav_range"):
            lo, hi = getattr(self, name)
            if not hi >= lo:
                raise ValueError(f"{name} is empty: ({lo}, {hi})")
        if self.x_c <= 0:
            raise ValueError("x_c must be > 0")


@dataclass(frozen=True)
class OptimumRecord:
    """Best point of one search, with full diagnostics.

    ``delta_omega`` is the strategy's detuning coordinate: the common
    detuning for identical dots, the base (nearest-transition) detuning
    for redshift and cavity-detune, the asymmetry offset's companion for
    tune-between (where ``asym_offset`` carries the free offset).
    ``feasible`` is False when no grid point reached P_succ >= 1e-3;
    ``at_boundary`` flags an optimum pinned to a search-range edge.
    """

    f: float
    p_succ: float
    alpha_in: float
    delta_omega: float
    x_c: float
    target: str
    dcav: float = 0.0
    asym_offset: float = 0.0
    feasible: bool = True
    at_boundary: bool = False
    diagnostics: dict = field(default_factory=dict)


#: minimal success probability for a grid point to count as usable
P_FEASIBLE = 1e-3


def _axis(lo: float, hi: float, step: float) -> np.ndarray:
    """Inclusive arithmetic grid from lo to hi with spacing <= step."""
    if hi <= lo:
        return np.array([lo])
    n = int(math.ceil((hi - lo) / step)) + 1
    return np.linspace(lo, hi, n)


def _best_index(f: np.ndarray) -> tuple:
    """Argmax ignoring NaN; raises if everything is NaN."""
    flat = np.where(np.isfinite(f), f, -np.inf)
    idx = int(np.argmax(flat))
    if not np.isfinite(flat.flat[idx]):
        raise ValueError("objective is NaN on the whole grid")
    return np.unravel_index(idx, f.shape)


def _refine(fun: Callable[[Sequence[float]], float], x0: Sequence[float],
            steps: Sequence[float], bounds: Sequence[tuple],
            tol: float = REFINE_TOL):
    """Compass coordinate descent: probe +/- step per coordinate, halve on
    stagnation, stop when every step is below ``tol``.

    Only strict improvements are accepted, so the result never falls below
    fun(x0)."""
    x = [float(v) for v in x0]
    best = fun(x)
    steps = [float(s) for s in steps]
    while max(steps) > tol:
        improved = False
        for i in range(len(x)):
            lo, hi = bounds[i]
            for sgn in (1.0, -1.0):
                cand = list(x)
                cand[i] = min(max(cand[i] + sgn * steps[i], lo), hi)
                if cand[i] == x[i]:
                    continue
                val = fun(cand)
                if np.isfinite(val) and val > best:
                    x, best = cand, val
                    improved = True
        if not improved:
            steps = [s / 2.0 for s in steps]
    return x, best


def _identical_kwargs(g, kappa, gamma, hl=None):
    return dict(g_a=g, kappa_a=kappa, gamma_a=gamma, hl_a=hl,
                g_b=g, kappa_b=kappa, gamma_b=gamma, hl_b=hl)


def _record(alpha, x_c, target, *, delta_omega, dcav=0.0, asym=0.0,
            feasible=True, at_boundary=False, extra=None, **model_kwargs):
    """Evaluate one point and package it as an OptimumRecord."""
    out = steady_model(alpha, x_c, target=target, **model_kwargs)
    diag = {k: float(out[k]) for k in
            ("d11", "d00", "d10", "d01", "exponent", "overlap")}
    if extra:
        diag.update(extra)
    return OptimumRecord(
        f=float(out["f"]), p_succ=float(out["p_succ"]),
        alpha_in=float(alpha), delta_omega=float(delta_omega), x_c=x_c,
        target=str(out["target"]), dcav=float(dcav), asym_offset=float(asym),
        feasible=feasible, at_boundary=at_boundary, diagnostics=diag)


def optimize_identical(g: float, kappa: float, gamma: float, x_c: float,
                       alpha_range=(0.25, 30.0), dw_range=(1.0, 10.0),
                       alpha_step: float = 0.25, dw_step: float = 0.25,
                       target: str = "auto",
                       hl: Optional[float] = None) -> OptimumRecord:
    """Maximize F over (alpha_in, delta_omega) for identical subsystems.

    Grid spacing is capped at (alpha_step, dw_step); the grid optimum is
    then refined by coordinate descent to 1e-3. Ties on the grid resolve
    toward the smallest alpha_in (alpha is the slow argmax axis).
    """
    kw = _identical_kwargs(g, kappa, gamma, hl)
    alphas = _axis(*alpha_range, alpha_step)
    dws = _axis(*dw_range, dw_step)
    out = steady_model(alphas[:, None], x_c, target=target,
                       dw_a0=dws[None, :], dw_a1=dws[None, :],
                       dw_b0=dws[None, :], dw_b1=dws[None, :], **kw)
    ia, idw = _best_index(out["f"])

    def fun(x):
        a, dw = x
        r = steady_model(a, x_c, target=target,
                         dw_a0=dw, dw_a1=dw, dw_b0=dw, dw_b1=dw, **kw)
        return float(np.where(np.isnan(r["f"]), -np.inf, r["f"]))

    (a_opt, dw_opt), _ = _refine(
        fun, (alphas[ia], dws[idw]), (alpha_step, dw_step),
        (alpha_range, dw_range))
    boundary = (a_opt in alpha_range) or (dw_opt in dw_range)
    return _record(a_opt, x_c, target, delta_omega=dw_opt,
                   at_boundary=boundary,
                   dw_a0=dw_opt, dw_a1=dw_opt, dw_b0=dw_opt, dw_b1=dw_opt,
                   **kw)


def max_fidelity_vs_coupling(ratios, x_c: float = 0.3,
                             kappa: float = 0.05, gamma: float = 0.002,
                             dw_range=(1.0, 10.0)) -> list:
    """Maximal fidelity versus the coupling ratio g^2/(kappa*gamma).

    The photon amplitude is searched through the scaled signal variable
    s = alpha_in * g^2 / (kappa * delta_omega): at weak coupling the
    optimal alpha_in grows without bound (hundreds of photons at the
    regime border), so a fixed alpha range would truncate the search. The
    scaled grid keeps the signal axis comparable across ratios.
    """
    records = []
    s_axis = np.linspace(0.01, 4.0, 400)
    dws = _axis(*dw_range, 0.25)
    for ratio in ratios:
        g = math.sqrt(ratio * kappa * gamma)
        kw = _identical_kwargs(g, kappa, gamma)
        alphas = s_axis[:, None] * kappa * dws[None, :] / g**2
        out = steady_model(alphas, x_c, target="auto",
                           dw_a0=dws[None, :], dw_a1=dws[None, :],
                           dw_b0=dws[None, :], dw_b1=dws[None, :], **kw)
        i_s, idw = _best_index(out["f"])

        def fun(x):
            s, dw = x
            a = s * kappa * dw / g**2
            r = steady_model(a, x_c, target="auto",
                             dw_a0=dw, dw_a1=dw, dw_b0=dw, dw_b1=dw, **kw)
            return float(np.where(np.isnan(r["f"]), -np.inf, r["f"]))

        (s_opt, dw_opt), _ = _refine(
            fun, (s_axis[i_s], dws[idw]), (0.01, 0.25),
            ((s_axis[0], s_axis[-1]), dw_range))
        a_opt = s_opt * kappa * dw_opt / g**2
        rec = _record(a_opt, x_c, "auto", delta_omega=dw_opt,
                      extra={"ratio": float(ratio), "signal_scale": s_opt},
                      dw_a0=dw_opt, dw_a1=dw_opt, dw_b0=dw_opt,
                      dw_b1=dw_opt, **kw)
        records.append(rec)
    return records


def _transition_frequencies(p: SubsystemParams) -> tuple:
    nu0, nu1 = zeeman_frequencies(p)
    return nu0, nu1


def _strategy_grids(a: SubsystemParams, b: SubsystemParams,
                    cfg: StrategyConfig):
    """(alpha axis, scan axis, omega_l(scan), which, mode) for a strategy.

    ``which`` names the subsystem carrying the cavity detuning (the one
    with the higher transition frequency); ``mode`` is the effective
    strategy after the tune-between small-splitting fallback.
    """
    alphas = _axis(*cfg.alpha_range, cfg.alpha_step)
    na0, na1 = _transition_frequencies(a)
    nb0, nb1 = _transition_frequencies(b)
    nu_all = np.array([na0, na1, nb0, nb1])
    span = float(nu_all.max() - nu_all.min())
    mid = (a.nu + b.nu) / 2.0
    delta_nu = abs(b.nu - a.nu)
    which = "a" if a.nu >= b.nu else "b"
    mode = cfg.strategy
    if mode == "tune-between" and delta_nu / 2.0 <= cfg.dw_range[0]:
        # splitting too small to place the laser in between at a safe
        # detuning; the laser goes below both transitions instead
        mode = "redshift"
    if mode == "tune-between":
        if cfg.asym_offset is not None:
            scan = np.array([float(cfg.asym_offset)])
        else:
            half = delta_nu / 2.0 - cfg.dw_range[0]
            n = max(3, 2 * int(math.ceil(half / cfg.dw_step)) + 1)
            scan = np.linspace(-half, half, n)  # symmetric around 0
        sign = 1.0 if b.nu >= a.nu else -1.0
        omega_l = mid - sign * scan
    else:
        hi = min(cfg.dw_range[1], cfg.max_detuning - span)
        lo = cfg.dw_range[0]
        if hi < lo:
            hi = lo
        scan = _axis(lo, hi, cfg.dw_step)
        omega_l = nu_all.min() - scan
    return alphas, scan, omega_l, which, mode


def _strategy_model(a: SubsystemParams, b: SubsystemParams, cfg, alphas,
                    omega_l, dcav_axis=None, which: str = "a"):
    """steady_model over (alpha axis 0, omega_l axis 1 [, dcav axis 2]).

    ``dcav_axis`` adds a third grid axis of cavity-laser detunings applied
    to subsystem ``which``.
    """
    na0, na1 = _transition_frequencies(a)
    nb0, nb1 = _transition_frequencies(b)
    wl = np.asarray(omega_l, dtype=float)
    al = np.asarray(alphas, dtype=float)
    if dcav_axis is None:
        wl = wl[None, :]
        al = al[:, None]
        dcav_a = dcav_b = 0.0
    else:
        wl = wl[None, :, None]
        al = al[:, None, None]
        d = np.asarray(dcav_axis, dtype=float)[None, None, :]
        dcav_a = d if which == "a" else 0.0
        dcav_b = d if which == "b" else 0.0
    return steady_model(
        al, cfg.x_c, target=cfg.target,
        g_a=a.g, kappa_a=a.kappa, gamma_a=a.gamma, hl_a=a.delta_omega_hl,
        dw_a0=na0 - wl, dw_a1=na1 - wl, dcav_a=dcav_a,
        g_b=b.g, kappa_b=b.kappa, gamma_b=b.gamma, hl_b=b.delta_omega_hl,
        dw_b0=nb0 - wl, dw_b1=nb1 - wl, dcav_b=dcav_b)


def optimize_strategy(a: SubsystemParams, b: SubsystemParams,
                      cfg: StrategyConfig) -> OptimumRecord:
    """Best working point for two nonidentical subsystems under a strategy.

    Free parameters are always alpha_in plus the strategy's detuning
    coordinate (base redshift detuning, tune-between asymmetry offset, or
    redshift detuning and cavity-laser detuning). Symmetric under A<->B
    exchange for tune-between with equal couplings. Returns an infeasible
    record (f = NaN) when no grid point reaches P_succ >= 1e-3.
    """
    alphas, scan, omega_l, which, mode = _strategy_grids(a, b, cfg)
    na0, na1 = _transition_frequencies(a)
    nb0, nb1 = _transition_frequencies(b)
    nu_min = min(na0, na1, nb0, nb1)
    mid = (a.nu + b.nu) / 2.0
    sign = 1.0 if b.nu >= a.nu else -1.0

    def wl_of(coord):
        if mode == "tune-between":
            return mid - sign * coord
        return nu_min - coord

    def model_kwargs(wl, dcav):
        dcav_a = dcav if which == "a" else 0.0
        dcav_b = dcav if which == "b" else 0.0
        return dict(
            g_a=a.g, kappa_a=a.kappa, gamma_a=a.gamma, hl_a=a.delta_omega_hl,
            dw_a0=na0 - wl, dw_a1=na1 - wl, dcav_a=dcav_a,
            g_b=b.g, kappa_b=b.kappa, gamma_b=b.gamma, hl_b=b.delta_omega_hl,
            dw_b0=nb0 - wl, dw_b1=nb1 - wl, dcav_b=dcav_b)

    def fun(x):
        alpha, coord, dcav = x[0], x[1], (x[2] if len(x) > 2 else 0.0)
        r = steady_model(alpha, cfg.x_c, target=cfg.target,
                         **model_kwargs(wl_of(coord), dcav))
        return float(np.where(np.isnan(r["f"]), -np.inf, r["f"]))

    scan_bounds = ((float(scan[0]), float(scan[-1]))
                   if len(scan) > 1 else (float(scan[0]), float(scan[0])))

    if cfg.strategy == "cavity-detune" and mode != "tune-between":
        dcavs = _axis(*cfg.dcav_range, cfg.dcav_step)
        out = _strategy_model(a, b, cfg, alphas, omega_l,
                              dcav_axis=dcavs, which=which)
        f = out["f"]
        if not np.any(np.nan_to_num(out["p_succ"], nan=0.0) >= P_FEASIBLE):
            return _infeasible(cfg)
        candidates = []
        for mask in (dcavs <= 0.0, dcavs >= 0.0):
            if not np.any(mask):
                continue
            sub = np.where(mask[None, None, :], f, np.nan)
            try:
                ia, isc, idc = _best_index(sub)
            except ValueError:
                continue
            x0 = (alphas[ia], scan[isc], dcavs[idc])
            x_opt, val = _refine(
                fun, x0, (cfg.alpha_step, cfg.dw_step, cfg.dcav_step),
                (cfg.alpha_range, scan_bounds, cfg.dcav_range))
            candidates.append((val, x_opt))
        val, (a_opt, c_opt, dc_opt) = max(candidates, key=lambda t: t[0])
        boundary = a_opt in cfg.alpha_range or dc_opt in cfg.dcav_range
        return _record(a_opt, cfg.x_c, cfg.target, delta_omega=c_opt,
                       dcav=dc_opt, at_boundary=boundary,
                       extra={"mode": mode, "detuned_cavity": which.upper(),
                              "dcav_candidates":
                              [list(x) for _, x in candidates]},
                       **model_kwargs(wl_of(c_opt), dc_opt))

    out = _strategy_model(a, b, cfg, alphas, omega_l)
    if not np.any(np.nan_to_num(out["p_succ"], nan=0.0) >= P_FEASIBLE):
        return _infeasible(cfg)
    ia, isc = _best_index(out["f"])
    (a_opt, c_opt), _ = _refine(
        fun, (alphas[ia], scan[isc]), (cfg.alpha_step, cfg.dw_step),
        (cfg.alpha_range, scan_bounds))
    asym = c_opt if mode == "tune-between" else 0.0
    return _record(a_opt, cfg.x_c, cfg.target, delta_omega=c_opt,
                   asym=asym, at_boundary=a_opt in cfg.alpha_range,
                   extra={"mode": mode},
                   **model_kwargs(wl_of(c_opt), 0.0))


def _infeasible(cfg: StrategyConfig) -> OptimumRecord:
    return OptimumRecord(f=float("nan"), p_succ=0.0, alpha_in=float("nan"),
                         delta_omega=float("nan"), x_c=cfg.x_c,
                         target=cfg.target, feasible=False,
                         diagnostics={"reason":
                                      "P_succ < 1e-3 at every grid point"})


def cavity_detune_candidates(g_a: float, kappa_a: float, dw_a: float,
                             g_b: float, kappa_b: float, dw_b: float,
                             dcav_range=(-2.0, 2.0),
                             n_scan: int = 4001) -> list:
    """Cavity-laser detunings equalizing the opposite-spin Faraday signals.

    Solves arg r_A(dcav + g_A^2/dw_A) = arg r_A(dcav) + arg r_B(g_B^2/dw_B)
    for dcav, which makes the two opposite-spin output amplitudes carry the
    same phase. There are generically two roots, one negative and one
    positive, because the Stark-shifted phase curve crosses the shifted
    empty-cavity curve on both sides.
    """
    x_a = g_a**2 / dw_a
    theta_b = 2.0 * math.atan2(2.0 * g_b**2 / dw_b, kappa_b)

    def h(d):
        return (2.0 * math.atan2(2.0 * (d + x_a), kappa_a)
                - 2.0 * math.atan2(2.0 * d, kappa_a) - theta_b)

    grid = np.linspace(dcav_range[0], dcav_range[1], n_scan)
    vals = np.array([h(d) for d in grid])
    roots = []
    for i in range(len(grid) - 1):
        if vals[i] == 0.0:
            roots.append(float(grid[i]))
        elif vals[i] * vals[i + 1] < 0.0:
            roots.append(float(brentq(h, grid[i], grid[i + 1],
                                      xtol=1e-12)))
    if vals[-1] == 0.0:
        roots.append(float(grid[-1]))
    return sorted(roots)


@dataclass
class RegionScan:
    """Boolean high-fidelity regions over an (alpha_in, delta_omega) grid.

    ``masks`` maps a light-hole splitting (or None for no light holes) to
    the boolean F > threshold array, shape (len(alpha), len(dw));
    ``intersection`` is the elementwise AND of all masks.
    """

    alpha: np.ndarray
    dw: np.ndarray
    threshold: float
    x_c: float
    mode: str
    masks: dict
    f: dict
    p: dict

    @property
    def intersection(self) -> np.ndarray:
        out = None
        for m in self.masks.values():
            out = m if out is None else (out & m)
        return out

    def min_p(self, key=None) -> float:
        """Smallest P_succ inside a mask (the intersection when key=None)."""
        mask = self.intersection if key is None else self.masks[key]
        if not np.any(mask):
            return float("nan")
        first = next(iter(self.p))
        p = self.p[key if key is not None else first]
        if key is None:
            p = np.min(np.stack([self.p[k] for k in self.p]), axis=0)
        return float(np.nanmin(np.where(mask, p, np.nan)))

    def rows(self):
        """Flat (alpha, dw, per-config F and P, mask flags) row iterator."""
        keys = list(self.masks)
        for i, al in enumerate(self.alpha):
            for j, dw in enumerate(self.dw):
                row = {"alpha_in": float(al), "delta_omega": float(dw)}
                for k in keys:
                    tag = "nolh" if k is None else f"hl{k:g}"
                    row[f"f_{tag}"] = float(self.f[k][i, j])
                    row[f"p_succ_{tag}"] = float(self.p[k][i, j])
                    row[f"mask_{tag}"] = int(self.masks[k][i, j])
                row["mask_overlap"] = int(self.intersection[i, j])
                yield row


def region_scan(g: float, kappa: float, gamma: float, mode: str, x_c: float,
                lh_values=(None, 10.0), dw_range=(1.0, 20.0),
                alpha_range=(0.25, 30.0), n_dw: int = 60, n_alpha: int = 60,
                threshold: float = 0.99) -> RegionScan:
    """High-fidelity region masks with and without light-hole corrections.

    ``mode`` is "redshift" (both subsystems detuned by +dw) or
    "tune-between" (one at -dw, the other at +dw). The grid is at least
    50 x 50; one mask per entry of ``lh_values``.
    """
    if mode not in ("redshift", "tune-between"):
        raise ValueError(f"unknown region mode {mode!r}")
    n_dw = max(n_dw, 50)
    n_alpha = max(n_alpha, 50)
    alphas = np.linspace(*alpha_range, n_alpha)
    dws = np.linspace(*dw_range, n_dw)
    dw_a = -dws if mode == "tune-between" else dws
    masks, fs, ps = {}, {}, {}
    for hl in lh_values:
        out = steady_model(alphas[:, None], x_c, target="auto",
                           g_a=g, kappa_a=kappa, gamma_a=gamma, hl_a=hl,
                           dw_a0=dw_a[None, :], dw_a1=dw_a[None, :],
                           g_b=g, kappa_b=kappa, gamma_b=gamma, hl_b=hl,
                           dw_b0=dws[None, :], dw_b1=dws[None, :])
        f = out["f"]
        masks[hl] = np.nan_to_num(f, nan=-1.0) > threshold
        fs[hl] = f
        ps[hl] = out["p_succ"]
    return RegionScan(alpha=alphas, dw=dws, threshold=threshold, x_c=x_c,
                      mode=mode, masks=masks, f=fs, p=ps)


def two_sided_curve(tau_ps, t_prop: float, x_c: float, *,
                    alpha_range=(0.25, 30.0), alpha_step: float = 0.25,
                    **model_kwargs) -> list:
    """Per-pulse-length optimum over alpha_in for two-sided cavities.

    ``model_kwargs`` carries the subsystem arguments of
    ``fidelity.steady_model`` (couplings, detunings, ...); sidedness is
    forced to two-sided and the reflected-pulse overlap integral is
    exp(-t_prop^2 / (2 tau_p^2)).
    """
    records = []
    alphas = _axis(*alpha_range, alpha_step)
    for tau_p in tau_ps:
        i_ol = math.exp(-(t_prop**2) / (2.0 * float(tau_p)**2))
        out = steady_model(alphas, x_c, two_sided=True, i_ol=i_ol,
                           target="auto", **model_kwargs)
        (ia,) = _best_index(out["f"])

        def fun(x):
            r = steady_model(x[0], x_c, two_sided=True, i_ol=i_ol,
                             target="auto", **model_kwargs)
            return float(np.where(np.isnan(r["f"]), -np.inf, r["f"]))

        (a_opt,), _ = _refine(fun, (alphas[ia],), (alpha_step,),
                              (alpha_range,))
        rec = _record(a_opt, x_c, "auto",
                      delta_omega=float(np.max(model_kwargs.get("dw_a0", 0.0))),
                      at_boundary=a_opt in alpha_range,
                      extra={"tau_p": float(tau_p), "i_ol": i_ol},
                      two_sided=True, i_ol=i_ol, **model_kwargs)
        records.append(rec)
    return records


__all__ = [
    "StrategyConfig",
    "OptimumRecord",
    "RegionScan",
    "optimize_identical",
    "max_fidelity_vs_coupling",
    "optimize_strategy",
    "cavity_detune_candidates",
    "region_scan",
    "two_sided_curve",
]
