"""Command-line front end.

Subcommands: estimate, fidelity, sweep, optimize, scan, semiclassical,
two-sided, fig. Outputs are CSV (default) or JSON with all floats printed
at 12 significant digits, so identical inputs give byte-identical files.
Every row echoes the inputs that produced it.

A JSON config file (``--config``) supplies defaults for any long option
(dashes become underscores); explicit flags override it. Validation
failures exit with status 1, numerical failures with status 2, both with
a machine-readable JSON description on stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import optimize as opt
from . import semiclassical as sc
from .cavity import (
    IntegrationError,
    input_pulse,
    steady_reflection,
    transient_cavity_field,
)
from .constants import HBAR_MEV_PS
from .estimates import EstimateInput, n_scatt_estimate, regime_check, snr_estimate
from .fidelity import NoAcceptanceError, steady_model
from .lightholes import rayleigh_correction, stark_correction
from .params import PulseSpec, ResonanceError, SubsystemParams

FLOAT_FMT = "%.12g"

#: default transition frequency (meV); enters only through detunings
DEFAULT_NU = 1302.0


def _fmt(v):
    if isinstance(v, float):
        return FLOAT_FMT % v
    if isinstance(v, (np.floating,)):
        return FLOAT_FMT % float(v)
    if isinstance(v, (np.integer,)):
        return str(int(v))
    if isinstance(v, (np.bool_, bool)):
        return str(int(v))
    return str(v)


def write_rows(rows, path, fmt="csv"):
    """Serialize a list of dicts deterministically to ``path`` ('-': stdout)."""
    rows = list(rows)
    if fmt == "json":
        text = json.dumps(
            [{k: (_fmt(v) if isinstance(v, (float, np.floating)) else v)
              for k, v in r.items()} for r in rows],
            indent=2, sort_keys=True) + "\n"
    else:
        if not rows:
            text = ""
        else:
            cols = list(rows[0].keys())
            lines = [",".join(cols)]
            lines += [",".join(_fmt(r[c]) for c in cols) for r in rows]
            text = "\n".join(lines) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _echo(ns, keys):
    """Input-parameter columns common to every output row of a command."""
    return {k: getattr(ns, k) for k in keys}


def _float_list(text):
    return [float(tok) for tok in str(text).split(",") if tok != ""]


def _range(text):
    """lo:hi[:step] -> (lo, hi, step or None)."""
    parts = [float(tok) for tok in str(text).split(":")]
    if len(parts) == 2:
        return parts[0], parts[1], None
    if len(parts) == 3:
        return parts[0], parts[1], parts[2]
    raise argparse.ArgumentTypeError(f"expected lo:hi[:step], got {text!r}")


def _subsystem(ns, suffix=""):
    def get(name, fallback=None):
        v = getattr(ns, name + suffix, None)
        if v is None and suffix:
            v = getattr(ns, name, fallback)
        if v is None:
            v = fallback
        return v

    return SubsystemParams(
        g=get("g"), kappa=get("kappa"), gamma=get("gamma"),
        nu=get("nu", DEFAULT_NU),
        b_ext=get("b_ext", 0.0), b_nuc=get("b_nuc", 0.0),
        delta_omega_hl=get("hl"),
        delta_omega_cav=get("dcav", 0.0),
        sidedness="two-sided" if getattr(ns, "two_sided", False)
        else "one-sided")


def _model_kwargs(ns, dw):
    """steady_model kwargs for identical subsystems at common detuning dw."""
    return dict(g_a=ns.g, kappa_a=ns.kappa, gamma_a=ns.gamma, hl_a=ns.hl,
                dw_a0=dw, dw_a1=dw, dcav_a=ns.dcav,
                g_b=ns.g, kappa_b=ns.kappa, gamma_b=ns.gamma, hl_b=ns.hl,
                dw_b0=dw, dw_b1=dw, dcav_b=0.0,
                two_sided=ns.two_sided)


# ---------------------------------------------------------------- commands

def cmd_estimate(ns):
    e = EstimateInput(g=ns.g, kappa=ns.kappa, gamma=ns.gamma,
                      delta_omega=ns.dw, alpha_in=ns.alpha)
    ratio, ok = regime_check(e)
    row = _echo(ns, ("g", "kappa", "gamma", "dw", "alpha"))
    row.update(snr=snr_estimate(e), n_scatt=n_scatt_estimate(e),
               coupling_ratio=ratio, regime_ok=ok)
    return [row]


def cmd_fidelity(ns):
    i_ol = 1.0
    if ns.two_sided and ns.tau_p is not None:
        i_ol = math.exp(-(ns.t_prop**2) / (2.0 * ns.tau_p**2))
    out = steady_model(ns.alpha, ns.x_c, i_ol=i_ol, target=ns.target,
                       **_model_kwargs(ns, ns.dw))
    if not np.isfinite(out["f"]):
        if not np.isfinite(out["d11"]):
            raise ResonanceError(
                "laser (near-)resonant with a transition: |dw| below the "
                "1e-6 meV guard (or a light-hole line hit)")
        raise NoAcceptanceError(
            "window x_c accepts essentially no outcomes at this point")
    row = _echo(ns, ("g", "kappa", "gamma", "dw", "alpha", "x_c", "dcav",
                     "two_sided", "target"))
    row.update(hl=("" if ns.hl is None else ns.hl), i_ol=i_ol,
               f=float(out["f"]), p_succ=float(out["p_succ"]),
               herald=str(out["target"]),
               d11=float(out["d11"]), d00=float(out["d00"]),
               d10=float(out["d10"]), d01=float(out["d01"]),
               rayleigh_exponent=float(out["exponent"]),
               overlap=float(out["overlap"]))
    return [row]


def cmd_sweep(ns):
    a_lo, a_hi, a_st = ns.alpha_range
    d_lo, d_hi, d_st = ns.dw_range
    alphas = opt._axis(a_lo, a_hi, a_st or 0.25)
    dws = opt._axis(d_lo, d_hi, d_st or 0.25)
    out = steady_model(alphas[:, None], ns.x_c, target=ns.target,
                       **_model_kwargs(ns, dws[None, :]))
    rows = []
    base = _echo(ns, ("g", "kappa", "gamma", "x_c", "dcav", "two_sided",
                      "target"))
    for i, al in enumerate(alphas):
        for j, dw in enumerate(dws):
            row = dict(base)
            row.update(alpha=float(al), dw=float(dw),
                       hl=("" if ns.hl is None else ns.hl),
                       f=float(out["f"][i, j]),
                       p_succ=float(out["p_succ"][i, j]),
                       herald=str(out["target"][i, j])
                       if np.ndim(out["target"]) else str(out["target"]))
            rows.append(row)
    return rows


def _record_row(rec, base):
    row = dict(base)
    row.update(f=rec.f, p_succ=rec.p_succ, alpha=rec.alpha_in,
               delta_omega=rec.delta_omega, dcav=rec.dcav,
               asym_offset=rec.asym_offset, herald=rec.target,
               feasible=rec.feasible, at_boundary=rec.at_boundary)
    for k in ("d11", "d00", "d10", "d01", "exponent", "overlap",
              "ratio", "tau_p", "i_ol"):
        if k in rec.diagnostics:
            row[k] = rec.diagnostics[k]
    return row


def cmd_optimize(ns):
    base = _echo(ns, ("g", "kappa", "gamma", "x_c", "mode"))
    if ns.mode == "identical":
        a_lo, a_hi, a_st = ns.alpha_range
        d_lo, d_hi, d_st = ns.dw_range
        rec = opt.optimize_identical(
            ns.g, ns.kappa, ns.gamma, ns.x_c,
            alpha_range=(a_lo, a_hi), dw_range=(d_lo, d_hi),
            alpha_step=a_st or 0.25, dw_step=d_st or 0.25, hl=ns.hl)
        return [_record_row(rec, base)]
    if ns.mode == "coupling":
        recs = opt.max_fidelity_vs_coupling(
            ns.ratios, ns.x_c, kappa=ns.kappa, gamma=ns.gamma)
        return [_record_row(r, base) for r in recs]
    # nonidentical strategy
    if ns.g_a is None:
        ns.g_a = ns.g
    if ns.g_b is None:
        ns.g_b = ns.g
    cfg = opt.StrategyConfig(
        strategy=ns.mode, x_c=ns.x_c,
        alpha_range=ns.alpha_range[:2], dw_range=ns.dw_range[:2],
        alpha_step=ns.alpha_range[2] or 0.25,
        dw_step=ns.dw_range[2] or 0.25,
        max_detuning=ns.max_detuning, asym_offset=ns.asym_offset)
    a = _subsystem(ns, "_a")
    b = _subsystem(ns, "_b")
    rec = opt.optimize_strategy(a, b, cfg)
    row = _record_row(rec, base)
    row.update(nu_a=a.nu, nu_b=b.nu, g_a=a.g, g_b=b.g)
    return [row]


def cmd_scan(ns):
    lh = [None if tok in ("none", "") else float(tok)
          for tok in ns.lh.split(",")]
    d_lo, d_hi, _ = ns.dw_range
    a_lo, a_hi, _ = ns.alpha_range
    rs = opt.region_scan(ns.g, ns.kappa, ns.gamma, ns.scan_mode, ns.x_c,
                         lh_values=tuple(lh), dw_range=(d_lo, d_hi),
                         alpha_range=(a_lo, a_hi), n_dw=ns.n_grid,
                         n_alpha=ns.n_grid, threshold=ns.threshold)
    base = _echo(ns, ("g", "kappa", "gamma", "x_c", "scan_mode", "threshold"))
    rows = []
    for r in rs.rows():
        row = dict(base)
        row.update(r)
        rows.append(row)
    return rows


def cmd_semiclassical(ns):
    p = SubsystemParams(g=ns.g, kappa=ns.kappa, gamma=ns.gamma,
                        nu=DEFAULT_NU)
    rows = []
    base = _echo(ns, ("g", "kappa", "gamma", "x_c"))
    for tau_p in ns.tau_ps:
        for dw in ns.dws:
            for alpha in ns.alphas:
                pulse = PulseSpec(alpha_in=alpha, tau_p=tau_p)
                cmp_ = sc.semiclassical_fidelity(p, p, pulse, ns.x_c, dw, dw)
                ana = steady_model(alpha, ns.x_c,
                                   **_model_kwargs_plain(ns, dw))
                damp_ana = math.exp(-sc.analytic_damping_exponent(
                    p, pulse, dw))
                row = dict(base)
                row.update(dw=dw, alpha=alpha, tau_p=tau_p,
                           phase_ratio=cmp_.phase_ratio_a,
                           damping_semi=cmp_.damping_a,
                           damping_analytic=damp_ana,
                           f_semi=cmp_.report.f,
                           f_analytic=float(ana["f"]),
                           p_succ_semi=cmp_.report.p_succ)
                rows.append(row)
    return rows


def _model_kwargs_plain(ns, dw):
    return dict(g_a=ns.g, kappa_a=ns.kappa, gamma_a=ns.gamma,
                dw_a0=dw, dw_a1=dw,
                g_b=ns.g, kappa_b=ns.kappa, gamma_b=ns.gamma,
                dw_b0=dw, dw_b1=dw)


def cmd_two_sided(ns):
    recs = opt.two_sided_curve(
        ns.tau_ps, ns.t_prop, ns.x_c,
        alpha_range=ns.alpha_range[:2],
        alpha_step=ns.alpha_range[2] or 0.25,
        **_model_kwargs_plain(ns, ns.dw))
    base = _echo(ns, ("g", "kappa", "gamma", "dw", "x_c", "t_prop"))
    return [_record_row(r, base) for r in recs]


# -------------------------------------------------------------- fig recipes

def _fig1(ns):
    """Cavity field and output traces versus steady state.

    Identical-dot working point (g=0.15, kappa=0.05, dw=5, alpha=8) for
    pulse lengths 1 ns, 100 ps, and 10 ps.
    """
    rows = []
    for tau_p in (1000.0, 100.0, 10.0):
        pulse = PulseSpec(alpha_in=8.0, tau_p=tau_p)
        tr = transient_cavity_field(pulse, 0.15, 0.05, 5.0, n_samples=2048)
        ss = tr.steady_s()
        for k in range(0, len(tr.t), 4):
            rows.append(dict(
                tau_p=tau_p, t=float(tr.t[k]), f_in=float(tr.f_in[k]),
                s_abs=float(np.abs(tr.s[k])), s_steady_abs=float(np.abs(ss[k])),
                f_out=float(tr.f_out[k]), theta=float(tr.theta[k])))
    return rows


def _fig2(ns):
    """Fidelity and success probability over the identical-dot grid."""
    ns2 = argparse.Namespace(g=0.15, kappa=0.05, gamma=0.002, x_c=0.3,
                             dcav=0.0, hl=None, two_sided=False,
                             target="auto",
                             alpha_range=(0.25, 30.0, 0.25),
                             dw_range=(1.0, 10.0, 0.25))
    return cmd_sweep(ns2)


def _fig3(ns):
    """SNR and scattered photons versus alpha, and max fidelity versus
    coupling ratio (log-spaced)."""
    rows = []
    for alpha in np.linspace(0.25, 30.0, 120):
        e = EstimateInput(g=0.15, kappa=0.05, gamma=0.002,
                          delta_omega=5.0, alpha_in=float(alpha))
        out = steady_model(float(alpha), 0.3,
                           **_model_kwargs_plain(
                               argparse.Namespace(g=0.15, kappa=0.05,
                                                  gamma=0.002), 5.0))
        rows.append(dict(panel="a", alpha=float(alpha), ratio="",
                         snr=snr_estimate(e), n_scatt=n_scatt_estimate(e),
                         f=float(out["f"])))
    for rec in opt.max_fidelity_vs_coupling(np.logspace(-1, 3, 33)):
        rows.append(dict(panel="b", alpha=rec.alpha_in,
                         ratio=rec.diagnostics["ratio"], snr="",
                         n_scatt="", f=rec.f))
    return rows


def _fig4(ns):
    """Fidelity and success probability versus measurement window."""
    rows = []
    kw = dict(g=0.15, kappa=0.05, gamma=0.002)
    for dw in (2.0, 4.0, 6.0, 10.0):
        rec = opt.optimize_identical(0.15, 0.05, 0.002, 0.3,
                                     dw_range=(dw, dw))
        for x_c in np.linspace(0.05, 2.0, 79):
            out = steady_model(rec.alpha_in, float(x_c),
                               **_model_kwargs_plain(
                                   argparse.Namespace(**kw), dw))
            rows.append(dict(dw=dw, alpha=rec.alpha_in, x_c=float(x_c),
                             f=float(out["f"]),
                             p_succ=float(out["p_succ"])))
    return rows


def _fig5(ns):
    """Pulse overlap integral and two-sided maximal fidelity versus pulse
    length (t_prop = 1 ns, x_c = 0.7)."""
    rows = []
    taus = np.logspace(1.5, 4.3, 29)
    for tau in taus:
        i_ol = math.exp(-(1000.0**2) / (2.0 * tau**2))
        rows.append(dict(panel="a", tau_p=float(tau), dw="", i_ol=i_ol,
                         f="", p_succ=""))
    for dw in (2.0, 10.0):
        recs = opt.two_sided_curve(
            taus, 1000.0, 0.7,
            **_model_kwargs_plain(
                argparse.Namespace(g=0.15, kappa=0.05, gamma=0.002), dw))
        for rec in recs:
            rows.append(dict(panel="b", tau_p=rec.diagnostics["tau_p"],
                             dw=dw, i_ol=rec.diagnostics["i_ol"],
                             f=rec.f, p_succ=rec.p_succ))
    return rows


def _strategy_curves(x_c):
    rows = []
    base = dict(g=0.15, kappa=0.05, gamma=0.002)
    for delta_nu in (0.5, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 8.0):
        a = SubsystemParams(nu=DEFAULT_NU - delta_nu / 2.0, **base)
        b = SubsystemParams(nu=DEFAULT_NU + delta_nu / 2.0, **base)
        for strat in ("redshift", "tune-between", "cavity-detune"):
            rec = opt.optimize_strategy(a, b, opt.StrategyConfig(
                strat, x_c=x_c))
            rows.append(dict(delta_nu=delta_nu, strategy=strat, x_c=x_c,
                             f=rec.f, p_succ=rec.p_succ,
                             alpha=rec.alpha_in,
                             delta_omega=rec.delta_omega,
                             dcav=rec.dcav, asym_offset=rec.asym_offset,
                             feasible=rec.feasible))
    return rows


def _fig6(ns):
    """Strategy comparison versus transition-frequency splitting, x_c=0.3."""
    return _strategy_curves(0.3)


def _fig7(ns):
    """Strategy comparison versus transition-frequency splitting, x_c=1."""
    return _strategy_curves(1.0)


def _fig8(ns):
    """Light-hole replacement factors versus signed detuning."""
    rows = []
    for hl in (10.0, 20.0):
        for dw in np.linspace(-8.0, 10.0, 181):
            if abs(dw) < 0.25 or abs(hl + dw) < 0.25:
                continue
            rows.append(dict(hl=hl, dw=float(dw),
                             stark=float(stark_correction(dw, hl + dw)),
                             rayleigh=float(rayleigh_correction(dw, hl + dw))))
    return rows


def _fig9(ns):
    """High-fidelity regions with/without light holes: redshift (x_c=1)
    and tune-between (x_c=0.6) panels."""
    rows = []
    for panel, mode, x_c in (("a", "redshift", 1.0),
                             ("b", "tune-between", 0.6)):
        rs = opt.region_scan(0.15, 0.05, 0.002, mode, x_c,
                             lh_values=(None, 10.0))
        for r in rs.rows():
            row = dict(panel=panel, mode=mode, x_c=x_c)
            row.update(r)
            rows.append(row)
    return rows


def _fig10(ns):
    """Overlap of the high-fidelity regions for splittings 10 and 20 meV,
    tune-between, x_c = 1.3."""
    rs = opt.region_scan(0.15, 0.05, 0.002, "tune-between", 1.3,
                         lh_values=(10.0, 20.0), dw_range=(0.5, 8.0))
    rows = []
    for r in rs.rows():
        row = dict(mode="tune-between", x_c=1.3)
        row.update(r)
        rows.append(row)
    return rows


def _fig11(ns):
    """One optical-Bloch solution: excited population, polarization, field
    phase (tau_p = 100 ps, alpha = 4, dw = 2)."""
    p = SubsystemParams(g=0.15, kappa=0.05, gamma=0.002, nu=DEFAULT_NU)
    pulse = PulseSpec(alpha_in=4.0, tau_p=100.0)
    st = sc.integrate_obe1(p, pulse, 2.0, n_samples=2048)
    out = st.output()
    rows = []
    for k in range(0, len(st.t), 2):
        rows.append(dict(t=float(st.t[k]),
                         rho_ee=float(st.rho_ee[k]),
                         rho_eg_abs=float(np.abs(st.rho_eg[k])),
                         alpha_abs=float(np.abs(st.alpha[k])),
                         theta=float(np.angle(out[k]))))
    return rows


def _fig12(ns):
    """Semiclassical versus analytic comparison on a reduced grid (the
    full 5 x 5 x 2 grid takes several minutes)."""
    ns2 = argparse.Namespace(g=0.15, kappa=0.05, gamma=0.002, x_c=0.3,
                             dws=[2.0, 6.0, 10.0], alphas=[3.0, 9.0, 15.0],
                             tau_ps=[100.0, 1000.0])
    return cmd_semiclassical(ns2)


def _fig13(ns):
    """Output-phase matching curves and the two cavity-detuning roots."""
    rows = []
    for dw_a in (4.0, 6.0, 8.0):
        x_a = 0.15**2 / dw_a
        theta_b = (2.0 * math.atan2(2.0 * 0.15**2 / 10.0, 0.05)
                   + 0.0)
        for dcav in np.linspace(-0.3, 0.3, 121):
            arg1 = 2.0 * math.atan2(2.0 * (dcav + x_a), 0.05)
            arg0 = 2.0 * math.atan2(2.0 * dcav, 0.05) + theta_b
            rows.append(dict(kind="curve", dw_a=dw_a, dcav=float(dcav),
                             arg_gamma1=arg1, arg_gamma0=arg0, root=""))
        for root in opt.cavity_detune_candidates(0.15, 0.05, dw_a,
                                                 0.15, 0.05, 10.0):
            rows.append(dict(kind="root", dw_a=dw_a, dcav=root,
                             arg_gamma1="", arg_gamma0="", root=root))
    return rows


FIG_RECIPES = {
    "fig1": _fig1, "fig2": _fig2, "fig3": _fig3, "fig4": _fig4,
    "fig5": _fig5, "fig6": _fig6, "fig7": _fig7, "fig8": _fig8,
    "fig9": _fig9, "fig10": _fig10, "fig11": _fig11, "fig12": _fig12,
    "fig13": _fig13,
}


def cmd_fig(ns):
    recipe = FIG_RECIPES.get(ns.name)
    if recipe is None:
        raise ValueError(f"unknown recipe {ns.name!r}; "
                         f"choose from {sorted(FIG_RECIPES)}")
    rows = recipe(ns)
    outdir = Path(ns.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    csv_path = outdir / f"{ns.name}.csv"
    write_rows(rows, str(csv_path), "csv")
    if ns.plot:
        from .plotting import render_figure
        png_path = outdir / f"{ns.name}.png"
        render_figure(ns.name, rows, str(png_path))
    return None  # files written; nothing on stdout


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cavityspin",
        description="Fidelity and success probability of measurement-based "
                    "entanglement of two quantum-dot spins in microcavities")
    parser.add_argument("--config", help="JSON file with option defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, x_c=True):
        p.add_argument("--config", help="JSON file with option defaults")
        p.add_argument("-o", "--output", default="-",
                       help="output path ('-' = stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--g", type=float, default=0.15,
                       help="coupling (meV)")
        p.add_argument("--kappa", type=float, default=0.05,
                       help="cavity decay (meV)")
        p.add_argument("--gamma", type=float, default=0.002,
                       help="trion linewidth (meV)")
        if x_c:
            p.add_argument("--x-c", type=float, default=0.3,
                           help="measurement window")

    p = sub.add_parser("estimate", help="feasibility estimates")
    common(p, x_c=False)
    p.add_argument("--dw", type=float, default=5.0)
    p.add_argument("--alpha", type=float, default=8.0)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("fidelity", help="single steady-state point")
    common(p)
    p.add_argument("--dw", type=float, default=5.0)
    p.add_argument("--alpha", type=float, default=8.0)
    p.add_argument("--dcav", type=float, default=0.0)
    p.add_argument("--hl", type=float, default=None,
                   help="light-hole splitting (meV); omit to disable")
    p.add_argument("--two-sided", action="store_true")
    p.add_argument("--tau-p", type=float, default=None)
    p.add_argument("--t-prop", type=float, default=0.0)
    p.add_argument("--target", choices=("auto", "singlet", "triplet"),
                   default="auto")
    p.set_defaults(func=cmd_fidelity)

    p = sub.add_parser("sweep", help="grid over alpha and detuning")
    common(p)
    p.add_argument("--alpha-range", type=_range, default=(0.25, 30.0, 0.25))
    p.add_argument("--dw-range", type=_range, default=(1.0, 10.0, 0.25))
    p.add_argument("--dcav", type=float, default=0.0)
    p.add_argument("--hl", type=float, default=None)
    p.add_argument("--two-sided", action="store_true")
    p.add_argument("--target", choices=("auto", "singlet", "triplet"),
                   default="auto")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("optimize", help="parameter searches")
    common(p)
    p.add_argument("--mode", default="identical",
                   choices=("identical", "coupling", "redshift",
                            "tune-between", "cavity-detune"))
    p.add_argument("--alpha-range", type=_range, default=(0.25, 30.0, 0.25))
    p.add_argument("--dw-range", type=_range, default=(1.0, 10.0, 0.25))
    p.add_argument("--hl", type=float, default=None)
    p.add_argument("--ratios", type=_float_list,
                   default=_float_list("0.1,0.5,1,5,25,225,1000"))
    p.add_argument("--nu-a", type=float, default=DEFAULT_NU)
    p.add_argument("--nu-b", type=float, default=DEFAULT_NU)
    p.add_argument("--g-a", type=float, default=None)
    p.add_argument("--g-b", type=float, default=None)
    p.add_argument("--max-detuning", type=float, default=10.0)
    p.add_argument("--asym-offset", type=float, default=None)
    p.set_defaults(func=cmd_optimize, b_ext=0.0, b_nuc=0.0, dcav=0.0,
                   two_sided=False)

    p = sub.add_parser("scan", help="high-fidelity region masks")
    common(p)
    p.add_argument("--scan-mode", default="redshift",
                   choices=("redshift", "tune-between"))
    p.add_argument("--lh", default="none,10",
                   help="comma list of splittings; 'none' disables")
    p.add_argument("--alpha-range", type=_range, default=(0.25, 30.0, None))
    p.add_argument("--dw-range", type=_range, default=(1.0, 20.0, None))
    p.add_argument("--n-grid", type=int, default=60)
    p.add_argument("--threshold", type=float, default=0.99)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("semiclassical",
                       help="optical-Bloch versus analytic comparison")
    common(p)
    p.add_argument("--dws", type=_float_list, default=_float_list("2,6,10"))
    p.add_argument("--alphas", type=_float_list, default=_float_list("3,9,15"))
    p.add_argument("--tau-ps", type=_float_list,
                   default=_float_list("100,1000"))
    p.set_defaults(func=cmd_semiclassical)

    p = sub.add_parser("two-sided", help="fidelity versus pulse length")
    common(p)
    p.add_argument("--dw", type=float, default=5.0)
    p.add_argument("--tau-ps", type=_float_list,
                   default=_float_list("50,100,200,500,1000,2000,5000"))
    p.add_argument("--t-prop", type=float, default=1000.0)
    p.add_argument("--alpha-range", type=_range, default=(0.25, 30.0, 0.25))
    p.set_defaults(func=cmd_two_sided)

    p = sub.add_parser("fig", help="figure-reproduction recipes")
    p.add_argument("--config", help="JSON file with option defaults")
    p.add_argument("name", help="fig1 ... fig13")
    p.add_argument("--outdir", default=".")
    p.add_argument("--plot", action="store_true",
                   help="also render a PNG next to the CSV")
    p.set_defaults(func=cmd_fig)

    return parser


def _apply_config(parser, argv):
    """Peel off --config and install its values as parser defaults."""
    probe = argparse.ArgumentParser(add_help=False)
    probe.add_argument("--config")
    ns, _ = probe.parse_known_args(argv)
    if ns.config:
        data = json.loads(Path(ns.config).read_text())
        if not isinstance(data, dict):
            raise ValueError("config file must hold a JSON object")
        for action in parser._subparsers._group_actions:
            for subparser in action.choices.values():
                known = {a.dest for a in subparser._actions}
                subparser.set_defaults(
                    **{k: v for k, v in data.items() if k in known})


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        ns = parser.parse_args(argv)
        rows = ns.func(ns)
    except (ValueError, ResonanceError, argparse.ArgumentTypeError,
            FileNotFoundError, json.JSONDecodeError) as exc:
        json.dump({"error": {"kind": "validation", "message": str(exc)}},
                  sys.stderr)
        sys.stderr.write("\n")
        return 1
    except (IntegrationError, ArithmeticError) as exc:
        json.dump({"error": {"kind": "numerical", "message": str(exc)}},
                  sys.stderr)
        sys.stderr.write("\n")
        return 2
    if rows is not None:
        try:
            write_rows(rows, getattr(ns, "output", "-"),
                       getattr(ns, "format", "csv"))
        except BrokenPipeError:
            # downstream reader (head, less) closed the pipe early
            sys.stderr.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
