"""Optional matplotlib rendering for the figure recipes.

The CSV written by ``cavityspin fig`` is always the primary artifact; these
renderers turn the same row dicts into a quick-look PNG when ``--plot`` is
given. Imported lazily so matplotlib is only required when plotting.
"""

from __future__ import annotations

from collections import defaultdict

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def _series(rows, key_cols, x_col, y_col):
    """Group rows by key_cols and return {key: (x array, y array)}."""
    groups = defaultdict(lambda: ([], []))
    for r in rows:
        y = r.get(y_col, "")
        if y == "" or y is None:
            continue
        key = tuple(r[k] for k in key_cols)
        groups[key][0].append(float(r[x_col]))
        groups[key][1].append(float(y))
    return {k: (np.asarray(x), np.asarray(y)) for k, (x, y) in groups.items()}


def _line_panel(ax, rows, key_cols, x_col, y_col, *, logx=False,
                label_fmt=None, **kw):
    for key, (x, y) in sorted(_series(rows, key_cols, x_col, y_col).items()):
        label = (label_fmt(key) if label_fmt
                 else ", ".join(f"{c}={v}" for c, v in zip(key_cols, key)))
        ax.plot(x, y, label=label, **kw)
    if logx:
        ax.set_xscale("log")
    ax.set_xlabel(x_col)
    ax.set_ylabel(y_col)
    if key_cols:
        ax.legend(fontsize=7)


def _grid_panel(ax, rows, x_col, y_col, z_col, title=""):
    xs = sorted({float(r[x_col]) for r in rows})
    ys = sorted({float(r[y_col]) for r in rows})
    zi = {(float(r[x_col]), float(r[y_col])): float(r[z_col])
          for r in rows if r.get(z_col, "") != ""}
    z = np.full((len(ys), len(xs)), np.nan)
    for j, x in enumerate(xs):
        for i, y in enumerate(ys):
            if (x, y) in zi:
                z[i, j] = zi[(x, y)]
    im = ax.pcolormesh(xs, ys, z, shading="nearest")
    ax.figure.colorbar(im, ax=ax, shrink=0.85)
    ax.set_xlabel(x_col)
    ax.set_ylabel(y_col)
    ax.set_title(title or z_col, fontsize=9)


def _plot_traces(rows, path, x_col, y_cols, key_cols=()):
    fig, axes = plt.subplots(len(y_cols), 1, figsize=(6, 2.2 * len(y_cols)),
                             sharex=True)
    axes = np.atleast_1d(axes)
    for ax, y_col in zip(axes, y_cols):
        _line_panel(ax, rows, key_cols, x_col, y_col)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _render_fig1(rows, path):
    _plot_traces(rows, path, "t", ("f_in", "s_abs", "f_out", "theta"),
                 key_cols=("tau_p",))


def _render_fig2(rows, path):
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.5))
    _grid_panel(axes[0], rows, "dw", "alpha", "f")
    _grid_panel(axes[1], rows, "dw", "alpha", "p_succ")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _render_fig3(rows, path):
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.5))
    a_rows = [r for r in rows if r["panel"] == "a"]
    b_rows = [r for r in rows if r["panel"] == "b"]
    _line_panel(axes[0], a_rows, (), "alpha", "snr")
    ax2 = axes[0].twinx()
    _line_panel(ax2, a_rows, (), "alpha", "n_scatt", color="C1")
    _line_panel(axes[1], b_rows, (), "ratio", "f", logx=True, marker="o")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _render_fig4(rows, path):
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.5))
    _line_panel(axes[0], rows, ("dw",), "x_c", "f")
    _line_panel(axes[1], rows, ("dw",), "x_c", "p_succ")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _render_fig5(rows, path):
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.5))
    _line_panel(axes[0], [r for r in rows if r["panel"] == "a"],
                (), "tau_p", "i_ol", logx=True)
    _line_panel(axes[1], [r for r in rows if r["panel"] == "b"],
                ("dw",), "tau_p", "f", logx=True, marker="o")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _render_strategies(rows, path):
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.5))
    _line_panel(axes[0], rows, ("strategy",), "delta_nu", "f", marker="o")
    _line_panel(axes[1], rows, ("strategy",), "delta_nu", "p_succ",
                marker="o")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _render_fig8(rows, path):
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.5))
    _line_panel(axes[0], rows, ("hl",), "dw", "stark")
    _line_panel(axes[1], rows, ("hl",), "dw", "rayleigh")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _mask_cols(rows):
    return sorted(c for c in rows[0] if c.startswith("mask_"))


def _render_regions(rows, path, panel_col=None):
    panels = sorted({r[panel_col] for r in rows}) if panel_col else [None]
    cols = _mask_cols(rows)
    fig, axes = plt.subplots(len(panels), len(cols),
                             figsize=(3.2 * len(cols), 3.0 * len(panels)),
                             squeeze=False)
    for i, panel in enumerate(panels):
        sub = [r for r in rows if panel is None or r[panel_col] == panel]
        for j, col in enumerate(cols):
            title = col if panel is None else f"{panel}: {col}"
            _grid_panel(axes[i][j], sub, "delta_omega", "alpha_in", col,
                        title=title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _render_fig11(rows, path):
    _plot_traces(rows, path, "t",
                 ("rho_ee", "rho_eg_abs", "alpha_abs", "theta"))


def _render_fig12(rows, path):
    fig, axes = plt.subplots(1, 3, figsize=(12, 3.5))
    _line_panel(axes[0], rows, ("dw", "tau_p"), "alpha", "phase_ratio",
                marker="o")
    _line_panel(axes[1], rows, ("dw", "tau_p"), "alpha", "f_semi",
                marker="o")
    _line_panel(axes[1], rows, ("dw", "tau_p"), "alpha", "f_analytic",
                linestyle="--")
    _line_panel(axes[2], rows, ("dw", "tau_p"), "alpha", "damping_semi",
                marker="o")
    _line_panel(axes[2], rows, ("dw", "tau_p"), "alpha", "damping_analytic",
                linestyle="--")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _render_fig13(rows, path):
    fig, ax = plt.subplots(figsize=(6, 4))
    curves = [r for r in rows if r["kind"] == "curve"]
    _line_panel(ax, curves, ("dw_a",), "dcav", "arg_gamma1")
    _line_panel(ax, curves, ("dw_a",), "dcav", "arg_gamma0", linestyle="--")
    for r in rows:
        if r["kind"] == "root":
            ax.axvline(float(r["dcav"]), color="k", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


_RENDERERS = {
    "fig1": _render_fig1,
    "fig2": _render_fig2,
    "fig3": _render_fig3,
    "fig4": _render_fig4,
    "fig5": _render_fig5,
    "fig6": _render_strategies,
    "fig7": _render_strategies,
    "fig8": _render_fig8,
    "fig9": lambda rows, path: _render_regions(rows, path, "panel"),
    "fig10": _render_regions,
    "fig11": _render_fig11,
    "fig12": _render_fig12,
    "fig13": _render_fig13,
}


def render_figure(name: str, rows, path: str) -> None:
    """Render the PNG companion of a figure recipe's rows."""
    if not rows:
        raise ValueError(f"no data to plot for {name!r}")
    _RENDERERS[name](rows, path)


__all__ = ["render_figure"]
