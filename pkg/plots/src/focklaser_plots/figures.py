"""Panel renderers: deterministic PNGs from focklaser CSV outputs.

Every renderer is a pure function of its input files: fixed styles, fixed
dpi, no timestamps, so re-rendering the same inputs reproduces the image
byte for byte.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from matplotlib.figure import Figure

from .reader import FigureSpec, SchemaError

_DPI = 110
_META = {"Software": "focklaser-plots"}

SPECS = {
    "spectrum-vs-g": FigureSpec("spectrum-vs-g", "spectrum",
                                consistent_keys=("lambda", "n_max")),
    "gaps": FigureSpec("gaps", "spectrum", consistent_keys=("lambda",)),
    "gain-loss": FigureSpec("gain-loss", "gain-loss",
                            consistent_keys=("epsilon", "gamma", "kappa",
                                             "delta", "lambda")),
    "s-curves": FigureSpec("s-curves", "sweep",
                           consistent_keys=("epsilon", "gamma", "kappa")),
    "propagation": FigureSpec("propagation", "gain-loss",
                              consistent_keys=("epsilon", "gamma", "kappa",
                                               "delta", "lambda")),
    "distributions": FigureSpec("distributions", "steady-state",
                                consistent_keys=()),
    "statistics-grid": FigureSpec("statistics-grid", "steady-state",
                                  consistent_keys=("epsilon", "gamma",
                                                   "kappa")),
}


def _new_figure(width=6.0, height=4.2):
    return Figure(figsize=(width, height), dpi=_DPI)


def _save(fig: Figure, out: Path) -> Path:
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, dpi=_DPI, metadata=_META)
    return out


def render_spectrum_vs_g(inputs, out):
    """Level energies as a function of coupling (one spectrum file per g)."""
    results = sorted(SPECS["spectrum-vs-g"].load(inputs),
                     key=lambda r: r.config["g"])
    if len(results) < 3:
        raise SchemaError("spectrum-vs-g: need spectrum inputs over a g grid")
    gs = np.array([res.config["g"] for res in results], dtype=float)
    n_levels = 12
    fig = _new_figure()
    ax = fig.add_subplot()
    for sigma, color in ((-1, "steelblue"), (+1, "darkorange")):
        curves = np.empty((n_levels, gs.size))
        for j, res in enumerate(results):
            n = np.array(res.column("n"))
            sig = np.array(res.column("sigma"))
            energy = np.array(res.column("energy"), dtype=float)
            sel = sig == sigma
            curves[:, j] = energy[sel][np.argsort(n[sel])][:n_levels]
        for row in curves:
            ax.plot(gs, row, lw=0.9, color=color, alpha=0.8)
    ax.set_xlabel("coupling g")
    ax.set_ylabel(r"$E_{n\sigma}/\omega$ (offset $g^2\omega$ removed)")
    ax.set_title("dressed spectrum vs coupling")
    return _save(fig, out)


def render_gaps(inputs, out):
    """Successive excitation energies vs n, one curve per coupling."""
    results = SPECS["gaps"].load(inputs)
    fig = _new_figure()
    ax = fig.add_subplot()
    for res in sorted(results, key=lambda r: r.config["g"]):
        n = np.array(res.column("n"))
        sigma = np.array(res.column("sigma"))
        gap = np.array(res.column("gap"), dtype=float)
        sel = (sigma == -1) & np.isfinite(gap)
        ax.plot(n[sel], gap[sel], lw=1.4, label=f"g = {res.config['g']:g}")
    ax.set_xlabel("photon number n")
    ax.set_ylabel(r"excitation energy $(E_{n+1}-E_n)/\omega$")
    ax.set_ylim(0.0, 2.05)
    ax.legend(frameon=False, fontsize=8)
    ax.set_title("dressed-ladder harmonicity")
    return _save(fig, out)


def render_gain_loss(inputs, out):
    """Per-quantum gain curves against the linear loss line."""
    results = SPECS["gain-loss"].load(inputs)
    fig = _new_figure()
    ax = fig.add_subplot()
    for res in sorted(results, key=lambda r: r.config["g"]):
        n = np.array(res.column("n"), dtype=float)
        gain = np.array(res.column("gain"), dtype=float)
        ax.loglog(n, gain * n, lw=1.4, color="seagreen",
                  alpha=0.45 + 0.1 * res.config["g"] / 10.0,
                  label=f"gain, g = {res.config['g']:g}")
    res0 = results[0]
    n = np.array(res0.column("n"), dtype=float)
    loss = np.array(res0.column("loss"), dtype=float)
    ax.loglog(n, loss, lw=1.4, color="firebrick", label="loss")
    ax.set_xlabel("photon number n")
    ax.set_ylabel(r"rate / $\omega$")
    ax.legend(frameon=False, fontsize=8)
    ax.set_title("nonlinear gain vs linear loss")
    return _save(fig, out)


def render_s_curves(inputs, out):
    """Intensity and number fluctuations vs pump, one color per coupling."""
    results = SPECS["s-curves"].load(inputs)
    fig = _new_figure(9.0, 4.0)
    ax_mean = fig.add_subplot(1, 2, 1)
    ax_std = fig.add_subplot(1, 2, 2)
    for res in results:
        rows = {}
        for g, r, mean, std, _fano in res.rows:
            rows.setdefault(g, []).append((r, mean, std))
        for g in sorted(rows):
            arr = np.array(sorted(rows[g]))
            ax_mean.loglog(arr[:, 0], np.maximum(arr[:, 1], 1e-3), lw=1.4,
                           label=f"g = {g:g}")
            ax_std.loglog(arr[:, 0], np.maximum(arr[:, 2], 1e-3), lw=1.4)
    ax_mean.set_xlabel(r"pump $r/\omega$")
    ax_mean.set_ylabel(r"$\langle n\rangle$")
    ax_mean.legend(frameon=False, fontsize=8)
    ax_std.set_xlabel(r"pump $r/\omega$")
    ax_std.set_ylabel(r"$\Delta n$")
    fig.suptitle("laser S-curves and number fluctuations")
    return _save(fig, out)


def render_propagation(inputs, out):
    """Heat map of the probability propagation factor 1/(1+G(n)) vs (g, n)."""
    results = SPECS["propagation"].load(inputs)
    results = sorted(results, key=lambda r: r.config["g"])
    if len(results) < 2:
        raise SchemaError("propagation: need gain-loss inputs for several g")
    gs = [res.config["g"] for res in results]
    n_max = min(len(res.rows) for res in results)
    grid = np.empty((len(results), n_max))
    for i, res in enumerate(results):
        sat = np.array(res.column("G"), dtype=float)[:n_max]
        grid[i] = 1.0 / (1.0 + sat)
    fig = _new_figure()
    ax = fig.add_subplot()
    mesh = ax.pcolormesh(np.arange(1, n_max + 1), gs, grid,
                         cmap="viridis", vmin=0.0, vmax=1.0, shading="auto")
    fig.colorbar(mesh, ax=ax, label=r"$(1+G_n)^{-1}$")
    ax.set_xlabel("photon number n")
    ax.set_ylabel("coupling g")
    ax.set_title("probability propagation factor")
    return _save(fig, out)


def render_distributions(inputs, out):
    """Steady-state photon distributions, one panel row."""
    results = SPECS["distributions"].load(inputs)
    fig = _new_figure(3.2 * len(results), 3.2)
    for i, res in enumerate(results):
        ax = fig.add_subplot(1, len(results), i + 1)
        n = np.array(res.column("n"))
        prob = np.array(res.column("probability"), dtype=float)
        ax.fill_between(n, prob, step="mid", alpha=0.7)
        ax.set_xlabel("n")
        if i == 0:
            ax.set_ylabel("P(n)")
        ax.set_title(f"g = {res.config['g']:g}, r = {res.config['r']:.2g}",
                     fontsize=9)
    return _save(fig, out)


def render_statistics_grid(inputs, out):
    """Distributions over a pump (columns) x coupling (rows) grid."""
    results = SPECS["statistics-grid"].load(inputs)
    gs = sorted({res.config["g"] for res in results})
    rs = sorted({res.config["r"] for res in results})
    fig = _new_figure(2.6 * len(rs), 2.4 * len(gs))
    for i, g in enumerate(gs):
        for j, r in enumerate(rs):
            ax = fig.add_subplot(len(gs), len(rs), i * len(rs) + j + 1)
            match = [res for res in results
                     if res.config["g"] == g and res.config["r"] == r]
            if not match:
                raise SchemaError(
                    f"statistics-grid: missing input for g={g}, r={r}")
            res = match[0]
            n = np.array(res.column("n"))
            prob = np.array(res.column("probability"), dtype=float)
            ax.fill_between(n, prob, step="mid", alpha=0.7)
            ax.set_xticks([])
            ax.set_yticks([])
            if j == 0:
                ax.set_ylabel(f"g = {g:g}", fontsize=8)
            if i == len(gs) - 1:
                ax.set_xlabel(f"r = {r:.1g}", fontsize=8)
    fig.suptitle("photon statistics vs pump and coupling", fontsize=10)
    return _save(fig, out)


RENDERERS = {
    "spectrum-vs-g": render_spectrum_vs_g,
    "gaps": render_gaps,
    "gain-loss": render_gain_loss,
    "s-curves": render_s_curves,
    "propagation": render_propagation,
    "distributions": render_distributions,
    "statistics-grid": render_statistics_grid,
}


def render(figure_name: str, inputs, out) -> Path:
    """Dispatch a panel render; unknown names and schema conflicts raise."""
    try:
        fn = RENDERERS[figure_name]
    except KeyError:
        raise SchemaError(f"unknown figure '{figure_name}' "
                          f"(available: {sorted(RENDERERS)})") from None
    return fn(inputs, out)
