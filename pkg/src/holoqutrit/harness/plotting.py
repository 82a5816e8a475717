"""Figures for sweep results, written next to the CSV output."""

import math
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

LEVEL_COLORS = ("tab:blue", "tab:red", "tab:green")
LEVEL_LABELS = (r"$p_0$", r"$p_1$", r"$p_2$")

AXIS_LABELS = {
    "abs_a": r"$|a|$",
    "phi01_rad": r"$\phi^{01}$ (rad)",
    "phi02_rad": r"$\phi^{02}$ (rad)",
    "amplitude_rel": r"$\Omega_0^{02}/\Omega_\pi^{02}$",
}


def publication_figure(ncols=1, nrows=1, width=4.0, height=None):
    """Figure with modest fonts suitable for a report page."""
    golden_ratio = (math.sqrt(5) - 1.0) / 2.0
    height = height or width * golden_ratio * nrows
    matplotlib.rcParams.update({"font.size": 9, "axes.labelsize": 9, "legend.fontsize": 8})
    return plt.subplots(nrows, ncols, figsize=(width * ncols, height), squeeze=False)


def _final_panel(ax, result, dashed=None):
    for lvl in range(3):
        ax.plot(result.axis, result.final[:, lvl], "o", ms=3, color=LEVEL_COLORS[lvl],
                label=LEVEL_LABELS[lvl])
    for col, lvl in dashed or ():
        ax.plot(result.axis, col, "--", lw=1, color=LEVEL_COLORS[lvl])
    ax.set_xlabel(AXIS_LABELS.get(result.axis_name, result.axis_name))
    ax.set_ylabel("population")
    ax.set_ylim(-0.03, 1.03)
    ax.legend(loc="best", frameon=False)


def _heatmaps(axes, result):
    """Population versus time and sweep value, one panel per level."""
    lengths = {len(r) for r in result.records}
    if len(lengths) != 1 or len(result.records) < 2:
        return False
    t = result.records[0].times * 1e9
    pops = np.stack([r.populations for r in result.records])
    for lvl, ax in enumerate(axes):
        mesh = ax.pcolormesh(t, result.axis, pops[:, :, lvl], shading="nearest",
                             vmin=0, vmax=1, cmap="viridis")
        ax.set_title(LEVEL_LABELS[lvl])
        ax.set_xlabel("time (ns)")
        ax.set_ylabel(AXIS_LABELS.get(result.axis_name, result.axis_name))
    axes[-1].figure.colorbar(mesh, ax=list(axes), shrink=0.9)
    return True


def _save(fig, path):
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def plot_result(result, out_dir):
    """Render the figures for ``result``; returns the written paths."""
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    name = result.scenario

    fig, axes = publication_figure(ncols=3, width=3.2)
    if _heatmaps(axes[0], result):
        paths.append(_save(fig, os.path.join(out_dir, f"{name}_time_evolution.png")))
    else:
        plt.close(fig)

    fig, axes = publication_figure(width=4.5)
    ax = axes[0, 0]
    x = result.axis
    if name == "fig4":
        _final_panel(ax, result, [(result.extras["p2_closed_form"], 2)])
    elif name == "fig5":
        fit = result.fit
        model = fit["offset"] + fit["amplitude"] * np.sin(x + fit["phase"])
        _final_panel(ax, result, [(model, 0), (1 - model, 2)])
        ax.set_title(f"fitted amplitude {fit['amplitude']:.3f}, phase {fit['phase']:.3f} rad")
    elif name == "fig7":
        fit = result.fit
        model = fit["offset"] + fit["amplitude"] * np.sin(2 * x + fit["phase"])
        _final_panel(ax, result, [(model, 2), (1 - model, 0)])
    elif name == "fig6":
        ex = result.extras
        ax.plot(x, ex["p0_i"], "s", ms=3, color="tab:blue", mfc="none", label=r"$p_0^i$")
        ax.plot(x, ex["p2_i_corrected"], "s", ms=3, color="tab:green", mfc="none",
                label=r"$p_2^i$ (+$p_1$)")
        ax.plot(x, ex["p0_f"], "o", ms=3, color="tab:blue", label=r"$p_0^f$")
        ax.plot(x, ex["p2_f_corrected"], "o", ms=3, color="tab:green", label=r"$p_2^f$ (+$p_1$)")
        ax.plot(x, 1 - ex["p0_i"], "k--", lw=1, label=r"$1-p_0^i$")
        ax.plot(x, 1 - ex["p2_i_corrected"], "k:", lw=1, label=r"$1-p_2^i$")
        ax.set_xlabel(AXIS_LABELS["amplitude_rel"])
        ax.set_ylabel("population")
        ax.legend(frameon=False, ncol=2)
    else:
        _final_panel(ax, result)
    paths.append(_save(fig, os.path.join(out_dir, f"{name}.png")))

    if "ramsey" in result.tables:
        paths.append(_ramsey_figure(result, out_dir))
    return paths


def _ramsey_figure(result, out_dir):
    header, rows = result.tables["ramsey"]
    rows = np.asarray(rows, dtype=float)
    dets = np.unique(rows[:, 0])
    delays = np.unique(rows[:, 1])
    fig, axes = publication_figure(ncols=3, width=3.2)
    for lvl, ax in enumerate(axes[0]):
        grid = rows[:, 2 + lvl].reshape(len(dets), len(delays))
        mesh = ax.pcolormesh(delays, dets, grid, shading="nearest", vmin=0, vmax=1)
        ax.set_title(LEVEL_LABELS[lvl])
        ax.set_xlabel("delay (ns)")
        ax.set_ylabel("two-photon detuning (MHz)")
    fig.colorbar(mesh, ax=list(axes[0]), shrink=0.9)
    return _save(fig, os.path.join(out_dir, f"{result.scenario}_ramsey.png"))
