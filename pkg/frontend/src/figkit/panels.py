"""Panel renderers: scatter, heatmap, logline, trajectory.

Each function takes the directory holding one run's artifacts and a
matplotlib Axes (or Figure) and draws from the documented CSV schemas
only. Styling is fixed so that repeated renders are identical.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .loaders import ArtifactError, read_csv, require_rows

__all__ = ["spectrum_scatter", "sensitivity_scatter", "density_heatmap",
           "layer_logline", "response_bars", "root_trajectory"]

_SPECTRUM_COLS = {"re_e": float, "im_e": float, "fractal_dim": float}


def spectrum_scatter(run_dir: Path, ax) -> None:
    """Complex spectrum colored by fractal dimension."""
    path = Path(run_dir) / "spectrum.csv"
    t = require_rows(read_csv(path, _SPECTRUM_COLS), path)
    sc = ax.scatter(t["re_e"], t["im_e"], c=t["fractal_dim"], s=6,
                    cmap="viridis", vmin=0.0, vmax=2.0, linewidths=0)
    ax.figure.colorbar(sc, ax=ax, label="fractal dimension")
    ax.set_xlabel("Re E")
    ax.set_ylabel("Im E")


def sensitivity_scatter(run_dir: Path, ax) -> None:
    """Clean vs perturbed spectra with new states circled."""
    run_dir = Path(run_dir)
    clean = require_rows(read_csv(run_dir / "spectrum.csv", _SPECTRUM_COLS),
                         run_dir / "spectrum.csv")
    pert = require_rows(
        read_csv(run_dir / "perturbed_spectrum.csv", _SPECTRUM_COLS),
        run_dir / "perturbed_spectrum.csv")
    ax.scatter(clean["re_e"], clean["im_e"], s=10, c="0.6", linewidths=0,
               label="clean")
    ax.scatter(pert["re_e"], pert["im_e"], s=4, c="C0", linewidths=0,
               label="perturbed")
    # new_states.csv may legitimately be empty (stable spectrum)
    new = read_csv(run_dir / "new_states.csv", {"re_e": float, "im_e": float})
    if new["re_e"].size:
        ax.scatter(new["re_e"], new["im_e"], s=60, facecolors="none",
                   edgecolors="C3", label="new states")
    ax.set_xlabel("Re E")
    ax.set_ylabel("Im E")
    ax.legend(loc="upper right", fontsize=7)


def density_heatmap(run_dir: Path, ax, target: int) -> None:
    """|psi|^2 over the lattice for one target eigenstate."""
    path = Path(run_dir) / f"state_density_{target}.csv"
    t = require_rows(read_csv(path, {"x": float, "y": float,
                                     "density": float}), path)
    x = t["x"].astype(int)
    y = t["y"].astype(int)
    grid = np.full((y.max(), x.max()), np.nan)
    grid[y - 1, x - 1] = t["density"]
    im = ax.imshow(grid, origin="lower", cmap="magma", aspect="equal",
                   extent=(0.5, x.max() + 0.5, 0.5, y.max() + 0.5))
    ax.figure.colorbar(im, ax=ax, label=r"$|\psi|^2$")
    ax.set_xlabel("x")
    ax.set_ylabel("y")


def layer_logline(run_dir: Path, ax, target: int) -> None:
    """Layer density on a log axis with the exported fits overlaid."""
    run_dir = Path(run_dir)
    path = run_dir / f"layer_density_{target}.csv"
    t = require_rows(read_csv(path, {"x": float, "p": float}), path)
    ax.semilogy(t["x"], np.clip(t["p"], 1e-300, None), "o", ms=3, c="k",
                label="P(x)")
    fits = read_csv(run_dir / f"fits_{target}.csv",
                    {"model": str, "slope": float, "intercept": float,
                     "r_squared": float, "window_lo": float,
                     "window_hi": float})
    for k in range(fits["model"].size):
        lo, hi = int(fits["window_lo"][k]), int(fits["window_hi"][k])
        xs = t["x"][lo:hi]
        if fits["model"][k] == "exponential":
            ys = np.exp(fits["intercept"][k] + fits["slope"][k] * xs)
        else:
            ys = np.exp(fits["intercept"][k]) * xs ** fits["slope"][k]
        ax.semilogy(xs, ys, lw=1,
                    label=f"{fits['model'][k]} "
                          f"(r$^2$={fits['r_squared'][k]:.3f})")
    ax.set_xlabel("x")
    ax.set_ylabel("P(x)")
    ax.legend(fontsize=7)


def response_bars(run_dir: Path, ax) -> None:
    """Single- vs double-impurity response radii per probe energy."""
    path = Path(run_dir) / "greens.csv"
    t = require_rows(read_csv(path, {"e_re": float, "e_im": float,
                                     "rho_single": float,
                                     "rho_double": float}), path)
    n = t["e_re"].size
    pos = np.arange(n)
    ax.bar(pos - 0.18, t["rho_single"], width=0.36, label="single")
    ax.bar(pos + 0.18, t["rho_double"], width=0.36, label="double")
    ax.set_xticks(pos)
    ax.set_xticklabels([f"{re:g}{im:+g}i"
                        for re, im in zip(t["e_re"], t["e_im"])], fontsize=7)
    ax.set_ylabel(r"response radius $\rho$")
    ax.legend(fontsize=7)


def root_trajectory(run_dir: Path, ax, target: int) -> None:
    """|beta_1|, |beta_2| vs k_y with the mu extrema marked."""
    run_dir = Path(run_dir)
    path = run_dir / f"roots_{target}.csv"
    cols = {"k_y": float, "abs_beta1_plus": float, "abs_beta2_plus": float,
            "abs_beta1_minus": float, "abs_beta2_minus": float}
    t = require_rows(read_csv(path, cols), path)
    for name, style in (("abs_beta1_plus", "C0-"), ("abs_beta2_plus", "C0--"),
                        ("abs_beta1_minus", "C1-"),
                        ("abs_beta2_minus", "C1--")):
        ax.plot(t["k_y"], t[name], style, lw=1, label=name)
    mu = read_csv(run_dir / "mu_summary.csv",
                  {"e_re": float, "e_im": float, "branch": str,
                   "mu_max_1": float, "mu_min_2": float,
                   "argmax_ky": float, "argmin_ky": float})
    # mu_summary holds two rows (plus, minus branch) per target energy,
    # in target order
    pair = [k for k in range(mu["branch"].size) if k // 2 == target]
    for k in pair:
        ax.plot(mu["argmax_ky"][k], np.exp(mu["mu_max_1"][k]), "o", ms=6,
                c="C3")
        ax.plot(mu["argmin_ky"][k], np.exp(mu["mu_min_2"][k]), "o", ms=6,
                c="C2")
    ax.set_xlabel(r"$k_y$")
    ax.set_ylabel(r"$|\beta|$")
    ax.legend(fontsize=6)
