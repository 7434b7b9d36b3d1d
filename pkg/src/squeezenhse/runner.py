"""Experiment driver: turn one configuration into CSV/JSON artifacts.

Every analysis kind writes its own CSVs into the output directory and
contributes a summary to ``manifest.json``. All outputs are
deterministic for a fixed configuration; the manifest additionally
records wall time and the canonical configuration text.
"""

from __future__ import annotations

import time
from pathlib import Path

import numpy as np

from . import __version__
from .config import ExperimentConfig, emit_config
from .greens import response_spectral_radius
from .impurity import ImpuritySpec, impurity_bdg, perturbed_dynamical
from .io import write_csv, write_json
from .lattice import LatticeSpec, assemble_bdg
from .nonbloch import char_roots_grid, mu_extrema
from .spectral import (Spectrum, compare_spectra, default_fit_window,
                       diagonalize, fit_decay, fractal_dimensions,
                       layer_density)

__all__ = ["run_experiment"]

_SPECTRUM_HEADER = ("index", "re_e", "im_e", "fractal_dim", "residual")


def _spectrum_rows(spectrum: Spectrum, fds: np.ndarray):
    order = np.lexsort((spectrum.eigenvalues.imag, spectrum.eigenvalues.real))
    for rank, i in enumerate(order):
        e = spectrum.eigenvalues[i]
        yield (rank, float(e.real), float(e.imag), float(fds[i]),
               float(spectrum.residuals[i]))


def _write_spectrum(path, spectrum: Spectrum, fds: np.ndarray) -> None:
    write_csv(path, _SPECTRUM_HEADER, _spectrum_rows(spectrum, fds))


def _nearest_state(spectrum: Spectrum, energy: complex) -> int:
    return int(np.argmin(np.abs(spectrum.eigenvalues - energy)))


def _run_fd(cfg: ExperimentConfig, lattice: LatticeSpec, spectrum: Spectrum,
            fds: np.ndarray, out: Path, artifacts: dict, results: dict) -> None:
    edges = np.linspace(0.0, 2.0, 41)
    counts, _ = np.histogram(np.clip(fds, 0.0, 2.0), bins=edges)
    write_csv(out / "fd_hist.csv", ("bin_left", "bin_right", "count"),
              [(float(edges[i]), float(edges[i + 1]), int(counts[i]))
               for i in range(counts.size)])
    artifacts["fd_hist"] = "fd_hist.csv"
    results["fd_fraction_1_2"] = float(np.mean((fds > 1.0) & (fds < 2.0)))

    n_x = lattice.x_values.size
    window = default_fit_window(n_x)
    for t, energy in enumerate(cfg.target_energies):
        i = _nearest_state(spectrum, energy)
        psi = spectrum.right_vectors[:, i]
        p = layer_density(psi, lattice)
        write_csv(out / f"layer_density_{t}.csv", ("x", "p"),
                  [(int(x), float(v))
                   for x, v in zip(lattice.x_values, p)])
        artifacts[f"layer_density_{t}"] = f"layer_density_{t}.csv"

        n = lattice.n_sites
        dens = np.abs(psi[:n]) ** 2 + np.abs(psi[n:]) ** 2
        write_csv(out / f"state_density_{t}.csv", ("x", "y", "density"),
                  [(int(x), int(y), float(dens[lattice.index_of((x, y))]))
                   for (x, y) in lattice.coords])
        artifacts[f"state_density_{t}"] = f"state_density_{t}.csv"

        rows = []
        for model in ("exponential", "powerlaw"):
            fit = fit_decay(p, window, model)
            rows.append((model, fit.slope, fit.intercept, fit.r_squared,
                         fit.window[0], fit.window[1]))
        write_csv(out / f"fits_{t}.csv",
                  ("model", "slope", "intercept", "r_squared",
                   "window_lo", "window_hi"), rows)
        artifacts[f"fits_{t}"] = f"fits_{t}.csv"
        e_found = spectrum.eigenvalues[i]
        results[f"target_{t}"] = {
            "requested": [energy.real, energy.imag],
            "found": [float(e_found.real), float(e_found.imag)],
            "fractal_dim": float(fds[i]),
        }


def _run_sensitivity(cfg: ExperimentConfig, lattice: LatticeSpec,
                     clean: Spectrum, m_dyn: np.ndarray, out: Path,
                     artifacts: dict, results: dict) -> None:
    v_bdg = impurity_bdg(cfg.impurities, lattice)
    perturbed = diagonalize(perturbed_dynamical(m_dyn, v_bdg))
    epsilon = cfg.epsilon if cfg.epsilon > 0 else None
    report = compare_spectra(clean, perturbed, epsilon)

    fds_p = fractal_dimensions(perturbed, lattice)
    _write_spectrum(out / "perturbed_spectrum.csv", perturbed, fds_p)
    artifacts["perturbed_spectrum"] = "perturbed_spectrum.csv"
    write_csv(out / "new_states.csv", ("re_e", "im_e"),
              [(z.real, z.imag) for z in report.new_states])
    write_csv(out / "vanished_states.csv", ("re_e", "im_e"),
              [(z.real, z.imag) for z in report.vanished_states])
    artifacts["new_states"] = "new_states.csv"
    artifacts["vanished_states"] = "vanished_states.csv"
    results["sensitivity"] = {
        "epsilon": report.epsilon,
        "n_new": len(report.new_states),
        "n_vanished": len(report.vanished_states),
    }


def _run_greens(cfg: ExperimentConfig, lattice: LatticeSpec, out: Path,
                artifacts: dict, results: dict) -> None:
    sp = cfg.solvable_params()
    if not cfg.target_energies:
        raise ValueError("greens analysis needs analysis.target_energies")
    onsite = cfg.impurities.onsite
    if not 1 <= len(onsite) <= 2 or cfg.impurities.hopping:
        raise ValueError("greens analysis needs 1 or 2 on-site impurities")
    single = ImpuritySpec(onsite=onsite[:1])
    rows = []
    for energy in cfg.target_energies:
        rr1 = response_spectral_radius(sp, lattice, single, energy,
                                       margin_min=cfg.margin)
        if len(onsite) == 2:
            rr2 = response_spectral_radius(sp, lattice, cfg.impurities, energy,
                                           margin_min=cfg.margin)
        else:
            rr2 = rr1
        rows.append((energy.real, energy.imag, rr1.rho, rr2.rho,
                     rr2.xi_plus.real, rr2.xi_plus.imag,
                     rr2.xi_minus.real, rr2.xi_minus.imag))
    write_csv(out / "greens.csv",
              ("e_re", "e_im", "rho_single", "rho_double", "xi_plus_re",
               "xi_plus_im", "xi_minus_re", "xi_minus_im"), rows)
    artifacts["greens"] = "greens.csv"
    results["greens"] = {"n_energies": len(rows),
                         "n_impurities": len(onsite)}


def _run_nonbloch(cfg: ExperimentConfig, out: Path, artifacts: dict,
                  results: dict) -> None:
    sp = cfg.solvable_params()
    if not cfg.target_energies:
        raise ValueError("nonbloch analysis needs analysis.target_energies")
    ky = np.linspace(0.0, 2.0 * np.pi, cfg.ky_points, endpoint=False)
    summary = []
    for t, energy in enumerate(cfg.target_energies):
        roots = {b: char_roots_grid(energy, ky, b, sp)
                 for b in ("plus", "minus")}
        rows = []
        for k in range(ky.size):
            row = [float(ky[k])]
            for b in ("plus", "minus"):
                b1, b2 = roots[b]
                row += [float(np.abs(b1[k])), float(np.abs(b2[k]))]
            for b in ("plus", "minus"):
                b1, b2 = roots[b]
                row += [float(np.log(np.abs(b1[k]))),
                        float(np.log(np.abs(b2[k])))]
            rows.append(tuple(row))
        write_csv(out / f"roots_{t}.csv",
                  ("k_y", "abs_beta1_plus", "abs_beta2_plus",
                   "abs_beta1_minus", "abs_beta2_minus", "mu1_plus",
                   "mu2_plus", "mu1_minus", "mu2_minus"), rows)
        artifacts[f"roots_{t}"] = f"roots_{t}.csv"
        for b in ("plus", "minus"):
            mu = mu_extrema(energy, b, sp, ky)
            summary.append((energy.real, energy.imag, b, mu.mu_max_1,
                            mu.mu_min_2, mu.argmax_ky, mu.argmin_ky))
    write_csv(out / "mu_summary.csv",
              ("e_re", "e_im", "branch", "mu_max_1", "mu_min_2",
               "argmax_ky", "argmin_ky"), summary)
    artifacts["mu_summary"] = "mu_summary.csv"
    results["nonbloch"] = {"n_energies": len(cfg.target_energies)}


def run_experiment(cfg: ExperimentConfig, out_dir=None) -> dict:
    """Run every analysis kind of a configuration and write artifacts.

    Returns the manifest dictionary; ``manifest.json`` is also written
    to the output directory (``out_dir`` overrides ``cfg.out_dir``).
    """
    t0 = time.monotonic()
    out = Path(out_dir if out_dir is not None else cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    artifacts: dict = {}
    results: dict = {}

    lattice = cfg.build_lattice()
    needs_spectrum = any(k in cfg.kinds for k in ("spectrum", "fd",
                                                  "sensitivity"))
    spectrum = fds = m_dyn = None
    if needs_spectrum:
        m_dyn = assemble_bdg(cfg.model, lattice).m_dyn
        spectrum = diagonalize(m_dyn)
        fds = fractal_dimensions(spectrum, lattice)

    if "spectrum" in cfg.kinds:
        _write_spectrum(out / "spectrum.csv", spectrum, fds)
        artifacts["spectrum"] = "spectrum.csv"
    if "fd" in cfg.kinds:
        _run_fd(cfg, lattice, spectrum, fds, out, artifacts, results)
    if "sensitivity" in cfg.kinds:
        _run_sensitivity(cfg, lattice, spectrum, m_dyn, out, artifacts,
                         results)
    if "greens" in cfg.kinds:
        _run_greens(cfg, lattice, out, artifacts, results)
    if "nonbloch" in cfg.kinds:
        _run_nonbloch(cfg, out, artifacts, results)

    manifest = {
        "tool": "squeezenhse",
        "version": __version__,
        "kinds": list(cfg.kinds),
        "lattice": {"shape": cfg.shape, "l_x": cfg.l_x, "l_y": cfg.l_y,
                    "side": cfg.side, "tilt_deg": cfg.tilt_deg,
                    "bc_x": cfg.bc_x, "bc_y": cfg.bc_y,
                    "n_sites": lattice.n_sites},
        "config_toml": emit_config(cfg),
        "artifacts": artifacts,
        "results": results,
        "wall_time_s": time.monotonic() - t0,
    }
    write_json(out / "manifest.json", manifest)
    return manifest
