"""Batch rendering of figure manifests to PNG + SVG image pairs.

Accepts either a figure-level manifest (from ``squeezenhse reproduce``,
with a ``panels`` table) or a single run manifest (from ``squeezenhse
run``). Every panel is written as both PNG and SVG with fixed styling
and no timestamps, so re-rendering the same artifacts is byte-identical.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from . import panels as P  # noqa: E402
from .loaders import ArtifactError, load_manifest  # noqa: E402

__all__ = ["render"]

# deterministic SVG output: fixed hash salt, no creation date metadata
matplotlib.rcParams["svg.hashsalt"] = "figkit"
_SVG_META = {"Date": None, "Creator": "figkit"}
_PNG_META = {"Software": "figkit"}


def _save(fig, out_dir: Path, stem: str) -> list:
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for ext, meta in (("png", _PNG_META), ("svg", _SVG_META)):
        path = out_dir / f"{stem}.{ext}"
        fig.savefig(path, dpi=150, metadata=meta)
        written.append(path)
    plt.close(fig)
    return written


def _new_axes(title: str):
    fig, ax = plt.subplots(figsize=(4.0, 3.2), constrained_layout=True)
    ax.set_title(title, fontsize=9)
    return fig, ax


def _count_targets(artifacts: dict, prefix: str) -> int:
    count = 0
    while f"{prefix}_{count}" in artifacts:
        count += 1
    return count


def _render_run(run_dir: Path, manifest: dict, out_dir: Path,
                label: str) -> list:
    artifacts = manifest.get("artifacts", {})
    written = []

    if "spectrum" in artifacts and "perturbed_spectrum" not in artifacts:
        fig, ax = _new_axes(f"{label}: spectrum")
        P.spectrum_scatter(run_dir, ax)
        written += _save(fig, out_dir, f"{label}_spectrum")
    if "perturbed_spectrum" in artifacts:
        fig, ax = _new_axes(f"{label}: impurity sensitivity")
        P.sensitivity_scatter(run_dir, ax)
        written += _save(fig, out_dir, f"{label}_sensitivity")

    for t in range(_count_targets(artifacts, "state_density")):
        fig, ax = _new_axes(f"{label}: state density (target {t})")
        P.density_heatmap(run_dir, ax, t)
        written += _save(fig, out_dir, f"{label}_density_{t}")
    for t in range(_count_targets(artifacts, "layer_density")):
        fig, ax = _new_axes(f"{label}: layer density (target {t})")
        P.layer_logline(run_dir, ax, t)
        written += _save(fig, out_dir, f"{label}_layers_{t}")

    if "greens" in artifacts:
        fig, ax = _new_axes(f"{label}: response radii")
        P.response_bars(run_dir, ax)
        written += _save(fig, out_dir, f"{label}_response")
    for t in range(_count_targets(artifacts, "roots")):
        fig, ax = _new_axes(f"{label}: root moduli (target {t})")
        P.root_trajectory(run_dir, ax, t)
        written += _save(fig, out_dir, f"{label}_roots_{t}")

    if not written:
        raise ArtifactError(
            f"manifest for {label!r} lists no renderable artifacts")
    return written


def render(manifest_path, figure_id: str, out_dir) -> list:
    """Render every panel of a figure manifest; returns written paths."""
    manifest_path = Path(manifest_path)
    out_dir = Path(out_dir)
    top = load_manifest(manifest_path)

    if "panels" in top:
        if top.get("figure") != figure_id:
            raise ArtifactError(
                f"manifest describes figure {top.get('figure')!r}, "
                f"not {figure_id!r}")
        written = []
        for name in sorted(top["panels"]):
            panel = top["panels"][name]
            run_dir = manifest_path.parent / panel["dir"]
            sub = load_manifest(manifest_path.parent / panel["manifest"])
            written += _render_run(run_dir, sub, out_dir, name)
        return written

    return _render_run(manifest_path.parent, top, out_dir, figure_id)
