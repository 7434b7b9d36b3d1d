"""Diagonalization and localization diagnostics for dynamical matrices.

The dynamical matrix tau_z H_BdG is non-Hermitian, so eigenvalues are
complex and come in (E, -E*) pairs. Localization of eigenstates is
quantified through the participation-based fractal dimension and the
layer-resolved density along x.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
import scipy.linalg
from scipy.optimize import linear_sum_assignment
from scipy.spatial.distance import cdist

from . import _kernels
from .lattice import LatticeSpec

__all__ = [
    "Spectrum",
    "FitResult",
    "SensitivityReport",
    "EigensolverError",
    "diagonalize",
    "fractal_dimension",
    "fractal_dimensions",
    "layer_density",
    "default_fit_window",
    "fit_decay",
    "compare_spectra",
    "match_distance",
    "spectral_diameter",
]


class EigensolverError(RuntimeError):
    """Eigendecomposition failed or produced out-of-tolerance residuals."""


@dataclass(frozen=True)
class Spectrum:
    """Right eigendecomposition of a dynamical matrix.

    Columns of ``right_vectors`` are Euclidean-normalized over both Nambu
    components; ``residuals[i]`` is ||M psi_i - E_i psi_i||_2.
    """

    eigenvalues: np.ndarray
    right_vectors: np.ndarray
    residuals: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.size


def diagonalize(m_dyn: np.ndarray, max_dim: int = 6400,
                tol_eig: float | None = None) -> Spectrum:
    """Full right eigendecomposition of a dense complex matrix.

    ``tol_eig`` defaults to 1e-8 * dim; residuals above
    tol_eig * ||M||_max raise :class:`EigensolverError` with condition
    diagnostics.
    """
    m_dyn = np.asarray(m_dyn, dtype=complex)
    if m_dyn.ndim != 2 or m_dyn.shape[0] != m_dyn.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m_dyn.shape}")
    dim = m_dyn.shape[0]
    if dim > max_dim:
        raise ValueError(f"matrix dimension {dim} exceeds cap {max_dim}")
    if tol_eig is None:
        tol_eig = 1e-8 * dim

    try:
        evals, vecs = scipy.linalg.eig(m_dyn)
    except scipy.linalg.LinAlgError as exc:
        raise EigensolverError(f"eigensolver failed on {dim}x{dim} matrix: {exc}") from exc

    norms = np.linalg.norm(vecs, axis=0)
    vecs = vecs / norms
    residuals = np.linalg.norm(m_dyn @ vecs - vecs * evals, axis=0)
    scale = np.max(np.abs(m_dyn)) or 1.0
    worst = float(residuals.max() / scale)
    if worst > tol_eig:
        cond = np.linalg.cond(vecs)
        raise EigensolverError(
            f"eigenpair residual {worst:.3e} exceeds {tol_eig:.3e} "
            f"(eigenvector condition number {cond:.3e})")
    return Spectrum(eigenvalues=evals, right_vectors=vecs, residuals=residuals)


def _participation(psi: np.ndarray) -> float:
    norm2 = float(np.sum(np.abs(psi) ** 2))
    if norm2 == 0.0:
        raise ValueError("zero eigenvector has no fractal dimension")
    return float(np.sum(np.abs(psi) ** 4)) / norm2 ** 2


def fractal_dimension(psi: np.ndarray, lattice: LatticeSpec) -> float:
    """Participation-based fractal dimension of one Nambu eigenvector.

    D = -ln(sum |psi|^4) / ln(sqrt(N)) with N the number of active sites;
    0 means corner-localized, 1 edge-localized, 2 fully extended.
    """
    n = lattice.n_sites
    if n <= 1:
        raise ValueError("fractal dimension needs more than one site")
    return -math.log(_participation(np.asarray(psi))) / math.log(math.sqrt(n))


def fractal_dimensions(spectrum: Spectrum, lattice: LatticeSpec) -> np.ndarray:
    """Fractal dimension of every eigenstate in a spectrum."""
    n = lattice.n_sites
    if n <= 1:
        raise ValueError("fractal dimension needs more than one site")
    sums = _kernels.participation_sums(spectrum.right_vectors)
    return -np.log(sums) / math.log(math.sqrt(n))


def layer_density(psi: np.ndarray, lattice: LatticeSpec) -> np.ndarray:
    """Eigenstate weight P(x) summed over y (and both Nambu components).

    Indexed by ``lattice.x_values``; sums to the squared norm of psi.
    """
    psi = np.asarray(psi, dtype=complex).reshape(-1, 1)
    out = _kernels.layer_density_batch(psi, lattice.x_layer_index,
                                       lattice.x_values.size)
    return out[:, 0]


@dataclass(frozen=True)
class FitResult:
    """Log-space least-squares fit of a layer-density tail."""

    model: str            # "exponential" or "powerlaw"
    slope: float
    intercept: float
    r_squared: float
    window: Tuple[int, int]


def default_fit_window(n_x: int) -> Tuple[int, int]:
    """Intermediate window [n/4, 3n/4) avoiding boundary saturation."""
    return (max(n_x // 4, 0), max(3 * n_x // 4, 4))


def fit_decay(p: np.ndarray, window: Tuple[int, int] | None = None,
              model: str = "exponential") -> FitResult:
    """Fit ln P against x (exponential) or ln x (power law) on a window.

    ``window`` is a half-open index range into ``p``; x coordinates are
    1-based. Densities are clipped at 1e-300 before taking logs.
    """
    model = model.lower()
    if model not in ("exponential", "powerlaw"):
        raise ValueError(f"unknown decay model {model!r}")
    p = np.asarray(p, dtype=float)
    if window is None:
        window = default_fit_window(p.size)
    lo, hi = int(window[0]), int(window[1])
    if hi - lo < 4:
        raise ValueError(f"fit window {window} has fewer than 4 points")
    x = np.arange(1, p.size + 1, dtype=float)[lo:hi]
    y = np.log(np.clip(p[lo:hi], 1e-300, None))
    if not np.all(np.isfinite(y)):
        raise ValueError("layer density is not finite on the fit window")
    t = x if model == "exponential" else np.log(x)
    slope, intercept = np.polyfit(t, y, 1)
    resid = y - (slope * t + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid ** 2)) / ss_tot if ss_tot > 0 else 1.0
    return FitResult(model=model, slope=float(slope), intercept=float(intercept),
                     r_squared=r2, window=(lo, hi))


def _as_points(eigenvalues: np.ndarray) -> np.ndarray:
    e = np.asarray(eigenvalues)
    return np.column_stack([e.real, e.imag])


def spectral_diameter(eigenvalues: np.ndarray) -> float:
    """Largest pairwise distance within a set of complex eigenvalues."""
    pts = _as_points(eigenvalues)
    return float(cdist(pts, pts).max())


def match_distance(a: np.ndarray, b: np.ndarray, exact: bool = False) -> float:
    """Max distance of a one-to-one matching between two eigenvalue sets.

    Greedy nearest-neighbor by default; ``exact=True`` solves the
    bottleneck-friendly linear assignment on the distance matrix.
    """
    a, b = np.asarray(a), np.asarray(b)
    if a.size != b.size:
        raise ValueError(f"sets differ in size: {a.size} vs {b.size}")
    dist = cdist(_as_points(a), _as_points(b))
    if exact:
        rows, cols = linear_sum_assignment(dist)
        return float(dist[rows, cols].max())
    order = np.argsort(np.abs(a))[::-1]
    free = np.ones(b.size, dtype=bool)
    worst = 0.0
    for i in order:
        row = np.where(free, dist[i], np.inf)
        j = int(np.argmin(row))
        worst = max(worst, float(row[j]))
        free[j] = False
    return worst


@dataclass(frozen=True)
class SensitivityReport:
    """Eigenvalues appearing or disappearing under a perturbation."""

    new_states: Tuple[complex, ...]
    vanished_states: Tuple[complex, ...]
    epsilon: float


def compare_spectra(clean: Spectrum, perturbed: Spectrum,
                    epsilon: float | None = None) -> SensitivityReport:
    """Classify perturbed-vs-clean eigenvalues by nearest-set distance.

    ``epsilon`` defaults to 0.02 times the clean spectral diameter. A
    perturbed eigenvalue farther than epsilon from every clean eigenvalue
    is new; a clean eigenvalue farther than epsilon from every perturbed
    one has vanished.
    """
    if clean.dim == 0 or perturbed.dim == 0:
        raise ValueError("cannot compare empty spectra")
    if epsilon is None:
        epsilon = 0.02 * spectral_diameter(clean.eigenvalues)
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    dist = cdist(_as_points(perturbed.eigenvalues), _as_points(clean.eigenvalues))
    new = perturbed.eigenvalues[dist.min(axis=1) > epsilon]
    vanished = clean.eigenvalues[dist.min(axis=0) > epsilon]
    return SensitivityReport(
        new_states=tuple(complex(z) for z in new),
        vanished_states=tuple(complex(z) for z in vanished),
        epsilon=float(epsilon),
    )
