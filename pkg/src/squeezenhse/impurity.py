"""Impurity perturbations and spectral-sensitivity experiments.

On-site potentials enter both the particle and hole blocks of the BdG
Hamiltonian; long-range hopping impurities add one symmetric bond to the
single-particle matrix. The sensitivity experiment diagonalizes the clean
and perturbed dynamical matrices and classifies new/vanished eigenvalues.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .lattice import LatticeSpec, LatticeError, ModelParams, assemble_bdg
from .spectral import SensitivityReport, Spectrum, compare_spectra, diagonalize

__all__ = [
    "ImpuritySpec",
    "impurity_bdg",
    "perturbed_dynamical",
    "run_sensitivity",
]

Coord = Tuple[int, int]


@dataclass(frozen=True)
class ImpuritySpec:
    """On-site potentials and long-range hopping bonds.

    onsite  tuple of ((x, y), V) with real V
    hopping tuple of ((x1, y1), (x2, y2), t_p) with real t_p
    """

    onsite: Tuple[Tuple[Coord, float], ...] = ()
    hopping: Tuple[Tuple[Coord, Coord, float], ...] = ()

    def __post_init__(self):
        onsite = tuple((tuple(r), float(v)) for r, v in self.onsite)
        hopping = tuple((tuple(r1), tuple(r2), float(t))
                        for r1, r2, t in self.hopping)
        sites = [r for r, _ in onsite]
        if len(sites) != len(set(sites)):
            raise ValueError("duplicate on-site impurity positions")
        object.__setattr__(self, "onsite", onsite)
        object.__setattr__(self, "hopping", hopping)

    @property
    def n_onsite(self) -> int:
        return len(self.onsite)


def impurity_bdg(spec: ImpuritySpec, lattice: LatticeSpec) -> np.ndarray:
    """BdG matrix of the impurity potential (2N x 2N).

    The particle block carries V on the impurity diagonal and t_p on the
    long-range bond; the hole block is its transpose. Pairing blocks stay
    zero. The constant -sum(V)/2 from normal ordering is dropped.
    """
    n = lattice.n_sites
    v = np.zeros((n, n), dtype=complex)
    for coord, amp in spec.onsite:
        i = lattice.index_of(coord)
        v[i, i] += amp
    for r1, r2, t_p in spec.hopping:
        i, j = lattice.index_of(r1), lattice.index_of(r2)
        if i == j:
            raise LatticeError(f"hopping impurity endpoints coincide at {r1}")
        v[i, j] += t_p
        v[j, i] += t_p
    out = np.zeros((2 * n, 2 * n), dtype=complex)
    out[:n, :n] = v
    out[n:, n:] = v.T
    return out


def perturbed_dynamical(m_dyn: np.ndarray, v_bdg: np.ndarray) -> np.ndarray:
    """Dynamical matrix of the perturbed system: m_dyn + tau_z @ v_bdg."""
    m_dyn = np.asarray(m_dyn)
    v_bdg = np.asarray(v_bdg)
    if m_dyn.shape != v_bdg.shape:
        raise ValueError(f"shape mismatch: {m_dyn.shape} vs {v_bdg.shape}")
    n = m_dyn.shape[0] // 2
    tz_v = v_bdg.copy()
    tz_v[n:] = -tz_v[n:]
    return m_dyn + tz_v


def run_sensitivity(params: ModelParams, lattice: LatticeSpec,
                    spec: ImpuritySpec, epsilon: float | None = None,
                    ) -> Tuple[SensitivityReport, Spectrum, Spectrum]:
    """Diagonalize the clean and perturbed systems and compare spectra.

    Returns (report, clean_spectrum, perturbed_spectrum).
    """
    op = assemble_bdg(params, lattice)
    clean = diagonalize(op.m_dyn)
    m_pert = perturbed_dynamical(op.m_dyn, impurity_bdg(spec, lattice))
    perturbed = diagonalize(m_pert)
    report = compare_spectra(clean, perturbed, epsilon)
    return report, clean, perturbed
