"""Exact Green's-function and response-matrix machinery.

In the solvable parameter regime (j_x = 0, imaginary j_y and j_xy, real
pairing) the dynamical matrix block-diagonalizes under
U = (tau_0 - i tau_x)/sqrt(2) into N x N blocks m_p = h + i delta and
m_m = h - i delta. Bare propagators are resolvent elements of those
blocks, and the stability of the spectrum against one or two on-site
impurities is governed by the spectral radius of the response matrix
Gbar_0 Vbar_z, which reduces to a 2 x 2 eigenproblem.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Tuple

import numpy as np
import scipy.linalg

from .impurity import ImpuritySpec, impurity_bdg
from .lattice import LatticeSpec, SolvableParams, assemble_bdg

__all__ = [
    "BlockDecomposition",
    "ResponseRadius",
    "SingularEnergyError",
    "block_transform",
    "solvable_blocks",
    "bare_green",
    "bare_green_columns",
    "dense_response_matrix",
    "response_spectral_radius",
    "nullity_count",
]

Coord = Tuple[int, int]


class SingularEnergyError(RuntimeError):
    """Probe energy is too close to the clean spectrum for a stable solve."""


@dataclass(frozen=True)
class BlockDecomposition:
    """Diagonal blocks of U M U^dag and the off-diagonal leakage."""

    m_p: np.ndarray = field(repr=False)
    m_m: np.ndarray = field(repr=False)
    offdiag_residual: float


def block_transform(m_dyn: np.ndarray) -> BlockDecomposition:
    """Apply U = (tau_0 - i tau_x)/sqrt(2) and split into blocks.

    The off-diagonal residual is the max-norm of the off-diagonal blocks
    of U M U^dag; it vanishes (to rounding) in the solvable regime.
    """
    m_dyn = np.asarray(m_dyn, dtype=complex)
    dim = m_dyn.shape[0]
    if dim % 2:
        raise ValueError(f"dynamical matrix dimension {dim} is odd")
    n = dim // 2
    a, b = m_dyn[:n, :n], m_dyn[:n, n:]
    c, d = m_dyn[n:, :n], m_dyn[n:, n:]
    # U M U^dag for U = (tau_0 - i tau_x)/sqrt(2), written blockwise
    m_p = 0.5 * ((a + d) + 1j * (b - c))
    m_m = 0.5 * ((a + d) - 1j * (b - c))
    off_ur = 0.5 * ((b + c) + 1j * (a - d))
    off_ll = 0.5 * ((b + c) - 1j * (a - d))
    residual = float(max(np.max(np.abs(off_ur)), np.max(np.abs(off_ll))))
    return BlockDecomposition(m_p=m_p, m_m=m_m, offdiag_residual=residual)


def solvable_blocks(sp: SolvableParams, lattice: LatticeSpec,
                    residual_tol: float = 1e-10) -> BlockDecomposition:
    """Assemble and block-diagonalize a solvable-regime dynamical matrix."""
    op = assemble_bdg(sp.to_model_params(), lattice)
    dec = block_transform(op.m_dyn)
    scale = max(float(np.max(np.abs(op.m_dyn))), 1.0)
    if dec.offdiag_residual > residual_tol * scale:
        raise ValueError(
            f"block decomposition leaks off-diagonal weight "
            f"{dec.offdiag_residual:.3e}; parameters are not solvable")
    return dec


def _lu_for_energy(block: np.ndarray, energy: complex, cond_cap: float = 1e12):
    a = energy * np.eye(block.shape[0], dtype=complex) - block
    lu, piv = scipy.linalg.lu_factor(a)
    anorm = np.linalg.norm(a, 1)
    rcond, _ = scipy.linalg.lapack.zgecon(lu, anorm)
    if rcond == 0 or 1.0 / rcond > cond_cap:
        raise SingularEnergyError(
            f"E = {energy} is too close to the clean spectrum "
            f"(condition {np.inf if rcond == 0 else 1.0 / rcond:.3e})")
    return lu, piv


def bare_green_columns(block: np.ndarray, energy: complex,
                       cols: Sequence[int]) -> np.ndarray:
    """Columns of (E - block)^-1 by LU solves, one per requested column."""
    lu_piv = _lu_for_energy(block, energy)
    n = block.shape[0]
    rhs = np.zeros((n, len(cols)), dtype=complex)
    for k, j in enumerate(cols):
        rhs[j, k] = 1.0
    return scipy.linalg.lu_solve(lu_piv, rhs)


def bare_green(block: np.ndarray, energy: complex, i: int, j: int) -> complex:
    """Resolvent element <i|(E - block)^-1|j>."""
    return complex(bare_green_columns(block, energy, [j])[i, 0])


def _green_elements(dec: BlockDecomposition, energy: complex,
                    sites: Sequence[int]) -> Tuple[np.ndarray, np.ndarray]:
    """G^p and G^m on the sites x sites grid, as small dense arrays."""
    gp_cols = bare_green_columns(dec.m_p, energy, sites)
    gm_cols = bare_green_columns(dec.m_m, energy, sites)
    idx = np.asarray(sites)
    return gp_cols[idx, :], gm_cols[idx, :]


def _onsite_only(spec: ImpuritySpec) -> Tuple[Tuple[Coord, float], ...]:
    if spec.hopping:
        raise ValueError("response-matrix analysis supports on-site impurities only")
    if not 1 <= spec.n_onsite <= 2:
        raise ValueError(f"need 1 or 2 on-site impurities, got {spec.n_onsite}")
    return spec.onsite


@dataclass(frozen=True)
class ResponseRadius:
    """Spectral radius of the response matrix and its 2x2 reduction."""

    rho: float
    xi_plus: complex
    xi_minus: complex
    bc_matrix: np.ndarray = field(repr=False)


def response_spectral_radius(sp: SolvableParams, lattice: LatticeSpec,
                             spec: ImpuritySpec, energy: complex,
                             margin_min: float = 0.05,
                             check_margin: bool = True) -> ResponseRadius:
    """Spectral radius of Gbar_0 Vbar_z from the 2x2 BC reduction.

    For a single impurity xi_+ = V1^2 G^p(r1,r1) G^m(r1,r1) and xi_- = 0;
    for two impurities the BC matrix combines local and nonlocal
    propagators. rho = max |sqrt(xi_+-)|.
    """
    dec = solvable_blocks(sp, lattice)
    if check_margin:
        evals = np.concatenate([np.linalg.eigvals(dec.m_p),
                                np.linalg.eigvals(dec.m_m)])
        margin = float(np.min(np.abs(evals - energy)))
        if margin < margin_min:
            raise SingularEnergyError(
                f"E = {energy} is within {margin:.3e} of the clean spectrum "
                f"(required margin {margin_min})")

    onsite = _onsite_only(spec)
    sites = [lattice.index_of(r) for r, _ in onsite]
    strengths = [v for _, v in onsite]
    gp, gm = _green_elements(dec, energy, sites)

    bc = np.zeros((2, 2), dtype=complex)
    if len(sites) == 1:
        v1 = strengths[0]
        bc[0, 0] = v1 ** 2 * gp[0, 0] * gm[0, 0]
    else:
        v1, v2 = strengths
        bc[0, 0] = v1 ** 2 * gp[0, 0] * gm[0, 0] + v1 * v2 * gp[0, 1] * gm[1, 0]
        bc[0, 1] = v1 * v2 * gp[0, 0] * gm[0, 1] + v2 ** 2 * gp[0, 1] * gm[1, 1]
        bc[1, 0] = v1 ** 2 * gp[1, 0] * gm[0, 0] + v1 * v2 * gp[1, 1] * gm[1, 0]
        bc[1, 1] = v1 * v2 * gp[1, 0] * gm[0, 1] + v2 ** 2 * gp[1, 1] * gm[1, 1]

    half_tr = 0.5 * (bc[0, 0] + bc[1, 1])
    disc = np.sqrt((bc[0, 0] - bc[1, 1]) ** 2 + 4.0 * bc[0, 1] * bc[1, 0]) / 2.0
    xi_plus = half_tr + disc
    xi_minus = half_tr - disc
    if abs(xi_minus) > abs(xi_plus):   # canonical order: |xi_plus| >= |xi_minus|
        xi_plus, xi_minus = xi_minus, xi_plus
    rho = float(max(abs(np.sqrt(xi_plus)), abs(np.sqrt(xi_minus))))
    return ResponseRadius(rho=rho, xi_plus=complex(xi_plus),
                          xi_minus=complex(xi_minus), bc_matrix=bc)


def dense_response_matrix(sp: SolvableParams, lattice: LatticeSpec,
                          spec: ImpuritySpec, energy: complex) -> np.ndarray:
    """Full 2N x 2N response matrix Gbar_0 Vbar_z (test oracle).

    Gbar_0 is block-diagonal in the transformed basis; Vbar_z is the
    transformed tau_z V with V the BdG impurity matrix.
    """
    dec = solvable_blocks(sp, lattice)
    n = lattice.n_sites
    v_bdg = impurity_bdg(spec, lattice)
    tz_v = v_bdg.copy()
    tz_v[n:] = -tz_v[n:]
    # U A U^dag blockwise for U = (tau_0 - i tau_x)/sqrt(2)
    a, b = tz_v[:n, :n], tz_v[:n, n:]
    c, d = tz_v[n:, :n], tz_v[n:, n:]
    vbar = np.block([
        [0.5 * ((a + d) + 1j * (b - c)), 0.5 * ((b + c) + 1j * (a - d))],
        [0.5 * ((b + c) - 1j * (a - d)), 0.5 * ((a + d) - 1j * (b - c))],
    ])
    eye = np.eye(n, dtype=complex)
    g0 = np.zeros((2 * n, 2 * n), dtype=complex)
    g0[:n, :n] = np.linalg.solve(energy * eye - dec.m_p, eye)
    g0[n:, n:] = np.linalg.solve(energy * eye - dec.m_m, eye)
    return g0 @ vbar


def nullity_count(response: np.ndarray, n_impurities: int | None = None,
                  rel_tol: float = 1e-10) -> int:
    """Count near-zero eigenvalues of a dense response matrix.

    If ``n_impurities`` is given, asserts the expected nullity
    2N - 2 * n_impurities.
    """
    evals = np.linalg.eigvals(response)
    top = float(np.max(np.abs(evals)))
    if top == 0.0:
        zeros = evals.size
    else:
        zeros = int(np.sum(np.abs(evals) < rel_tol * top))
    if n_impurities is not None:
        expected = evals.size - 2 * n_impurities
        if zeros != expected:
            raise AssertionError(
                f"expected {expected} zero eigenvalues, found {zeros}")
    return zeros
