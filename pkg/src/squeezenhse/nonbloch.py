"""Non-Bloch band calculus on the cylinder (open x, periodic y).

For the solvable parameter regime the two decoupled blocks have Laurent
dispersions E(beta, k_y) = c_plus*beta + c_zero + c_minus/beta in the
non-Bloch variable beta = e^{i k_x + mu_x}. The quadratic characteristic
equation E = E(beta, k_y) yields roots beta1, beta2 (|beta1| <= |beta2|);
their moduli control the generalized Brillouin zone, the cylinder
spectrum, the residue form of the bare propagators, and the asymptotic
spectral radius for two distant impurities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from . import _kernels
from .lattice import SolvableParams

__all__ = [
    "LaurentCoeffs",
    "RootPair",
    "MuExtrema",
    "RootCollisionError",
    "laurent_coeffs",
    "laurent_energy",
    "char_roots",
    "char_roots_grid",
    "gbz_radius",
    "cylinder_spectrum",
    "residue_propagator",
    "mu_extrema",
    "asymptotic_rho",
    "default_ky_grid",
]

_BRANCH_SIGNS = {"plus": 1.0, "minus": -1.0}


class RootCollisionError(RuntimeError):
    """Characteristic roots (nearly) coincide; the GBZ contour is pinched."""


def _branch_sign(branch: str) -> float:
    try:
        return _BRANCH_SIGNS[branch]
    except KeyError:
        raise ValueError(f"branch must be 'plus' or 'minus', got {branch!r}") from None


def default_ky_grid(n: int = 256) -> np.ndarray:
    """Uniform k_y grid on [0, 2*pi), suited to trapezoidal quadrature."""
    return np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)


@dataclass(frozen=True)
class LaurentCoeffs:
    """Laurent coefficients of one block's dispersion at fixed k_y."""

    c_plus: complex
    c_zero: complex
    c_minus: complex


def laurent_coeffs(sp: SolvableParams, branch: str, k_y) -> LaurentCoeffs:
    """Coefficients of E(beta, k_y) = c_plus*beta + c_zero + c_minus/beta.

    Vectorized over ``k_y``: passing an array returns coefficient arrays.
    """
    s = _branch_sign(branch)
    k_y = np.asarray(k_y, dtype=float)
    c_plus = s * 1j * sp.delta_x - 1j * sp.t_xy * np.exp(1j * k_y)
    c_zero = s * 2j * sp.delta0 + 2.0 * sp.t_y * np.sin(k_y)
    c_minus = s * 1j * sp.delta_x + 1j * sp.t_xy * np.exp(-1j * k_y)
    if k_y.ndim == 0:
        return LaurentCoeffs(complex(c_plus), complex(c_zero), complex(c_minus))
    return LaurentCoeffs(c_plus, c_zero, c_minus)


def laurent_energy(sp: SolvableParams, branch: str, beta, k_y):
    """Dispersion E(beta, k_y) of one block."""
    c = laurent_coeffs(sp, branch, k_y)
    return c.c_plus * beta + c.c_zero + c.c_minus / beta


@dataclass(frozen=True)
class RootPair:
    """Characteristic roots at one k_y, ordered |beta1| <= |beta2|."""

    beta1: complex
    beta2: complex
    k_y: float
    branch: str


def char_roots(energy: complex, k_y: float, branch: str,
               sp: SolvableParams) -> RootPair:
    """Roots of c_plus*beta^2 + (c_zero - E)*beta + c_minus = 0.

    Ordered by modulus with ties broken by argument. Degenerate leading
    coefficients (c_plus ~ 0) are rejected rather than solved.
    """
    c = laurent_coeffs(sp, branch, float(k_y))
    scale = max(abs(c.c_plus), abs(c.c_zero - energy), abs(c.c_minus), 1.0)
    if abs(c.c_plus) < 1e-14 * scale:
        raise ValueError(
            f"characteristic polynomial degenerates to linear at k_y={k_y} "
            f"(c_plus={c.c_plus})")
    beta1, beta2 = _kernels.quad_roots_grid(
        np.array([c.c_plus]), np.array([c.c_zero]), np.array([c.c_minus]),
        complex(energy))
    return RootPair(beta1=complex(beta1[0]), beta2=complex(beta2[0]),
                    k_y=float(k_y), branch=branch)


def char_roots_grid(energy: complex, ky_grid: np.ndarray, branch: str,
                    sp: SolvableParams) -> Tuple[np.ndarray, np.ndarray]:
    """Vectorized characteristic roots over a k_y grid."""
    c = laurent_coeffs(sp, branch, np.asarray(ky_grid, dtype=float))
    return _kernels.quad_roots_grid(np.atleast_1d(c.c_plus),
                                    np.atleast_1d(c.c_zero),
                                    np.atleast_1d(c.c_minus), complex(energy))


def gbz_radius(k_y: float, branch: str, sp: SolvableParams) -> float:
    """Radius sqrt(|c_minus / c_plus|) of the GBZ circle at one k_y."""
    c = laurent_coeffs(sp, branch, float(k_y))
    if abs(c.c_plus) < 1e-14 or abs(c.c_minus) < 1e-14:
        raise ValueError(f"degenerate Laurent coefficients at k_y={k_y}: {c}")
    return math.sqrt(abs(c.c_minus / c.c_plus))


def cylinder_spectrum(sp: SolvableParams, ky_grid: np.ndarray | None = None,
                      theta_grid: np.ndarray | None = None) -> np.ndarray:
    """Clean cylinder spectrum sampled on the GBZ: E(r(k_y) e^{i theta}, k_y).

    Both branches are included; the result is a flat complex array.
    """
    if ky_grid is None:
        ky_grid = default_ky_grid()
    if theta_grid is None:
        theta_grid = default_ky_grid()
    ky_grid = np.asarray(ky_grid, dtype=float)
    theta_grid = np.asarray(theta_grid, dtype=float)
    if ky_grid.size == 0 or theta_grid.size == 0:
        raise ValueError("cylinder spectrum needs nonempty grids")
    out = []
    phases = np.exp(1j * theta_grid)
    for branch in ("plus", "minus"):
        c = laurent_coeffs(sp, branch, ky_grid)
        radius = np.sqrt(np.abs(np.atleast_1d(c.c_minus / c.c_plus)))
        beta = radius[:, None] * phases[None, :]
        shape = beta.shape
        cp = np.broadcast_to(np.atleast_1d(c.c_plus)[:, None], shape).copy()
        c0 = np.broadcast_to(np.atleast_1d(c.c_zero)[:, None], shape).copy()
        cm = np.broadcast_to(np.atleast_1d(c.c_minus)[:, None], shape).copy()
        out.append(_kernels.laurent_eval_grid(cp, c0, cm, beta).ravel())
    return np.concatenate(out)


def residue_propagator(energy: complex, r_to, r_from, branch: str,
                       sp: SolvableParams,
                       ky_grid: np.ndarray | None = None,
                       l_x: int | None = None,
                       calibration: complex = 1.0) -> complex:
    """Bare propagator G(r_to, r_from; E) from the GBZ residue integral.

    Uses the exact residue form: the interior root beta1 carries hops in
    the +x direction, the exterior root beta2 in the -x direction, and the
    integrand keeps the 1/(-c_plus (beta1 - beta2)) denominator so the
    result is directly comparable to resolvent elements. The k_y integral
    is trapezoidal on a uniform [0, 2*pi) grid.

    ``l_x`` switches on the finite-chain boundary factor
    (1 - q^min(x)) (1 - q^(l_x+1-max(x))) / (1 - q^(l_x+1)) with
    q = beta1/beta2, the closed form of the open-chain resolvent; the
    default (None) is the thermodynamic limit. ``calibration`` rescales
    the result when a run calibrates against one direct solve.
    """
    if ky_grid is None:
        ky_grid = default_ky_grid()
    ky_grid = np.asarray(ky_grid, dtype=float)
    x_to, x_from = int(r_to[0]), int(r_from[0])
    dx = x_to - x_from
    dy = int(r_to[1]) - int(r_from[1])
    c = laurent_coeffs(sp, branch, ky_grid)
    beta1, beta2 = char_roots_grid(energy, ky_grid, branch, sp)
    gap = np.abs(beta1 - beta2)
    if np.any(gap < 1e-8 * (1.0 + np.abs(beta1))):
        raise RootCollisionError(
            f"characteristic roots collide on the k_y grid at E = {energy}")
    denom = -np.atleast_1d(c.c_plus) * (beta1 - beta2)
    if dx >= 0:
        kernel = beta1 ** dx
    else:
        kernel = beta2 ** dx
    if l_x is not None:
        if not (1 <= min(x_to, x_from) and max(x_to, x_from) <= l_x):
            raise ValueError(f"sites {r_to}, {r_from} outside chain of length {l_x}")
        q = beta1 / beta2
        kernel = kernel * ((1.0 - q ** min(x_to, x_from))
                           * (1.0 - q ** (l_x + 1 - max(x_to, x_from)))
                           / (1.0 - q ** (l_x + 1)))
    phase = np.exp(1j * ky_grid * dy)
    value = np.mean(kernel * phase / denom)
    return complex(calibration * value)


@dataclass(frozen=True)
class MuExtrema:
    """Grid extrema of ln|beta1| and ln|beta2| for one branch and energy."""

    mu_max_1: float
    mu_min_2: float
    argmax_ky: float
    argmin_ky: float
    branch: str


def mu_extrema(energy: complex, branch: str, sp: SolvableParams,
               ky_grid: np.ndarray | None = None) -> MuExtrema:
    """Maximum of ln|beta1| and minimum of ln|beta2| over the k_y grid."""
    if ky_grid is None:
        ky_grid = default_ky_grid()
    ky_grid = np.asarray(ky_grid, dtype=float)
    beta1, beta2 = char_roots_grid(energy, ky_grid, branch, sp)
    mu1 = np.log(np.abs(beta1))
    mu2 = np.log(np.abs(beta2))
    i_max = int(np.argmax(mu1))
    i_min = int(np.argmin(mu2))
    return MuExtrema(mu_max_1=float(mu1[i_max]), mu_min_2=float(mu2[i_min]),
                     argmax_ky=float(ky_grid[i_max]),
                     argmin_ky=float(ky_grid[i_min]), branch=branch)


def asymptotic_rho(v: float, length: int, mu_plus: MuExtrema,
                   mu_minus: MuExtrema, im_sign: float) -> float:
    """Asymptotic two-impurity spectral radius V e^{(mu_max_1-mu_min_2)L/4}.

    The branch is selected by the sign of Im E of the induced eigenvalue:
    positive picks the plus-branch extrema, negative the minus branch.
    """
    if v <= 0:
        raise ValueError(f"impurity strength must be positive, got {v}")
    if length < 1:
        raise ValueError(f"separation must be >= 1, got {length}")
    mu = mu_plus if im_sign > 0 else mu_minus
    return float(v * math.exp((mu.mu_max_1 - mu.mu_min_2) * length / 4.0))
