"""Lattice geometry and BdG operator assembly for the squeezed-boson model.

The model lives on a 2D lattice with nearest-neighbor hopping along x and
y, a diagonal (x+1, y+1) hop, on-site two-mode squeezing and off-site
squeezing along x. Real-space operators are assembled in the Nambu
ordering (all particle modes, then all hole modes), with sites enumerated
row-major (x fastest, 1-based coordinates).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np

__all__ = [
    "ModelParams",
    "SolvableParams",
    "LatticeSpec",
    "BdGOperator",
    "BlochOperator",
    "LatticeError",
    "build_lattice",
    "assemble_bdg",
    "bloch_operator",
    "ph_symmetry_residual",
    "tau_x",
    "tau_z",
]

Coord = Tuple[int, int]


class LatticeError(ValueError):
    """Invalid lattice geometry or boundary-condition request."""


def _require_finite(name: str, value: complex) -> complex:
    value = complex(value)
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise ValueError(f"{name} must be finite, got {value}")
    return value


@dataclass(frozen=True)
class ModelParams:
    """Couplings of the quadratic boson Hamiltonian (hbar = 1).

    omega0  on-site energy (defaults to 0, the rotating frame)
    j_x     nearest-neighbor hopping along x
    j_y     nearest-neighbor hopping along y
    j_xy    diagonal hopping to (x+1, y+1)
    delta0  on-site squeezing amplitude
    delta_x off-site squeezing along x
    """

    omega0: complex = 0.0
    j_x: complex = 0.0
    j_y: complex = 0.0
    j_xy: complex = 0.0
    delta0: complex = 0.0
    delta_x: complex = 0.0

    def __post_init__(self):
        for name in ("omega0", "j_x", "j_y", "j_xy", "delta0", "delta_x"):
            object.__setattr__(self, name, _require_finite(name, getattr(self, name)))


@dataclass(frozen=True)
class SolvableParams:
    """Parameter slice where the dynamical matrix block-diagonalizes.

    Corresponds to j_x = 0, j_y = i*t_y, j_xy = i*t_xy with real pairing
    amplitudes; all four fields are real.
    """

    t_y: float
    t_xy: float
    delta0: float
    delta_x: float

    def __post_init__(self):
        for name in ("t_y", "t_xy", "delta0", "delta_x"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v}")
            object.__setattr__(self, name, v)

    def to_model_params(self) -> ModelParams:
        return ModelParams(
            omega0=0.0,
            j_x=0.0,
            j_y=1j * self.t_y,
            j_xy=1j * self.t_xy,
            delta0=self.delta0,
            delta_x=self.delta_x,
        )


@dataclass(frozen=True)
class LatticeSpec:
    """Site enumeration and bond lists for a finite lattice.

    ``coords`` lists the active sites (1-based) in row-major order, which
    fixes the linear index of each mode. Bond lists hold (i_from, i_to)
    linear-index pairs where the hop enters h[i_to, i_from].
    """

    shape: str                       # "rectangle" or "oblique"
    l_x: int
    l_y: int
    bc_x: str                        # "open" or "periodic"
    bc_y: str
    coords: Tuple[Coord, ...]
    site_index: Dict[Coord, int] = field(repr=False)
    x_bonds: Tuple[Tuple[int, int], ...] = field(repr=False)
    y_bonds: Tuple[Tuple[int, int], ...] = field(repr=False)
    diag_bonds: Tuple[Tuple[int, int], ...] = field(repr=False)
    tilt_deg: float = 0.0

    @property
    def n_sites(self) -> int:
        return len(self.coords)

    def index_of(self, coord: Coord) -> int:
        try:
            return self.site_index[tuple(coord)]
        except KeyError:
            raise LatticeError(f"site {coord} not on the lattice") from None

    @property
    def x_values(self) -> np.ndarray:
        """Sorted distinct x coordinates of the active sites."""
        return np.unique([c[0] for c in self.coords])

    @property
    def x_layer_index(self) -> np.ndarray:
        """Per-site index into ``x_values`` (for layer densities)."""
        xs = self.x_values
        lookup = {int(x): i for i, x in enumerate(xs)}
        return np.array([lookup[c[0]] for c in self.coords], dtype=np.int64)


def _check_bc(bc: str) -> str:
    bc = bc.lower()
    if bc not in ("open", "periodic"):
        raise LatticeError(f"boundary condition must be 'open' or 'periodic', got {bc!r}")
    return bc


def _oblique_mask(side: float, tilt_deg: float) -> List[Coord]:
    """Integer grid points inside a square of side W rotated by tilt_deg.

    The square is centered so its integer points are roughly symmetric;
    membership uses a small tolerance on the boundary.
    """
    if side <= 0:
        raise LatticeError(f"oblique side must be positive, got {side}")
    theta = math.radians(tilt_deg)
    c, s = math.cos(theta), math.sin(theta)
    half = side / 2.0
    # center the rotated square on the midpoint of a side x side grid
    cx = cy = (side + 1.0) / 2.0
    reach = int(math.ceil(half * (abs(c) + abs(s)))) + 2
    tol = 1e-9
    pts: List[Coord] = []
    for y in range(int(cy) - reach, int(cy) + reach + 1):
        for x in range(int(cx) - reach, int(cx) + reach + 1):
            dx, dy = x - cx, y - cy
            u = c * dx + s * dy
            v = -s * dx + c * dy
            if abs(u) <= half + tol and abs(v) <= half + tol:
                pts.append((x, y))
    return pts


def build_lattice(shape, bc_x: str = "open", bc_y: str = "open") -> LatticeSpec:
    """Construct the site enumeration and bond lists for a lattice.

    ``shape`` is either ``("rectangle", L_x, L_y)`` or
    ``("oblique", side, tilt_deg)``. Oblique masks require open boundaries
    on both axes.
    """
    bc_x, bc_y = _check_bc(bc_x), _check_bc(bc_y)
    kind = shape[0].lower()
    if kind == "rectangle":
        l_x, l_y = int(shape[1]), int(shape[2])
        if l_x < 1 or l_y < 1:
            raise LatticeError(f"rectangle extents must be >= 1, got {l_x}x{l_y}")
        coords = [(x, y) for y in range(1, l_y + 1) for x in range(1, l_x + 1)]
        tilt = 0.0
    elif kind == "oblique":
        if bc_x != "open" or bc_y != "open":
            raise LatticeError("oblique masks support open boundaries only")
        side, tilt = float(shape[1]), float(shape[2])
        coords = _oblique_mask(side, tilt)
        if not coords:
            raise LatticeError("oblique mask contains no lattice sites")
        coords.sort(key=lambda c: (c[1], c[0]))
        xs = [c[0] for c in coords]
        ys = [c[1] for c in coords]
        l_x = max(xs) - min(xs) + 1
        l_y = max(ys) - min(ys) + 1
    else:
        raise LatticeError(f"unknown lattice shape {shape[0]!r}")

    index = {c: i for i, c in enumerate(coords)}
    active = set(coords)

    def neighbor(x: int, y: int, dx: int, dy: int) -> Coord | None:
        nx, ny = x + dx, y + dy
        if kind == "rectangle":
            if dx and bc_x == "periodic":
                nx = (nx - 1) % l_x + 1
            if dy and bc_y == "periodic":
                ny = (ny - 1) % l_y + 1
        if (nx, ny) in active and (nx, ny) != (x, y):
            return (nx, ny)
        return None

    x_bonds, y_bonds, diag_bonds = [], [], []
    for (x, y) in coords:
        i = index[(x, y)]
        for dx, dy, bucket in ((1, 0, x_bonds), (0, 1, y_bonds), (1, 1, diag_bonds)):
            nb = neighbor(x, y, dx, dy)
            if nb is not None:
                bucket.append((i, index[nb]))

    return LatticeSpec(
        shape=kind,
        l_x=l_x,
        l_y=l_y,
        bc_x=bc_x,
        bc_y=bc_y,
        coords=tuple(coords),
        site_index=index,
        x_bonds=tuple(x_bonds),
        y_bonds=tuple(y_bonds),
        diag_bonds=tuple(diag_bonds),
        tilt_deg=tilt,
    )


def tau_x(n: int) -> np.ndarray:
    """Nambu tau_x: swaps particle and hole blocks."""
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, eye], [eye, zero]])


def tau_z(n: int) -> np.ndarray:
    """Nambu tau_z: +1 on particle modes, -1 on hole modes."""
    return np.diag(np.concatenate([np.ones(n), -np.ones(n)]))


@dataclass(frozen=True)
class BdGOperator:
    """Dense real-space BdG matrices for one lattice and parameter set.

    h       N x N Hermitian single-particle matrix
    delta   N x N symmetric pairing matrix (diagonal 2*delta0)
    h_bdg   2N x 2N Nambu Hamiltonian [[h, delta], [delta^dag, h^T]]
    m_dyn   2N x 2N dynamical matrix tau_z @ h_bdg
    """

    params: ModelParams
    lattice: LatticeSpec
    h: np.ndarray = field(repr=False)
    delta: np.ndarray = field(repr=False)
    h_bdg: np.ndarray = field(repr=False)
    m_dyn: np.ndarray = field(repr=False)

    @property
    def n_sites(self) -> int:
        return self.lattice.n_sites


def assemble_bdg(params: ModelParams, lattice: LatticeSpec,
                 max_dim: int = 20000) -> BdGOperator:
    """Assemble h, delta, the BdG Hamiltonian and the dynamical matrix.

    The pairing diagonal is 2*delta0 and bond entries are delta_x on both
    symmetric positions, so that (1/2) Psi^dag H Psi reproduces the model
    Hamiltonian term by term.
    """
    n = lattice.n_sites
    if 2 * n > max_dim:
        raise LatticeError(f"2N = {2 * n} exceeds the configured cap {max_dim}")

    h = np.zeros((n, n), dtype=complex)
    delta = np.zeros((n, n), dtype=complex)
    np.fill_diagonal(h, params.omega0)
    np.fill_diagonal(delta, 2.0 * params.delta0)

    for bonds, amp in ((lattice.x_bonds, params.j_x),
                       (lattice.y_bonds, params.j_y),
                       (lattice.diag_bonds, params.j_xy)):
        for i_from, i_to in bonds:
            h[i_to, i_from] += amp
            h[i_from, i_to] += np.conj(amp)
    for i_from, i_to in lattice.x_bonds:
        delta[i_to, i_from] += params.delta_x
        delta[i_from, i_to] += params.delta_x

    h_bdg = np.block([[h, delta], [delta.conj().T, h.T]])
    m_dyn = np.block([[h, delta], [-delta.conj().T, -h.T]])
    return BdGOperator(params=params, lattice=lattice, h=h, delta=delta,
                       h_bdg=h_bdg, m_dyn=m_dyn)


@dataclass(frozen=True)
class BlochOperator:
    """Momentum-space 2x2 BdG and dynamical matrices at one wavevector."""

    k: Tuple[float, float]
    h0_k: complex
    delta_k: complex
    h_bdg_k: np.ndarray = field(repr=False)
    m_b_k: np.ndarray = field(repr=False)


def bloch_operator(params: ModelParams, k) -> BlochOperator:
    """Momentum-space operator at k = (k_x, k_y).

    delta_k is the Fourier transform of the symmetric pairing matrix,
    2*delta0 + 2*delta_x*cos(k_x); this keeps the torus spectrum identical
    to the real-space PBC spectrum for complex amplitudes as well.
    """
    k_x, k_y = float(k[0]), float(k[1])
    if not (math.isfinite(k_x) and math.isfinite(k_y)):
        raise ValueError(f"wavevector must be finite, got {k}")

    h0 = params.omega0 + 0j
    for amp, phase in ((params.j_x, k_x), (params.j_y, k_y),
                       (params.j_xy, k_x + k_y)):
        h0 += amp * cmath.exp(-1j * phase) + np.conj(amp) * cmath.exp(1j * phase)
    d_k = 2.0 * params.delta0 + 2.0 * params.delta_x * math.cos(k_x)
    d_mk_conj = 2.0 * np.conj(params.delta0) + 2.0 * np.conj(params.delta_x) * math.cos(k_x)
    h0_mk_conj = np.conj(params.omega0) + 0j
    for amp, phase in ((params.j_x, k_x), (params.j_y, k_y),
                       (params.j_xy, k_x + k_y)):
        h0_mk_conj += np.conj(amp) * cmath.exp(-1j * phase) + amp * cmath.exp(1j * phase)

    h_bdg_k = np.array([[h0, d_k], [d_mk_conj, h0_mk_conj]], dtype=complex)
    m_b_k = np.array([[h0, d_k], [-d_mk_conj, -h0_mk_conj]], dtype=complex)
    return BlochOperator(k=(k_x, k_y), h0_k=h0, delta_k=d_k,
                         h_bdg_k=h_bdg_k, m_b_k=m_b_k)


def ph_symmetry_residual(op: BdGOperator) -> float:
    """Max-norm of tau_x H* tau_x - H for an assembled operator."""
    n = op.n_sites
    tx = tau_x(n)
    return float(np.max(np.abs(tx @ op.h_bdg.conj() @ tx - op.h_bdg)))
