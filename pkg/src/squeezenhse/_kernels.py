"""Hot numeric kernels with optional numba acceleration.

Every kernel exists in two interchangeable flavors: a numba ``@njit``
version and a pure-numpy version. The numpy path is selected by setting
the environment variable ``SQUEEZENHSE_NO_NUMBA`` to a non-empty value
before import (useful on platforms without a working numba, and as the
reference implementation in tests and benchmarks).
"""

import os

import numpy as np

USE_NUMBA = not os.environ.get("SQUEEZENHSE_NO_NUMBA")

if USE_NUMBA:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        USE_NUMBA = False

__all__ = [
    "USE_NUMBA",
    "participation_sums",
    "layer_density_batch",
    "quad_roots_grid",
    "laurent_eval_grid",
]


# ---------------------------------------------------------------------------
# pure-numpy reference implementations
# ---------------------------------------------------------------------------

def _participation_sums_np(vectors: np.ndarray) -> np.ndarray:
    """Sum of |psi|^4 over both Nambu components, per column.

    ``vectors`` is a 2N x M complex array; returns an M vector.
    """
    w = np.abs(vectors) ** 4
    return w.sum(axis=0)


def _layer_density_batch_np(vectors: np.ndarray, x_index: np.ndarray,
                            n_x: int) -> np.ndarray:
    """Layer densities P(x) for every column of ``vectors``.

    ``x_index`` maps each of the N sites to a layer index in [0, n_x);
    particle and hole components of site j live at rows j and N + j.
    Returns an n_x x M array.
    """
    n = x_index.size
    w = np.abs(vectors[:n]) ** 2 + np.abs(vectors[n:]) ** 2
    out = np.zeros((n_x, vectors.shape[1]))
    np.add.at(out, x_index, w)
    return out


def _quad_roots_grid_np(c_plus: np.ndarray, c_zero: np.ndarray,
                        c_minus: np.ndarray, energy: complex):
    """Modulus-sorted roots of c_plus*b^2 + (c_zero - E)*b + c_minus = 0.

    All coefficient arrays share a common grid shape. Returns (beta1,
    beta2) with |beta1| <= |beta2|; modulus ties are broken by argument.
    """
    b = c_zero - energy
    disc = np.sqrt(b * b - 4.0 * c_plus * c_minus)
    r1 = (-b + disc) / (2.0 * c_plus)
    r2 = (-b - disc) / (2.0 * c_plus)
    a1, a2 = np.abs(r1), np.abs(r2)
    swap = (a1 > a2) | ((a1 == a2) & (np.angle(r1) > np.angle(r2)))
    beta1 = np.where(swap, r2, r1)
    beta2 = np.where(swap, r1, r2)
    return beta1, beta2


def _laurent_eval_grid_np(c_plus: np.ndarray, c_zero: np.ndarray,
                          c_minus: np.ndarray, beta: np.ndarray) -> np.ndarray:
    """Evaluate c_plus*beta + c_zero + c_minus/beta elementwise.

    All four arrays must share the same (pre-broadcast) shape.
    """
    return c_plus * beta + c_zero + c_minus / beta


# ---------------------------------------------------------------------------
# numba versions (explicit loops; same contracts as above)
# ---------------------------------------------------------------------------

if USE_NUMBA:

    @njit(cache=True)
    def _participation_sums_nb(vectors):
        n2, m = vectors.shape
        out = np.zeros(m)
        # row-major traversal of the (C-contiguous) vector array
        for i in range(n2):
            for j in range(m):
                z = vectors[i, j]
                p2 = z.real * z.real + z.imag * z.imag
                out[j] += p2 * p2
        return out

    @njit(cache=True)
    def _layer_density_batch_nb(vectors, x_index, n_x):
        n = x_index.size
        m = vectors.shape[1]
        out = np.zeros((n_x, m))
        for s in range(n):
            x = x_index[s]
            for j in range(m):
                zp = vectors[s, j]
                zh = vectors[n + s, j]
                out[x, j] += (zp.real * zp.real + zp.imag * zp.imag
                              + zh.real * zh.real + zh.imag * zh.imag)
        return out

    @njit(cache=True)
    def _quad_roots_grid_nb(c_plus, c_zero, c_minus, energy):
        n = c_plus.size
        beta1 = np.empty(n, dtype=np.complex128)
        beta2 = np.empty(n, dtype=np.complex128)
        for i in range(n):
            b = c_zero[i] - energy
            disc = np.sqrt(b * b - 4.0 * c_plus[i] * c_minus[i])
            r1 = (-b + disc) / (2.0 * c_plus[i])
            r2 = (-b - disc) / (2.0 * c_plus[i])
            a1, a2 = abs(r1), abs(r2)
            if a1 > a2 or (a1 == a2 and np.angle(r1) > np.angle(r2)):
                r1, r2 = r2, r1
            beta1[i] = r1
            beta2[i] = r2
        return beta1, beta2

    @njit(cache=True)
    def _laurent_eval_grid_nb(c_plus, c_zero, c_minus, beta):
        fp = c_plus.ravel()
        f0 = c_zero.ravel()
        fm = c_minus.ravel()
        fb = beta.ravel()
        out = np.empty(fb.size, dtype=np.complex128)
        for i in range(fb.size):
            out[i] = fp[i] * fb[i] + f0[i] + fm[i] / fb[i]
        return out.reshape(beta.shape)

    participation_sums = _participation_sums_nb
    layer_density_batch = _layer_density_batch_nb
    quad_roots_grid = _quad_roots_grid_nb
    laurent_eval_grid = _laurent_eval_grid_nb
else:
    participation_sums = _participation_sums_np
    layer_density_batch = _layer_density_batch_np
    quad_roots_grid = _quad_roots_grid_np
    laurent_eval_grid = _laurent_eval_grid_np
