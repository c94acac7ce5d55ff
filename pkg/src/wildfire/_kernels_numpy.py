"""Pure-numpy implementations of the hot kernels.

Same signatures as ``_kernels_numba``; selected via the ``WILDFIRE_NUMBA``
environment flag (see ``_accel``). All routines are deterministic: the banded
solves touch each right-hand-side line independently and the weak-form scatter
adds element blocks in a fixed order (plain slicing), so results do not depend
on any worker count.

Banded storage convention (LAPACK-like, half bandwidth ``p`` on both sides):
``ab[2p + i - j, j] = A[i, j]``. The factored array has ``3p + 1`` rows; rows
``[0, p)`` hold the fill-in superdiagonals produced by partial pivoting.
"""

from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

__all__ = ["band_factor", "band_solve_many", "eval_state", "scatter_weak"]


def band_factor(ab: np.ndarray, p: int) -> tuple[np.ndarray, int]:
    """LU-factor banded ``ab`` in place with partial pivoting.

    Returns ``(piv, info)``; ``info == k + 1`` flags an exactly-zero pivot in
    column ``k``, ``info == 0`` means success.
    """
    n = ab.shape[1]
    piv = np.arange(n, dtype=np.int64)
    for k in range(n):
        kp = min(p, n - 1 - k)
        col = np.abs(ab[2 * p : 2 * p + kp + 1, k])
        imax = k + int(np.argmax(col))
        piv[k] = imax
        if ab[2 * p + imax - k, k] == 0.0:
            return piv, k + 1
        jhi = min(k + 2 * p, n - 1)
        if imax != k:
            js = np.arange(k, jhi + 1)
            rk, ri = 2 * p + k - js, 2 * p + imax - js
            tmp = ab[rk, js].copy()
            ab[rk, js] = ab[ri, js]
            ab[ri, js] = tmp
        ukk = ab[2 * p, k]
        if kp > 0:
            m = ab[2 * p + 1 : 2 * p + kp + 1, k] / ukk
            ab[2 * p + 1 : 2 * p + kp + 1, k] = m
            for j in range(k + 1, jhi + 1):
                ab[2 * p + 1 + k - j : 2 * p + 1 + kp + k - j, j] -= m * ab[2 * p + k - j, j]
    return piv, 0


def band_solve_many(ab: np.ndarray, piv: np.ndarray, p: int, rhs: np.ndarray) -> np.ndarray:
    """Solve ``A X = rhs`` from a factored band, one column of ``rhs`` per system."""
    n = ab.shape[1]
    x = np.array(rhs, dtype=np.float64, copy=True)
    if x.ndim == 1:
        x = x[:, None]
        squeeze = True
    else:
        squeeze = False
    for k in range(n):
        ip = piv[k]
        if ip != k:
            tmp = x[k].copy()
            x[k] = x[ip]
            x[ip] = tmp
        kp = min(p, n - 1 - k)
        if kp > 0:
            x[k + 1 : k + kp + 1] -= ab[2 * p + 1 : 2 * p + kp + 1, k][:, None] * x[k]
    for k in range(n - 1, -1, -1):
        x[k] /= ab[2 * p, k]
        ilo = max(0, k - 2 * p)
        if ilo < k:
            x[ilo:k] -= ab[2 * p + ilo - k : 2 * p, k][:, None] * x[k]
    return x[:, 0] if squeeze else x


def eval_state(temp, fuel, bxv, bxd, byv, byd):
    """Interpolate temperature (value + gradient) and fuel on the quad grid.

    ``temp``/``fuel`` are coefficient grids ``(n_x, n_y)``; the basis tables are
    ``(ne, nq, p + 1)``. Outputs have shape ``(ne_x, nq_x, ne_y, nq_y)``.
    """
    p1 = bxv.shape[2]
    wt = sliding_window_view(temp, (p1, p1))
    wf = sliding_window_view(fuel, (p1, p1))
    u = np.einsum("xyab,xqa,yrb->xqyr", wt, bxv, byv, optimize=True)
    ux = np.einsum("xyab,xqa,yrb->xqyr", wt, bxd, byv, optimize=True)
    uy = np.einsum("xyab,xqa,yrb->xqyr", wt, bxv, byd, optimize=True)
    fv = np.einsum("xyab,xqa,yrb->xqyr", wf, bxv, byv, optimize=True)
    return u, ux, uy, fv


def scatter_weak(vol, flux_x, flux_y, bxv, bxd, byv, byd, w2):
    """Assemble ``sum_q w (vol * phi - flux . grad(phi))`` into a dof grid.

    ``vol``/``flux_x``/``flux_y`` live on the quad grid ``(ne_x, nq_x, ne_y,
    nq_y)``; ``w2[qx, qy]`` is the tensor quadrature weight including both
    element Jacobians. The scatter adds per-element blocks by slicing, so the
    summation order is fixed.
    """
    ne_x, p1 = bxv.shape[0], bxv.shape[2]
    ne_y = byv.shape[0]
    gv = vol * w2[None, :, None, :]
    gx = flux_x * w2[None, :, None, :]
    gy = flux_y * w2[None, :, None, :]
    out = np.zeros((ne_x + p1 - 1, ne_y + p1 - 1))
    for a in range(p1):
        for b in range(p1):
            blk = np.einsum("xqyr,xq,yr->xy", gv, bxv[:, :, a], byv[:, :, b], optimize=True)
            blk -= np.einsum("xqyr,xq,yr->xy", gx, bxd[:, :, a], byv[:, :, b], optimize=True)
            blk -= np.einsum("xqyr,xq,yr->xy", gy, bxv[:, :, a], byd[:, :, b], optimize=True)
            out[a : a + ne_x, b : b + ne_y] += blk
    return out
