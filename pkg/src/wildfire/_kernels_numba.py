"""Numba-compiled hot kernels (banded solves, quad-grid interpolation, scatter).

Mirrors ``_kernels_numpy``; see that module for the band storage convention.
Parallel loops only ever write to disjoint slots (one line or one element block
per iteration) and the final scatter merge runs serially in element order, so
results are bitwise identical for any ``numba`` thread count.
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange

__all__ = ["band_factor", "band_solve_many", "eval_state", "scatter_weak", "forcing_rhs", "fuel_rhs"]


@njit(cache=True)
def band_factor(ab, p):
    n = ab.shape[1]
    piv = np.arange(n).astype(np.int64)
    for k in range(n):
        kp = min(p, n - 1 - k)
        imax = k
        amax = abs(ab[2 * p, k])
        for i in range(k + 1, k + kp + 1):
            t = abs(ab[2 * p + i - k, k])
            if t > amax:
                amax = t
                imax = i
        piv[k] = imax
        if ab[2 * p + imax - k, k] == 0.0:
            return piv, k + 1
        jhi = min(k + 2 * p, n - 1)
        if imax != k:
            for j in range(k, jhi + 1):
                rk = 2 * p + k - j
                ri = 2 * p + imax - j
                tmp = ab[rk, j]
                ab[rk, j] = ab[ri, j]
                ab[ri, j] = tmp
        ukk = ab[2 * p, k]
        for i in range(k + 1, k + kp + 1):
            m = ab[2 * p + i - k, k] / ukk
            ab[2 * p + i - k, k] = m
            for j in range(k + 1, jhi + 1):
                ab[2 * p + i - j, j] -= m * ab[2 * p + k - j, j]
    return piv, 0


@njit(cache=True, parallel=True)
def band_solve_many(ab, piv, p, rhs):
    n = ab.shape[1]
    nrhs = rhs.shape[1]
    x = rhs.copy()
    for line in prange(nrhs):
        for k in range(n):
            ip = piv[k]
            if ip != k:
                tmp = x[k, line]
                x[k, line] = x[ip, line]
                x[ip, line] = tmp
            kp = min(p, n - 1 - k)
            for i in range(k + 1, k + kp + 1):
                x[i, line] -= ab[2 * p + i - k, k] * x[k, line]
        for k in range(n - 1, -1, -1):
            xk = x[k, line] / ab[2 * p, k]
            x[k, line] = xk
            ilo = max(0, k - 2 * p)
            for i in range(ilo, k):
                x[i, line] -= ab[2 * p + i - k, k] * xk
    return x


@njit(cache=True, parallel=True)
def eval_state(temp, fuel, bxv, bxd, byv, byd):
    ne_x, nq_x, p1 = bxv.shape
    ne_y, nq_y = byv.shape[0], byv.shape[1]
    u = np.empty((ne_x, nq_x, ne_y, nq_y))
    ux = np.empty((ne_x, nq_x, ne_y, nq_y))
    uy = np.empty((ne_x, nq_x, ne_y, nq_y))
    fv = np.empty((ne_x, nq_x, ne_y, nq_y))
    for ex in prange(ne_x):
        for qx in range(nq_x):
            for ey in range(ne_y):
                for qy in range(nq_y):
                    su = 0.0
                    sx = 0.0
                    sy = 0.0
                    sf = 0.0
                    for a in range(p1):
                        cu = 0.0
                        cy = 0.0
                        cf = 0.0
                        for b in range(p1):
                            t = temp[ex + a, ey + b]
                            cu += t * byv[ey, qy, b]
                            cy += t * byd[ey, qy, b]
                            cf += fuel[ex + a, ey + b] * byv[ey, qy, b]
                        su += cu * bxv[ex, qx, a]
                        sx += cu * bxd[ex, qx, a]
                        sy += cy * bxv[ex, qx, a]
                        sf += cf * bxv[ex, qx, a]
                    u[ex, qx, ey, qy] = su
                    ux[ex, qx, ey, qy] = sx
                    uy[ex, qx, ey, qy] = sy
                    fv[ex, qx, ey, qy] = sf
    return u, ux, uy, fv


@njit(cache=True, parallel=True)
def forcing_rhs(
    temp, fuel, bxv, bxd, byv, byd, w2, eta, f_ext, has_fext,
    with_linear, with_nonlinear,
    c_diffusion, c_adv_x, c_adv_y, c_reaction, c_radiation,
    c_nonlin_diffusion, c_forcing, c_ignition,
    t_ambient, t_ignition, t_activation, fuel_threshold,
):
    """Fused weak RHS of the temperature equation: interpolation, pointwise
    physics, and the element scatter in one pass (no quad-grid temporaries).
    Mirrors the staged numpy path in ``assembly.assemble_forcing``."""
    ne_x, nq_x, p1 = bxv.shape
    ne_y, nq_y = byv.shape[0], byv.shape[1]
    blocks = np.zeros((ne_x, ne_y, p1, p1))
    t_amb4 = t_ambient**4
    for exy in prange(ne_x * ne_y):
        ex = exy // ne_y
        ey = exy % ne_y
        for qx in range(nq_x):
            for qy in range(nq_y):
                u = 0.0
                ux = 0.0
                uy = 0.0
                fv = 0.0
                for a in range(p1):
                    cu = 0.0
                    cy = 0.0
                    cf = 0.0
                    for b in range(p1):
                        t = temp[ex + a, ey + b]
                        cu += t * byv[ey, qy, b]
                        cy += t * byd[ey, qy, b]
                        cf += fuel[ex + a, ey + b] * byv[ey, qy, b]
                    u += cu * bxv[ex, qx, a]
                    ux += cu * bxd[ex, qx, a]
                    uy += cy * bxv[ex, qx, a]
                    fv += cf * bxv[ex, qx, a]
                vol = 0.0
                diffusivity = 0.0
                if with_nonlinear:
                    avail = fv * eta[ex, qx, ey, qy]
                    if u > t_ignition and avail > fuel_threshold:
                        vol += c_ignition * avail * u * np.exp(-t_activation / u)
                    u4 = u * u * u * u
                    if with_linear:
                        vol += -c_reaction * (t_ambient - u)
                        vol += c_radiation * (t_amb4 - u4)
                    else:
                        vol += c_forcing - c_radiation * u4
                    diffusivity = c_nonlin_diffusion * u * u * u
                if with_linear:
                    vol += -(c_adv_x * ux + c_adv_y * uy)
                    if not with_nonlinear:
                        vol += c_reaction * u
                    diffusivity += c_diffusion
                if has_fext:
                    vol += f_ext[ex, qx, ey, qy]
                w = w2[qx, qy]
                gv = vol * w
                gx = diffusivity * ux * w
                gy = diffusivity * uy * w
                for a in range(p1):
                    bv = bxv[ex, qx, a]
                    bd = bxd[ex, qx, a]
                    for b in range(p1):
                        blocks[ex, ey, a, b] += (
                            gv * bv * byv[ey, qy, b]
                            - gx * bd * byv[ey, qy, b]
                            - gy * bv * byd[ey, qy, b]
                        )
    out = np.zeros((ne_x + p1 - 1, ne_y + p1 - 1))
    for ex in range(ne_x):
        for ey in range(ne_y):
            for a in range(p1):
                for b in range(p1):
                    out[ex + a, ey + b] += blocks[ex, ey, a, b]
    return out


@njit(cache=True, parallel=True)
def fuel_rhs(
    temp, fuel, bxv, byv, w2, eta, tau,
    fuel_rate, arrhenius_a, t_ignition, t_activation, fuel_threshold,
):
    """Fused weak RHS of the explicit fuel depletion step:
    ``int fuel (1 - tau * fuel_rate * r) v``."""
    ne_x, nq_x, p1 = bxv.shape
    ne_y, nq_y = byv.shape[0], byv.shape[1]
    blocks = np.zeros((ne_x, ne_y, p1, p1))
    for exy in prange(ne_x * ne_y):
        ex = exy // ne_y
        ey = exy % ne_y
        for qx in range(nq_x):
            for qy in range(nq_y):
                u = 0.0
                fv = 0.0
                for a in range(p1):
                    cu = 0.0
                    cf = 0.0
                    for b in range(p1):
                        cu += temp[ex + a, ey + b] * byv[ey, qy, b]
                        cf += fuel[ex + a, ey + b] * byv[ey, qy, b]
                    u += cu * bxv[ex, qx, a]
                    fv += cf * bxv[ex, qx, a]
                avail = fv * eta[ex, qx, ey, qy]
                vol = fv
                if u > t_ignition and avail > fuel_threshold:
                    rate = arrhenius_a * u * np.exp(-t_activation / u)
                    vol = fv * (1.0 - tau * fuel_rate * rate)
                gv = vol * w2[qx, qy]
                for a in range(p1):
                    bv = bxv[ex, qx, a]
                    for b in range(p1):
                        blocks[ex, ey, a, b] += gv * bv * byv[ey, qy, b]
    out = np.zeros((ne_x + p1 - 1, ne_y + p1 - 1))
    for ex in range(ne_x):
        for ey in range(ne_y):
            for a in range(p1):
                for b in range(p1):
                    out[ex + a, ey + b] += blocks[ex, ey, a, b]
    return out


@njit(cache=True, parallel=True)
def scatter_weak(vol, flux_x, flux_y, bxv, bxd, byv, byd, w2):
    ne_x, nq_x, p1 = bxv.shape
    ne_y, nq_y = byv.shape[0], byv.shape[1]
    blocks = np.zeros((ne_x, ne_y, p1, p1))
    for exy in prange(ne_x * ne_y):
        ex = exy // ne_y
        ey = exy % ne_y
        for qx in range(nq_x):
            for qy in range(nq_y):
                w = w2[qx, qy]
                gv = vol[ex, qx, ey, qy] * w
                gx = flux_x[ex, qx, ey, qy] * w
                gy = flux_y[ex, qx, ey, qy] * w
                for a in range(p1):
                    bv = bxv[ex, qx, a]
                    bd = bxd[ex, qx, a]
                    for b in range(p1):
                        blocks[ex, ey, a, b] += (
                            gv * bv * byv[ey, qy, b]
                            - gx * bd * byv[ey, qy, b]
                            - gy * bv * byd[ey, qy, b]
                        )
    out = np.zeros((ne_x + p1 - 1, ne_y + p1 - 1))
    for ex in range(ne_x):
        for ey in range(ne_y):
            for a in range(p1):
                for b in range(p1):
                    out[ex + a, ey + b] += blocks[ex, ey, a, b]
    return out
