# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled gridding and TV-prox kernels.

Semantically identical to ``_gridding_np``: same tap placement, lookup-table
interpolation and wrap-around indexing, so either backend yields the same
transforms to rounding error.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport ceil, fabs

BACKEND_NAME = "cython"


cdef inline double _kernel_weight(double dist, double half_width,
                                  const double[::1] table, double table_scale,
                                  Py_ssize_t ntab) nogil:
    cdef double t
    cdef Py_ssize_t i0
    cdef double frac
    if dist > half_width:
        return 0.0
    t = dist * table_scale
    i0 = <Py_ssize_t>t
    if i0 > ntab - 2:
        i0 = ntab - 2
    frac = t - i0
    return table[i0] * (1.0 - frac) + table[i0 + 1] * frac


def grid_spread(double[:, ::1] pos, double complex[:, ::1] values,
                double complex[:, :, ::1] grid, const double[::1] table,
                int width, double table_scale):
    """Scatter-add samples onto the oversampled grid (in place)."""
    cdef Py_ssize_t nsamp = pos.shape[0]
    cdef Py_ssize_t nchan = values.shape[0]
    cdef Py_ssize_t g = grid.shape[2]
    cdef Py_ssize_t ntab = table.shape[0]
    cdef double half = width / 2.0
    cdef Py_ssize_t i, c, ox, oy
    cdef long fx, fy, col, row
    cdef double px, py, w
    cdef double wx[16]
    cdef double wy[16]
    cdef long cx[16]
    cdef long cy[16]
    cdef double complex v

    with nogil:
        for i in range(nsamp):
            px = pos[i, 0]
            py = pos[i, 1]
            fx = <long>ceil(px - half)
            fy = <long>ceil(py - half)
            for ox in range(width):
                wx[ox] = _kernel_weight(fabs(fx + ox - px), half, table,
                                        table_scale, ntab)
                col = (fx + ox) % g
                if col < 0:
                    col += g
                cx[ox] = col
            for oy in range(width):
                wy[oy] = _kernel_weight(fabs(fy + oy - py), half, table,
                                        table_scale, ntab)
                row = (fy + oy) % g
                if row < 0:
                    row += g
                cy[oy] = row
            for c in range(nchan):
                v = values[c, i]
                for oy in range(width):
                    for ox in range(width):
                        w = wx[ox] * wy[oy]
                        grid[c, cy[oy], cx[ox]] = grid[c, cy[oy], cx[ox]] + w * v


def grid_interp(double[:, ::1] pos, double complex[:, :, ::1] grid,
                const double[::1] table, int width, double table_scale):
    """Gather samples from the oversampled grid (adjoint of grid_spread)."""
    cdef Py_ssize_t nsamp = pos.shape[0]
    cdef Py_ssize_t nchan = grid.shape[0]
    cdef Py_ssize_t g = grid.shape[2]
    cdef Py_ssize_t ntab = table.shape[0]
    cdef double half = width / 2.0
    out_arr = np.zeros((nchan, nsamp), dtype=np.complex128)
    cdef double complex[:, ::1] out = out_arr
    cdef Py_ssize_t i, c, ox, oy
    cdef long fx, fy, col, row
    cdef double px, py
    cdef double wx[16]
    cdef double wy[16]
    cdef long cx[16]
    cdef long cy[16]
    cdef double complex acc

    with nogil:
        for i in range(nsamp):
            px = pos[i, 0]
            py = pos[i, 1]
            fx = <long>ceil(px - half)
            fy = <long>ceil(py - half)
            for ox in range(width):
                wx[ox] = _kernel_weight(fabs(fx + ox - px), half, table,
                                        table_scale, ntab)
                col = (fx + ox) % g
                if col < 0:
                    col += g
                cx[ox] = col
            for oy in range(width):
                wy[oy] = _kernel_weight(fabs(fy + oy - py), half, table,
                                        table_scale, ntab)
                row = (fy + oy) % g
                if row < 0:
                    row += g
                cy[oy] = row
            for c in range(nchan):
                acc = 0
                for oy in range(width):
                    for ox in range(width):
                        acc = acc + wx[ox] * wy[oy] * grid[c, cy[oy], cx[ox]]
                out[c, i] = acc
    return out_arr


cdef void _tv1d_c(const double[::1] y, double lam, double[::1] x,
                  Py_ssize_t n) nogil:
    cdef Py_ssize_t k, k0, km, kp, j
    cdef double vmin, vmax, umin, umax
    if n == 0:
        return
    if lam <= 0.0:
        for j in range(n):
            x[j] = y[j]
        return
    k = k0 = km = kp = 0
    vmin = y[0] - lam
    vmax = y[0] + lam
    umin = lam
    umax = -lam
    while True:
        if k == n - 1:
            x[k] = vmin + umin
            return
        if y[k + 1] + umin < vmin - lam:
            for j in range(k0, km + 1):
                x[j] = vmin
            k = k0 = km = kp = km + 1
            vmin = y[k]
            vmax = y[k] + 2.0 * lam
            umin = lam
            umax = -lam
        elif y[k + 1] + umax > vmax + lam:
            for j in range(k0, kp + 1):
                x[j] = vmax
            k = k0 = km = kp = kp + 1
            vmin = y[k] - 2.0 * lam
            vmax = y[k]
            umin = lam
            umax = -lam
        else:
            k += 1
            umin += y[k] - vmin
            umax += y[k] - vmax
            if umin >= lam:
                vmin += (umin - lam) / (k - k0 + 1)
                umin = lam
                km = k
            if umax <= -lam:
                vmax += (umax + lam) / (k - k0 + 1)
                umax = -lam
                kp = k
            if k < n - 1:
                continue
            if umin < 0.0:
                for j in range(k0, km + 1):
                    x[j] = vmin
                k = k0 = km = km + 1
                vmin = y[k]
                umin = lam
                umax = y[k] + lam - vmax
            elif umax > 0.0:
                for j in range(k0, kp + 1):
                    x[j] = vmax
                k = k0 = kp = kp + 1
                vmax = y[k]
                umax = -lam
                umin = y[k] - lam - vmin
            else:
                vmin += umin / (k - k0 + 1)
                for j in range(k0, n):
                    x[j] = vmin
                return


def tv1d_prox_batch(y, double lam):
    """Row-wise prox of ``lam * ||diff(x)||_1`` at ``y`` ((nseries, n) float64)."""
    y_arr = np.ascontiguousarray(y, dtype=np.float64)
    out_arr = np.empty_like(y_arr)
    cdef double[:, ::1] ym = y_arr
    cdef double[:, ::1] om = out_arr
    cdef Py_ssize_t i, nrow = ym.shape[0], n = ym.shape[1]
    with nogil:
        for i in range(nrow):
            _tv1d_c(ym[i], lam, om[i], n)
    return out_arr
