"""Pure-NumPy gridding and TV-prox kernels.

Fallback implementations of the hot loops, kept semantically identical to
the Cython versions in ``_gridding_cy.pyx``: same tap placement, same
lookup-table interpolation, same wrap-around indexing, so the forward and
adjoint transforms built on top remain exact adjoints regardless of which
backend is active.
"""

import numpy as np

BACKEND_NAME = "numpy"


def _tap_weights(pos, width, table, table_scale):
    """Per-sample tap indices and kernel weights along one axis.

    ``pos`` is the fractional grid position; taps are the ``width``
    consecutive integers starting at ``ceil(pos - width/2)``.
    Returns ``(idx, w)`` with shape ``(nsamp, width)``.
    """
    first = np.ceil(pos - width / 2.0).astype(np.int64)
    offs = np.arange(width, dtype=np.int64)
    idx = first[:, None] + offs[None, :]
    dist = np.abs(idx - pos[:, None])
    t = dist * table_scale
    i0 = np.minimum(t.astype(np.int64), len(table) - 2)
    frac = t - i0
    w = table[i0] * (1.0 - frac) + table[i0 + 1] * frac
    w[dist > width / 2.0] = 0.0
    return idx, w


def grid_spread(pos, values, grid, table, width, table_scale):
    """Scatter-add samples onto the oversampled grid.

    pos    : (nsamp, 2) float64, fractional grid coordinates (x, y)
    values : (nchan, nsamp) complex128
    grid   : (nchan, G, G) complex128, accumulated in place
    """
    g = grid.shape[-1]
    ix, wx = _tap_weights(pos[:, 0], width, table, table_scale)
    iy, wy = _tap_weights(pos[:, 1], width, table, table_scale)
    ix %= g
    iy %= g
    nchan = values.shape[0]
    for ox in range(width):
        for oy in range(width):
            w = wx[:, ox] * wy[:, oy]
            cols = ix[:, ox]
            rows = iy[:, oy]
            flat = rows * g + cols
            for c in range(nchan):
                np.add.at(grid[c].reshape(-1), flat, w * values[c])


def grid_interp(pos, grid, table, width, table_scale):
    """Gather samples from the oversampled grid (adjoint of grid_spread).

    Returns (nchan, nsamp) complex128.
    """
    g = grid.shape[-1]
    nchan = grid.shape[0]
    ix, wx = _tap_weights(pos[:, 0], width, table, table_scale)
    iy, wy = _tap_weights(pos[:, 1], width, table, table_scale)
    ix %= g
    iy %= g
    out = np.zeros((nchan, pos.shape[0]), dtype=np.complex128)
    flat_grid = grid.reshape(nchan, -1)
    for ox in range(width):
        for oy in range(width):
            w = wx[:, ox] * wy[:, oy]
            flat = iy[:, oy] * g + ix[:, ox]
            out += w[None, :] * flat_grid[:, flat]
    return out


def _tv1d(y, lam, x):
    """Exact 1D total-variation proximal map (Condat's direct algorithm)."""
    n = len(y)
    if n == 0:
        return
    if lam <= 0.0:
        x[:] = y
        return
    k = k0 = km = kp = 0
    vmin = y[0] - lam
    vmax = y[0] + lam
    umin = lam
    umax = -lam
    while True:
        if k == n - 1:
            # single-point tail after a terminal jump
            x[k] = vmin + umin
            return
        if y[k + 1] + umin < vmin - lam:
            # downward jump: flush the vmin segment
            x[k0:km + 1] = vmin
            k = k0 = km = kp = km + 1
            vmin = y[k]
            vmax = y[k] + 2.0 * lam
            umin = lam
            umax = -lam
        elif y[k + 1] + umax > vmax + lam:
            # upward jump: flush the vmax segment
            x[k0:kp + 1] = vmax
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
                x[k0:km + 1] = vmin
                k = k0 = km = km + 1
                vmin = y[k]
                umin = lam
                umax = y[k] + lam - vmax
            elif umax > 0.0:
                x[k0:kp + 1] = vmax
                k = k0 = kp = kp + 1
                vmax = y[k]
                umax = -lam
                umin = y[k] - lam - vmin
            else:
                x[k0:n] = vmin + umin / (k - k0 + 1)
                return


def tv1d_prox_batch(y, lam):
    """Row-wise prox of ``lam * ||diff(x)||_1`` at ``y`` ((nseries, n) float64)."""
    y = np.ascontiguousarray(y, dtype=np.float64)
    out = np.empty_like(y)
    for i in range(y.shape[0]):
        _tv1d(y[i], lam, out[i])
    return out
