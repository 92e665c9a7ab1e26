"""Backend parity and TV-prox correctness.

The NumPy fallback and the compiled extension must agree to rounding error;
the exact TV proximal map is checked against a convex-programming oracle.
"""

import numpy as np
import pytest

from spiralflow import kernels
from spiralflow.kernels import _gridding_np

try:
    from spiralflow.kernels import _gridding_cy
except ImportError:
    _gridding_cy = None

needs_ext = pytest.mark.skipif(_gridding_cy is None, reason="compiled kernels unavailable")


def _kb_setup(nsamp=300, nchan=2, g=64, width=4, seed=0):
    rng = np.random.default_rng(seed)
    pos = rng.uniform(width, g - width, size=(nsamp, 2))
    vals = rng.normal(size=(nchan, nsamp)) + 1j * rng.normal(size=(nchan, nsamp))
    table = np.i0(8.0 * np.sqrt(np.clip(1 - np.linspace(0, 1, 801) ** 2, 0, 1)))
    scale = 800 / (width / 2)
    return pos, np.ascontiguousarray(vals), table, width, scale, g


@needs_ext
def test_spread_backends_agree():
    pos, vals, table, width, scale, g = _kb_setup()
    grid_a = np.zeros((2, g, g), dtype=complex)
    grid_b = np.zeros((2, g, g), dtype=complex)
    _gridding_np.grid_spread(pos, vals, grid_a, table, width, scale)
    _gridding_cy.grid_spread(pos, vals, grid_b, table, width, scale)
    assert np.allclose(grid_a, grid_b, atol=1e-12)


@needs_ext
def test_interp_backends_agree():
    pos, vals, table, width, scale, g = _kb_setup(seed=1)
    grid = np.zeros((2, g, g), dtype=complex)
    _gridding_np.grid_spread(pos, vals, grid, table, width, scale)
    out_a = _gridding_np.grid_interp(pos, grid, table, width, scale)
    out_b = _gridding_cy.grid_interp(pos, grid, table, width, scale)
    assert np.allclose(out_a, out_b, atol=1e-12)


@needs_ext
def test_wraparound_indexing_agrees():
    rng = np.random.default_rng(2)
    g, width = 32, 4
    pos = np.column_stack([rng.uniform(-1.5, 1.5, 50), rng.uniform(g - 1.5, g + 1.5, 50)])
    vals = np.ascontiguousarray(
        rng.normal(size=(1, 50)) + 1j * rng.normal(size=(1, 50)))
    table = np.linspace(1, 0, 101)
    scale = 100 / (width / 2)
    ga = np.zeros((1, g, g), dtype=complex)
    gb = np.zeros((1, g, g), dtype=complex)
    _gridding_np.grid_spread(pos, vals, ga, table, width, scale)
    _gridding_cy.grid_spread(pos, vals, gb, table, width, scale)
    assert np.allclose(ga, gb, atol=1e-12)
    assert np.allclose(_gridding_np.grid_interp(pos, ga, table, width, scale),
                       _gridding_cy.grid_interp(pos, gb, table, width, scale))


def _tv_prox_oracle(y, lam):
    import cvxpy as cp

    x = cp.Variable(len(y))
    obj = 0.5 * cp.sum_squares(x - y) + lam * cp.norm1(cp.diff(x))
    cp.Problem(cp.Minimize(obj)).solve(solver=cp.CLARABEL)
    return np.asarray(x.value)


@pytest.mark.parametrize("seed,lam", [(0, 0.1), (1, 1.0), (2, 5.0), (3, 0.01)])
def test_tv_prox_matches_convex_oracle(seed, lam):
    rng = np.random.default_rng(seed)
    y = rng.normal(size=(1, 30)).cumsum(axis=1)
    got = kernels.tv1d_prox_batch(y, lam)
    want = _tv_prox_oracle(y[0], lam)
    assert np.allclose(got[0], want, atol=1e-6)


def test_tv_prox_constant_and_zero_lambda():
    y = np.full((1, 12), 3.5)
    assert np.allclose(kernels.tv1d_prox_batch(y, 2.0), y)
    rng = np.random.default_rng(4)
    z = rng.normal(size=(3, 9))
    assert np.allclose(kernels.tv1d_prox_batch(z, 0.0), z)


def test_tv_prox_large_lambda_gives_mean():
    rng = np.random.default_rng(5)
    y = rng.normal(size=(2, 16))
    out = kernels.tv1d_prox_batch(y, 1e6)
    for i in range(2):
        assert np.allclose(out[i], y[i].mean(), atol=1e-9)


@needs_ext
def test_tv_prox_backends_agree():
    rng = np.random.default_rng(6)
    y = rng.normal(size=(20, 24))
    for lam in (0.05, 0.7, 3.0):
        a = _gridding_np.tv1d_prox_batch(y, lam)
        b = _gridding_cy.tv1d_prox_batch(y, lam)
        assert np.allclose(a, b, atol=1e-12)


def test_tv_prox_short_series():
    assert np.allclose(kernels.tv1d_prox_batch(np.array([[5.0]]), 1.0), [[5.0]])
    out = kernels.tv1d_prox_batch(np.array([[0.0, 4.0]]), 1.0)
    assert np.allclose(out, [[1.0, 3.0]])
