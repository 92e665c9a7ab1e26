"""Iterative sampling-density compensation (Pipe & Menon, MRM 1999).

Runs the fixed-point iteration ``w <- w / |C^H C w|`` where ``C^H C`` grids
the weighted point cloud and reads it back at the sample locations.  At the
fixed point the kernel-smoothed weighted density is one everywhere, i.e.
the weights are proportional to the local k-space cell area.  The returned
weights are rescaled to absolute cell areas (in units of the unit k-square)
so that the weighted adjoint NUFFT is directly a quadrature of the Fourier
inversion integral.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import InputError, NumericalError
from .nufft import GriddingPlan, validate_coords


@dataclass
class DensityWeights:
    """Per-sample compensation weights plus the iteration's residual trace."""

    w: np.ndarray
    residuals: list[float] = field(default_factory=list)

    def __post_init__(self):
        if self.w.size and (not np.all(np.isfinite(self.w)) or np.any(self.w <= 0)):
            raise InputError("density weights must be finite and positive")


def compute_dcf(coords: np.ndarray, iterations: int = 10,
                plan: GriddingPlan | None = None, grid_size: int = 128,
                eps: float = 1e-12) -> DensityWeights:
    """Pipe-Menon weights for an arbitrary 2D trajectory.

    ``residuals[i]`` is mean ``|C^H C w - 1|`` after ``i+1`` iterations, in
    the iteration's own normalization.
    """
    coords = validate_coords(coords)
    if coords.shape[0] == 0:
        raise InputError("trajectory is empty")
    if iterations < 1:
        raise InputError("iterations must be >= 1")
    if np.ptp(coords[:, 0]) < 1e-12 and np.ptp(coords[:, 1]) < 1e-12:
        raise NumericalError("degenerate trajectory: all coordinates identical")
    if plan is None:
        plan = GriddingPlan(grid_size)

    w = np.ones(coords.shape[0], dtype=np.float64)
    residuals = []
    for _ in range(iterations):
        gw = np.abs(plan.spread_interp(coords, w.astype(np.complex128)))
        w = w / np.maximum(gw, eps)
        check = np.abs(plan.spread_interp(coords, w.astype(np.complex128)))
        residuals.append(float(np.mean(np.abs(check - 1.0))))
    if not np.all(np.isfinite(w)):
        raise NumericalError("density compensation diverged")

    # rescale fixed-point weights to k-space cell areas: the smoothed density
    # constraint carries a factor (kernel autocorrelation area) / (grid cells)
    scale = plan.kernel_area() / float(plan.grid_size**2)
    return DensityWeights(w * scale, residuals)
