"""Background phase removal by a low-order polynomial surface.

Concomitant-gradient ("Maxwell") phase errors are spatially quadratic; the
scanner-specific coefficients are supplied by configuration and subtracted
from the phase-difference map before velocity mapping.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def wrap_phase(phi):
    """Wrap radians into (-pi, pi]."""
    return np.pi - np.mod(np.pi - np.asarray(phi), 2.0 * np.pi)


@dataclass(frozen=True)
class MaxwellTerms:
    """2D polynomial coefficients up to quadratic order.

    Evaluated on normalized image coordinates x, y in [-1, 1]:
    ``c0 + cx*x + cy*y + cxx*x^2 + cxy*x*y + cyy*y^2`` (radians).
    """

    c0: float = 0.0
    cx: float = 0.0
    cy: float = 0.0
    cxx: float = 0.0
    cxy: float = 0.0
    cyy: float = 0.0

    def surface(self, shape: tuple[int, int]) -> np.ndarray:
        ny, nx = shape
        x = ((np.arange(nx) - nx // 2) / (nx / 2.0))[None, :]
        y = ((np.arange(ny) - ny // 2) / (ny / 2.0))[:, None]
        return (self.c0 + self.cx * x + self.cy * y
                + self.cxx * x * x + self.cxy * x * y + self.cyy * y * y)


def maxwell_correct(phase: np.ndarray, terms: MaxwellTerms) -> np.ndarray:
    """Subtract the polynomial surface from a phase image, re-wrapped."""
    phase = np.asarray(phase, dtype=np.float64)
    return wrap_phase(phase - terms.surface(phase.shape[-2:]))
