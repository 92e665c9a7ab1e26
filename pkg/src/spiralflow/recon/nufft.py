"""Non-uniform FFT by Kaiser-Bessel gridding.

The forward transform evaluates the DFT of an ``n x n`` image at arbitrary
k-space coordinates (normalized cycles/pixel in ``[-0.5, 0.5]``) via a
2x-oversampled FFT followed by Kaiser-Bessel interpolation; the adjoint is
its exact conjugate transpose with an optional diagonal of density weights.

Conventions
-----------
A coordinate ``(kx, ky)`` pairs ``kx`` with the image column index and
``ky`` with the row index, both centered::

    S(k) = sum_{uy, ux} image[uy, ux] * exp(-2j*pi*(kx*ux + ky*uy))

with ``ux, uy`` in ``[-n/2, n/2)``.  ``nufft_forward`` matches this direct
sum to about 1e-3 relative error at the default kernel settings (width 4,
oversampling 2.0, Beatty beta).
"""

from __future__ import annotations

import numpy as np

from .. import kernels
from ..errors import InputError


def kaiser_bessel_beta(width: int, oversampling: float) -> float:
    """Beatty et al. choice of the Kaiser-Bessel shape parameter."""
    s = oversampling
    return np.pi * np.sqrt((width / s) ** 2 * (s - 0.5) ** 2 - 0.8)


def _kb_table(width: int, beta: float, n_entries: int) -> np.ndarray:
    """Kernel values on ``n_entries`` points over distance [0, width/2]."""
    d = np.linspace(0.0, width / 2.0, n_entries)
    arg = 1.0 - (2.0 * d / width) ** 2
    arg[arg < 0.0] = 0.0
    return np.i0(beta * np.sqrt(arg)) / width


def _kb_apodization(n: int, grid_size: int, width: int, beta: float) -> np.ndarray:
    """Fourier transform of the kernel at centered image positions u/G."""
    u = np.arange(n) - n // 2
    y = np.pi * width * u / grid_size
    arg = beta**2 - y**2
    # never crosses zero for width/oversampling used here; guard anyway
    out = np.where(
        arg > 0,
        np.sinh(np.sqrt(np.abs(arg))) / np.sqrt(np.abs(arg)),
        np.sinc(np.sqrt(np.abs(arg)) / np.pi),
    )
    return out


def validate_coords(coords: np.ndarray) -> np.ndarray:
    coords = np.asarray(coords, dtype=np.float64)
    if coords.ndim != 2 or coords.shape[1] != 2:
        raise InputError(f"coords must have shape (n, 2), got {coords.shape}")
    if coords.size and np.abs(coords).max() > 0.5 + 1e-9:
        raise InputError("k-space coordinates must lie in [-0.5, 0.5]^2")
    return coords


class GriddingPlan:
    """Precomputed kernel table, apodization and grid geometry.

    Immutable after construction; shareable across threads.  All transform
    methods accept single images ``(n, n)`` or channel stacks
    ``(nchan, n, n)`` and sample vectors shaped accordingly.
    """

    def __init__(self, n: int, oversampling: float = 2.0, kernel_width: int = 4,
                 table_size: int = 4096):
        if n < 4:
            raise InputError("grid size must be at least 4")
        if kernel_width > kernels.MAX_KERNEL_WIDTH:
            raise InputError(f"kernel width {kernel_width} exceeds {kernels.MAX_KERNEL_WIDTH}")
        self.n = int(n)
        self.oversampling = float(oversampling)
        self.width = int(kernel_width)
        self.grid_size = int(round(n * oversampling))
        self.beta = kaiser_bessel_beta(self.width, self.oversampling)
        self.table = _kb_table(self.width, self.beta, table_size)
        self.table_scale = (table_size - 1) / (self.width / 2.0)
        apod1d = _kb_apodization(self.n, self.grid_size, self.width, self.beta)
        self.apod2d = np.outer(apod1d, apod1d)
        self._pad = (self.grid_size - self.n) // 2

    def _positions(self, coords: np.ndarray) -> np.ndarray:
        g = self.grid_size
        pos = np.empty_like(coords)
        pos[:, 0] = coords[:, 0] * g + g // 2
        pos[:, 1] = coords[:, 1] * g + g // 2
        return np.ascontiguousarray(pos)

    def forward(self, image: np.ndarray, coords: np.ndarray) -> np.ndarray:
        """DFT samples of ``image`` at ``coords``; (nchan, nsamp) for stacks."""
        coords = validate_coords(coords)
        image = np.asarray(image)
        single = image.ndim == 2
        img = np.ascontiguousarray(image[None] if single else image, dtype=np.complex128)
        if img.shape[-1] != self.n or img.shape[-2] != self.n:
            raise InputError(f"image must be {self.n}x{self.n}, got {img.shape[-2:]}")
        g, p = self.grid_size, self._pad
        work = np.zeros((img.shape[0], g, g), dtype=np.complex128)
        work[:, p:p + self.n, p:p + self.n] = img / self.apod2d
        grid = np.fft.fftshift(np.fft.fft2(np.fft.ifftshift(work, axes=(-2, -1))), axes=(-2, -1))
        grid = np.ascontiguousarray(grid)
        out = kernels.grid_interp(self._positions(coords), grid, self.table,
                                  self.width, self.table_scale)
        return out[0] if single else out

    def adjoint(self, samples: np.ndarray, coords: np.ndarray,
                weights: np.ndarray | None = None) -> np.ndarray:
        """Exact adjoint of :meth:`forward`, with optional density weights."""
        coords = validate_coords(coords)
        samples = np.asarray(samples)
        single = samples.ndim == 1
        vals = np.ascontiguousarray(samples[None] if single else samples, dtype=np.complex128)
        if vals.shape[-1] != coords.shape[0]:
            raise InputError(f"{vals.shape[-1]} samples for {coords.shape[0]} coordinates")
        if weights is not None:
            weights = np.asarray(weights, dtype=np.float64)
            if weights.shape != (coords.shape[0],):
                raise InputError("weights must be one value per sample")
            vals = vals * weights
        g, p = self.grid_size, self._pad
        grid = np.zeros((vals.shape[0], g, g), dtype=np.complex128)
        kernels.grid_spread(self._positions(coords), vals, grid, self.table,
                            self.width, self.table_scale)
        img = np.fft.fftshift(np.fft.ifft2(np.fft.ifftshift(grid, axes=(-2, -1))),
                              axes=(-2, -1)) * (g * g)
        img = img[:, p:p + self.n, p:p + self.n] / self.apod2d
        return img[0] if single else img

    def spread_interp(self, coords: np.ndarray, values: np.ndarray) -> np.ndarray:
        """Grid then regrid a sample cloud (no FFT): the C^H C map used by DCF."""
        coords = validate_coords(coords)
        single = values.ndim == 1
        vals = np.ascontiguousarray(values[None] if single else values, dtype=np.complex128)
        g = self.grid_size
        grid = np.zeros((vals.shape[0], g, g), dtype=np.complex128)
        pos = self._positions(coords)
        kernels.grid_spread(pos, vals, grid, self.table, self.width, self.table_scale)
        out = kernels.grid_interp(pos, grid, self.table, self.width, self.table_scale)
        return out[0] if single else out

    def kernel_area(self) -> float:
        """Integral of the 2D kernel autocorrelation, for DCF normalization."""
        c1 = np.sinh(self.beta) / self.beta
        return float(c1**4)


def nufft_forward(image: np.ndarray, coords: np.ndarray,
                  plan: GriddingPlan | None = None) -> np.ndarray:
    """Evaluate the DFT of ``image`` at arbitrary normalized coordinates."""
    if plan is None:
        plan = GriddingPlan(np.asarray(image).shape[-1])
    return plan.forward(image, coords)


def nufft_adjoint(samples: np.ndarray, coords: np.ndarray, grid_size: int,
                  weights: np.ndarray | None = None,
                  plan: GriddingPlan | None = None) -> np.ndarray:
    """Adjoint transform onto an ``n x n`` image, weights applied as a diagonal."""
    if plan is None:
        plan = GriddingPlan(grid_size)
    elif plan.n != grid_size:
        raise InputError("plan grid size does not match requested size")
    return plan.adjoint(samples, coords, weights)
