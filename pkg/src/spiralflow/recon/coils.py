"""Coil-sensitivity estimation and matched-filter combination.

Maps are estimated in the adaptive (Walsh-style) fashion: the per-pixel
coil covariance is accumulated over the calibration frames, smoothed over
a local window, and the dominant eigenvector taken as the sensitivity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.ndimage import uniform_filter

from ..errors import InputError


@dataclass(frozen=True)
class CoilMaps:
    """Per-coil complex sensitivities, unit-norm across coils where valid."""

    maps: np.ndarray  # (ncoil, n, n) complex

    @property
    def n_coils(self) -> int:
        return self.maps.shape[0]

    def validate(self, floor: float = 1e-6):
        rss = np.sqrt((np.abs(self.maps) ** 2).sum(axis=0))
        live = rss > floor
        if live.any() and not np.allclose(rss[live], 1.0, atol=1e-3):
            raise InputError("map magnitudes are not unit-norm across coils")


def estimate_coil_maps(frames: np.ndarray, smoothing: int = 8,
                       floor_fraction: float = 0.05) -> CoilMaps:
    """Adaptive sensitivity maps from calibration frames.

    frames : (nframe, ncoil, n, n) complex gridded per-coil images.
    Pixels whose root-sum-square magnitude falls below ``floor_fraction`` of
    the maximum get zero maps.  The per-pixel phase is referenced to the
    first coil (real, non-negative), which also fixes the global phase at
    the image center.
    """
    frames = np.asarray(frames, dtype=np.complex128)
    if frames.ndim != 4:
        raise InputError("expected frames shaped (nframe, ncoil, n, n)")
    if not np.any(frames):
        raise InputError("all-zero calibration data")
    nc = frames.shape[1]

    # covariance accumulated over frames, then smoothed per coil pair
    cov = np.einsum("fcxy,fdxy->xycd", frames, np.conj(frames))
    for c in range(nc):
        for d in range(nc):
            plane = cov[:, :, c, d]
            cov[:, :, c, d] = (uniform_filter(plane.real, smoothing)
                               + 1j * uniform_filter(plane.imag, smoothing))

    _, vecs = np.linalg.eigh(cov)
    maps = vecs[..., -1]  # dominant eigenvector, (n, n, ncoil)
    maps = np.moveaxis(maps, -1, 0)

    # reference phase to coil 0 and zero out low-signal pixels
    ref = maps[0]
    phase = np.where(np.abs(ref) > 0, ref / np.maximum(np.abs(ref), 1e-30), 1.0)
    maps = maps * np.conj(phase)[None]

    rss = np.sqrt((np.abs(frames) ** 2).sum(axis=1)).mean(axis=0)
    live = rss > floor_fraction * rss.max()
    maps = np.where(live[None], maps, 0.0)

    norm = np.sqrt((np.abs(maps) ** 2).sum(axis=0))
    maps = np.where(norm[None] > 0, maps / np.maximum(norm, 1e-30)[None], 0.0)
    return CoilMaps(maps)


def coil_combine(per_coil: np.ndarray, maps: CoilMaps) -> np.ndarray:
    """Matched-filter combination ``sum_c conj(s_c) * x_c``."""
    per_coil = np.asarray(per_coil)
    if per_coil.shape != maps.maps.shape:
        raise InputError(f"image stack {per_coil.shape} does not match maps "
                         f"{maps.maps.shape}")
    return np.einsum("cxy,cxy->xy", np.conj(maps.maps), per_coil)
