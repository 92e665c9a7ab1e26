"""Center cropping and block magnitude normalization."""

from __future__ import annotations

import warnings

import numpy as np

from ..errors import InputError


def center_crop(image: np.ndarray, crop: int) -> np.ndarray:
    """Center crop the trailing two axes to ``crop x crop``."""
    ny, nx = image.shape[-2:]
    if crop > ny or crop > nx:
        raise InputError(f"crop {crop} exceeds image size {image.shape[-2:]}")
    oy = (ny - crop) // 2
    ox = (nx - crop) // 2
    return image[..., oy:oy + crop, ox:ox + crop]


def crop_normalize(image: np.ndarray, crop: int) -> tuple[np.ndarray, float]:
    """Center crop, then scale so peak magnitude is 1.

    Returns ``(cropped/scale, scale)``; the scale is the peak magnitude of
    the cropped block (1.0 for an all-zero block, with a warning).  Phase is
    untouched.
    """
    out = center_crop(np.asarray(image), crop)
    scale = float(np.max(np.abs(out))) if out.size else 0.0
    if scale == 0.0:
        warnings.warn("all-zero block: unit normalization scale", stacklevel=2)
        return out.copy(), 1.0
    return out / scale, scale
