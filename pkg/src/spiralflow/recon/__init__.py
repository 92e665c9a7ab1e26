"""Gridding reconstruction: NUFFT, density compensation, coil handling."""

from .coils import CoilMaps, coil_combine, estimate_coil_maps
from .dcf import DensityWeights, compute_dcf
from .maxwell import MaxwellTerms, maxwell_correct, wrap_phase
from .nufft import GriddingPlan, nufft_adjoint, nufft_forward
from .prep import center_crop, crop_normalize

__all__ = [
    "CoilMaps", "DensityWeights", "GriddingPlan", "MaxwellTerms",
    "center_crop", "coil_combine", "compute_dcf", "crop_normalize",
    "estimate_coil_maps", "maxwell_correct", "nufft_adjoint",
    "nufft_forward", "wrap_phase",
]
