import numpy as np
import pytest

from spiralflow.recon.nufft import GriddingPlan
from spiralflow.trajectory import AcquisitionSchedule, DensityProfile, design_spiral_arm


@pytest.fixture(scope="session")
def default_arm():
    return design_spiral_arm(192, DensityProfile(), 1024)


@pytest.fixture(scope="session")
def default_schedule():
    return AcquisitionSchedule()


@pytest.fixture(scope="session")
def plan32():
    return GriddingPlan(32)


def direct_dft(image, coords):
    """Brute-force DFT oracle: O(N^2 * M) direct summation."""
    n = image.shape[-1]
    u = np.arange(n) - n // 2
    ex = np.exp(-2j * np.pi * np.outer(coords[:, 0], u))
    ey = np.exp(-2j * np.pi * np.outer(coords[:, 1], u))
    return np.einsum("mu,mv,vu->m", ex, ey, image)
