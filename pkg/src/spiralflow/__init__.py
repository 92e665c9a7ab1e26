"""Low-latency streaming reconstruction and beat-to-beat flow monitoring
for highly undersampled spiral phase-contrast MR."""

from . import errors, kernels, metrics, recon, trajectory

__version__ = "0.1.0"

__all__ = ["errors", "kernels", "metrics", "recon", "trajectory", "__version__"]
