"""Exception types shared across the package."""


class SpiralFlowError(Exception):
    """Base class for all package errors."""


class ConfigurationError(SpiralFlowError):
    """Invalid design or run configuration."""


class InputError(SpiralFlowError):
    """Malformed or inconsistent data passed to an operation."""


class NumericalError(SpiralFlowError):
    """An iterative scheme degenerated (non-finite values, singular input)."""


class WeightsError(SpiralFlowError):
    """Model weights file is corrupt or does not match the architecture."""


class WireError(SpiralFlowError):
    """Wire-protocol violation; carries a diagnostic code and byte offset."""

    def __init__(self, code: str, message: str, offset: int | None = None):
        super().__init__(message)
        self.code = code
        self.offset = offset
