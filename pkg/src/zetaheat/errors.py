"""Exception taxonomy shared across the library.

The CLI maps these to exit statuses: ValidationError -> 2,
AccuracyError -> 3, CoverageError / TransportError / IntegrityError -> 4.
"""


class ZetaHeatError(Exception):
    """Base class for all library errors."""


class DomainError(ZetaHeatError, ValueError):
    """Argument outside a function's mathematical domain."""


class ValidationError(ZetaHeatError):
    """Malformed input data or configuration."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"{message} (line {line})"
        super().__init__(message)
        self.line = line


class AccuracyError(ZetaHeatError):
    """A numerical routine could not meet its tolerance contract.

    Carries the best estimate obtained and the residual error indicator.
    """

    def __init__(self, message: str, best_estimate: float | None = None,
                 residual: float | None = None):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.residual = residual


class CoverageError(ZetaHeatError):
    """Requested computation exceeds the available zero data.

    ``max_available`` reports how far the data actually reaches (a height
    or a count, depending on the caller).
    """

    def __init__(self, message: str, max_available: float | None = None):
        super().__init__(message)
        self.max_available = max_available


class TransportError(ZetaHeatError):
    """Remote fetch failed and no usable cache entry exists."""


class IntegrityError(ZetaHeatError):
    """Cached or downloaded data failed checksum validation."""
