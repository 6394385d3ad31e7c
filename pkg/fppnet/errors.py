"""Exception hierarchy for fppnet.

Every class also derives from the closest built-in exception so callers that
catch ``ValueError`` or ``ArithmeticError`` keep working.
"""

from typing import Any, Dict, Optional


class FppError(Exception):
    """Base class for all fppnet errors."""


class DomainError(FppError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConfigError(FppError, ValueError):
    """A configuration value is invalid or inconsistent."""


class ConvergenceError(FppError, ArithmeticError):
    """A numerical evaluation could not reach its tolerance."""


class NumericalError(FppError, ArithmeticError):
    """Non-finite values appeared during training or optimisation.

    Attributes:
        diagnostics: Context collected at the point of failure (epoch, loss, ...).
    """

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class ModelFormatError(FppError, ValueError):
    """A model file is corrupt, truncated or of an unsupported version."""


class DatasetFormatError(FppError, ValueError):
    """A dataset dump is corrupt or does not match its header."""


class IngestError(FppError, ValueError):
    """A timestamp source could not be turned into valid windows.

    Attributes:
        counts: Row accounting at the point of failure.
    """

    def __init__(self, message: str, counts: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.counts = counts or {}


__all__ = [
    "FppError",
    "DomainError",
    "ConfigError",
    "ConvergenceError",
    "NumericalError",
    "ModelFormatError",
    "DatasetFormatError",
    "IngestError",
]
