"""Error types and user-facing error handling."""

import logging
import traceback
from typing import Any, Dict, List, Optional, Sequence

from pydantic import ValidationError


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_COMPUTE = 3


class MieBoundError(Exception):
    """Exception with a user-facing message and a CLI exit code."""

    exit_code: int = EXIT_COMPUTE

    def __init__(self, user_message: str, technical_message: Optional[str] = None):
        """Initialize with user and technical messages."""
        self.user_message = user_message
        self.technical_message = technical_message or user_message
        super().__init__(self.technical_message)


# Usage errors
class UsageError(MieBoundError):
    """Malformed command line or option values."""

    exit_code = EXIT_USAGE


class DomainError(MieBoundError, ValueError):
    """Physical input outside the admissible domain."""

    exit_code = EXIT_USAGE


class ConversionError(DomainError):
    """No conversion path, or quantities from different unit systems."""


# Data errors
class DataError(MieBoundError):
    """Registry file could not be parsed or validated."""

    exit_code = EXIT_DATA


class MoleculeNotFoundError(DataError, KeyError):
    """Requested molecule is absent from the registry."""

    def __init__(
        self, name: str, available: Sequence[str], suggestions: Sequence[str]
    ):
        """Initialize with the lookup name and registry contents."""
        self.name = name
        self.available: List[str] = list(available)
        self.suggestions: List[str] = list(suggestions)
        message = f"Unknown molecule '{name}'"
        if self.suggestions:
            message += f"; did you mean: {', '.join(self.suggestions)}?"
        message += f" Available: {', '.join(self.available) or '(none)'}"
        super().__init__(message)

    def __str__(self) -> str:
        return self.technical_message


# Compute errors
class ComputeError(MieBoundError):
    """Numerical computation failed."""

    exit_code = EXIT_COMPUTE


class PotentialSaturationError(ComputeError):
    """Potential overflows near the origin."""


class BoundaryContaminationError(ComputeError):
    """Oracle state is not bound on the chosen domain."""

    def __init__(self, n: int, ell: int, detail: str):
        """Initialize with the offending state."""
        self.n = n
        self.ell = ell
        super().__init__(
            f"State (n={n}, l={ell}) is not bound on the solver domain",
            f"Boundary contamination for (n={n}, l={ell}): {detail}",
        )


class QuadratureError(ComputeError):
    """Quadrature did not reach the requested accuracy."""

    def __init__(self, message: str, estimate: float, error_estimate: float):
        """Initialize with the achieved estimate."""
        self.estimate = estimate
        self.error_estimate = error_estimate
        super().__init__(
            message,
            f"{message} (estimate={estimate!r}, error={error_estimate!r})",
        )


class VerificationFailure(ComputeError):
    """One or more states failed closed-form vs oracle comparison."""

    def __init__(self, failed: int, total: int):
        """Initialize with failure counts."""
        self.failed = failed
        self.total = total
        super().__init__(f"{failed} of {total} states failed verification")


def get_user_friendly_error(error: Exception) -> str:
    """Convert technical errors to user-facing messages."""
    if isinstance(error, MieBoundError):
        return error.user_message
    if isinstance(error, ValidationError):
        return f"Invalid input: {error.errors()[0]['msg']}"

    error_mappings = {
        "FileNotFoundError": "The requested file could not be found.",
        "PermissionError": "Permission denied. Please check file permissions.",
        "IsADirectoryError": "Expected a file but found a directory.",
        "MemoryError": "Not enough memory for the requested grid.",
        "LinAlgError": "The eigenvalue solver did not converge.",
    }

    error_type = type(error).__name__
    if error_type in error_mappings:
        return error_mappings[error_type]
    if isinstance(error, OSError):
        return "File system error occurred."

    return f"An unexpected error occurred: {error}"


def exit_code_for(error: Exception) -> int:
    """Map an exception onto the CLI exit-code contract."""
    if isinstance(error, MieBoundError):
        return error.exit_code
    if isinstance(error, ValidationError):
        return EXIT_USAGE
    if isinstance(error, OSError):
        return EXIT_DATA
    return EXIT_COMPUTE


def log_error(error: Exception, context: Optional[Dict[str, Any]] = None) -> None:
    """Log error with context for debugging."""
    error_info: Dict[str, Any] = {
        "error_type": type(error).__name__,
        "error_message": str(error),
        "traceback": traceback.format_exc(),
    }

    if context:
        error_info["context"] = context

    logger.error(f"Error occurred: {error_info}")


def handle_error(error: Exception, context: Optional[Dict[str, Any]] = None) -> str:
    """Handle error by logging and returning user-friendly message."""
    log_error(error, context)
    return get_user_friendly_error(error)
