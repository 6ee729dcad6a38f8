"""Domain-specific exceptions for the yoked surface toolkit."""

from __future__ import annotations

from typing import Any


class YokedSimError(Exception):
    """Base exception for toolkit domain issues."""

    @property
    def code(self) -> str:
        return type(self).__name__

    def to_payload(self) -> dict[str, Any]:
        """Machine-readable form written to stderr by the CLI."""

        return {"error": self.code, "message": str(self)}


class DivisibilityError(YokedSimError):
    """Raised when a side length is not divisible by 2**r."""


class DimensionError(YokedSimError):
    """Raised when a code dimension or side length is out of range."""


class ResourceGuardError(YokedSimError):
    """Raised when an exhaustive enumeration would exceed the configured budget."""


class LengthMismatchError(YokedSimError):
    """Raised when a vector does not match the expected length."""


class ParameterError(YokedSimError):
    """Raised when provided parameters are invalid or incomplete."""


class CircuitStructureError(YokedSimError):
    """Raised when a circuit lacks the structure an operation requires."""


class DecompositionError(YokedSimError):
    """Raised when a hyperedge cannot be expressed through existing graph edges."""


class UnreachableNodeError(YokedSimError):
    """Raised when a flagged detector cannot reach a partner or the boundary."""


class InfeasibleClassError(YokedSimError):
    """Raised when no matching with the requested observable parity exists."""


class EmptyInputError(YokedSimError):
    """Raised when an operation receives no samples."""


class DistributionMismatchError(YokedSimError):
    """Raised when a gap distribution does not fit the simulation config."""


class ScaleGuardError(YokedSimError):
    """Raised when a request exceeds the desk-scale simulation guards."""


class DegenerateDataError(YokedSimError):
    """Raised when fit data cannot constrain the model."""


class InfeasiblePlanError(YokedSimError):
    """Raised when no layout meets the requested target."""


class UnsupportedDimensionError(YokedSimError):
    """Raised when an outer code dimension is not simulated."""


class NotFoundError(YokedSimError):
    """Raised when requested run artifacts cannot be located."""
