"""Exception types shared across the package.

Every error raised by the numerical modules names the module that owns the
violated precondition, the operation that raised, and (when meaningful) the
offending parameter, so callers -- the CLI in particular -- can serialize a
machine-readable record without parsing message strings.
"""

from __future__ import annotations


class WergmError(Exception):
    """Base class for all package-specific errors."""

    def __init__(
        self,
        message: str,
        *,
        module: str,
        operation: str,
        offending_parameter: str | None = None,
    ):
        super().__init__(message)
        self.module = module
        self.operation = operation
        self.offending_parameter = offending_parameter

    def record(self) -> dict:
        """Machine-readable form used by the CLI error path."""
        return {
            "module": self.module,
            "operation": self.operation,
            "message": str(self),
            "offending_parameter": self.offending_parameter,
        }


class InputValidationError(WergmError):
    """An argument is malformed (wrong type, wrong shape, out of admissible range)."""


class SupportError(WergmError):
    """A mean value lies outside the open interior of the weight support."""


class ThetaCapError(WergmError):
    """A tilt parameter exceeds, or a solve would require exceeding, the safe cap."""


class AttractiveRegionError(WergmError):
    """Parameters lie outside the attractive region (beta2 < 0) the theory covers."""


class GradientUndefinedError(WergmError):
    """The free energy is not differentiable here (two global maximizers)."""


class NoTwoPhaseRegionError(WergmError):
    """beta1 is not below its critical value, so no two-maximum region exists."""


class NonUnimodalError(WergmError):
    """A scan expected to be unimodal shows more than one local maximum."""


class BracketError(WergmError):
    """A root/maximum bracket could not be established or refined (internal)."""


class DivergenceError(WergmError):
    """Gaussian normalizing integral diverges (beta2 too close to 1/2)."""
