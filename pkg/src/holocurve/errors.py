"""Exception types shared across the package.

The CLI maps these onto its exit codes, so library code should raise the
most specific one that applies rather than bare ValueError where the
distinction matters (configuration vs. numerics).
"""
from __future__ import annotations


class HolocurveError(Exception):
    """Base class for package-specific errors."""


class ConfigError(HolocurveError, ValueError):
    """Bad run configuration (unknown key, unparsable value, ...).

    `line` is the 1-based line number in the config file when known.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DomainError(HolocurveError, ValueError):
    """Evaluation point outside the admissible domain (open unit disk)."""


class VanishingTangentError(HolocurveError, ValueError):
    """The curve's tangent vector vanished at an evaluation point."""


class NumericalError(HolocurveError, RuntimeError):
    """An internal numerical routine failed (ODE solver, bracketing, mesh)."""
