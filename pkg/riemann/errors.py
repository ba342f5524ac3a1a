"""Exceptions raised across the package.

Input problems derive from :class:`InputError` and numerical failures
from :class:`NumericalError`; the command line maps them to exit codes
2 and 3 respectively.
"""

from typing import Any, Optional


class RiemannError(Exception):
    """Base class for all errors raised by riemann."""


class InputError(RiemannError, ValueError):
    """Malformed or inconsistent input."""


class ExpressionSyntaxError(InputError):
    """Expression text that cannot be parsed.

    Parameters
    ----------
    message : str
        Description of the problem.
    offset : int
        Byte offset in the source text where parsing failed.

    """

    def __init__(self, message: str, offset: int) -> None:
        """Attach the failure offset to the message."""
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class ConfigError(InputError):
    """Schema violation in a configuration document."""


class NumericalError(RiemannError, ArithmeticError):
    """Failure of a numerical procedure on valid input."""


class EvaluationError(NumericalError):
    """Expression evaluation produced no finite value."""


class DomainError(NumericalError):
    """Evaluation point outside the domain of a function or solution."""


class ConvergenceError(NumericalError):
    """An iteration did not converge.

    Parameters
    ----------
    message : str
        Description of the problem.
    last_iterate : Any, optional
        The last iterate reached before giving up.

    """

    def __init__(self, message: str, last_iterate: Any = None) -> None:
        """Keep the last iterate for inspection."""
        super().__init__(message)
        self.last_iterate = last_iterate


class StagnationError(NumericalError):
    """A streamline seed sits at a stagnation point."""


class DegenerateSystemError(NumericalError):
    """Every dispersion minor vanishes identically."""


def point_str(point: Optional[Any]) -> str:
    """Format an evaluation point for error messages."""
    if point is None:
        return "<unknown>"
    try:
        return "(" + ", ".join(f"{float(c):.6g}" for c in point) + ")"
    except TypeError:
        return str(point)
