"""Real fields sampled at (t, x, y) points."""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from riemann.errors import DomainError, InputError, point_str

COORDS = ("t", "x", "y")


def as_points(points) -> np.ndarray:
    """Coerce to an (N, 3) float array of (t, x, y) rows."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if points.shape[-1] != 3:
        raise InputError(
            f"Points must have 3 columns (t, x, y), got {points.shape}"
        )
    return points.reshape(-1, 3)


@dataclass(frozen=True)
class FieldEvaluator:
    """Vector field of named real components.

    Parameters
    ----------
    names : tuple[str, ...]
        Component names, in output column order.
    fn : Callable
        Maps an (N, 3) array of (t, x, y) to an (N, len(names)) array.
    periods : tuple, optional
        Period of each component, or None for non-periodic components.
        Periodic components are unwrapped when differenced.

    """

    names: tuple
    fn: Callable = field(repr=False)
    periods: Optional[tuple] = None

    def __call__(self, points) -> np.ndarray:
        """Values at (N, 3) points; non-finite values raise DomainError."""
        points = as_points(points)
        values = np.asarray(self.fn(points), dtype=float).reshape(
            len(points), len(self.names)
        )
        bad = ~np.all(np.isfinite(values), axis=1)
        if bad.any():
            raise DomainError(
                f"Non-finite field value at {point_str(points[bad][0])}"
            )
        return values

    @property
    def component_periods(self) -> tuple:
        """Period of each component, None where non-periodic."""
        return self.periods or (None,) * len(self.names)

    def select(self, names) -> "FieldEvaluator":
        """Restrict to a subset of components, in the given order."""
        try:
            idx = [self.names.index(n) for n in names]
        except ValueError as e:
            raise InputError(f"Field has no component among {names}") from e
        periods = self.component_periods
        return FieldEvaluator(
            tuple(names),
            lambda p: self.fn(p)[:, idx],
            tuple(periods[i] for i in idx),
        )

    def perturbed(self, name: str, offset: Callable) -> "FieldEvaluator":
        """Add ``offset(points)`` to one component."""
        k = self.names.index(name)

        def fn(points):
            values = np.array(self.fn(points), dtype=float)
            values[:, k] += offset(points)
            return values

        return FieldEvaluator(self.names, fn, self.periods)


def corrupt(
    field: FieldEvaluator, name: Optional[str] = None
) -> FieldEvaluator:
    """Inject the non-solution u + x^2 into a field (negative control)."""
    name = name or ("u" if "u" in field.names else field.names[0])
    return field.perturbed(name, lambda p: p[:, 1] ** 2)


def constant_field(names, values) -> FieldEvaluator:
    """Field equal to the same values everywhere."""
    values = np.asarray(values, dtype=float)
    return FieldEvaluator(
        tuple(names), lambda p: np.tile(values, (len(p), 1))
    )
