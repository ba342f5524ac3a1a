"""Uniform (t, x, y) sampling grids with optional masks."""

import json
import re
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from riemann.errors import InputError
from riemann.settings import load_settings, setting

Mask = Callable[[np.ndarray], np.ndarray]
_COUNTS_RE = re.compile(r"^(\d+)x(\d+)(?:x(\d+))?$")
MIN_ACTIVE_COUNT = 3
STEP_FACTOR = 10


@dataclass(frozen=True)
class Grid:
    """Tensor grid over t, x and y.

    Parameters
    ----------
    t_range, x_range, y_range : tuple[float, float]
        Closed intervals; a degenerate interval makes the axis inactive.
    nt, nx, ny : int
        Point counts with uniform spacing.
    mask : Callable, optional
        Maps an (N, 3) array of points to a boolean array, True where a
        point is excluded.

    """

    t_range: tuple = (0.0, 1.0)
    x_range: tuple = (-1.0, 1.0)
    y_range: tuple = (-1.0, 1.0)
    nt: int = 3
    nx: int = 9
    ny: int = 9
    mask: Optional[Mask] = None

    def __post_init__(self) -> None:
        """Validate counts, ranges and spacing against the step."""
        step = setting("differences", "step")
        for axis, (lo, hi), n in self._axes():
            if int(n) != n or n < 1:
                raise InputError(f"Grid count for {axis} must be >= 1")
            if hi < lo:
                raise InputError(f"Grid range for {axis} is reversed")
            if n == 1:
                continue
            if n < MIN_ACTIVE_COUNT:
                raise InputError(
                    f"Active grid axis {axis} needs at least "
                    f"{MIN_ACTIVE_COUNT} points"
                )
            spacing = (hi - lo) / (n - 1)
            scale = max(1.0, abs(lo), abs(hi))
            if not spacing > STEP_FACTOR * step * scale:
                raise InputError(
                    f"Grid spacing {spacing:.3g} along {axis} is too fine "
                    "for the differencing step"
                )

    def _axes(self):
        return (
            ("t", self.t_range, self.nt),
            ("x", self.x_range, self.nx),
            ("y", self.y_range, self.ny),
        )

    @classmethod
    def default(cls) -> "Grid":
        """9x9 spatial points, 3 time samples on [0, 1] x [-1, 1]^2."""
        return cls.from_settings("grid")

    @classmethod
    def from_settings(cls, section: str = "grid") -> "Grid":
        """Grid from a section of the configured defaults."""
        cfg = load_settings()[section]
        return cls(
            t_range=tuple(cfg["t_range"]),
            x_range=tuple(cfg["x_range"]),
            y_range=tuple(cfg["y_range"]),
            nt=cfg["nt"],
            nx=cfg["nx"],
            ny=cfg["ny"],
        )

    @classmethod
    def parse(cls, spec: Optional[str], base: Optional["Grid"] = None):
        """Parse a grid specification.

        Accepted forms are ``default`` (the base grid), ``NXxNY`` or
        ``NXxNYxNT`` (base ranges with new counts) and a JSON object
        such as ``{"x": [0.5, 2, 17], "y": [-1, 1, 17]}`` whose axes
        override the base.
        """
        base = base or cls.from_settings()
        if spec is None or spec.strip() == "default":
            return base
        spec = spec.strip()
        match = _COUNTS_RE.match(spec)
        if match:
            nx, ny, nt = match.groups()
            return replace(
                base,
                nx=int(nx),
                ny=int(ny),
                nt=int(nt) if nt else base.nt,
            )
        try:
            document = json.loads(spec)
        except json.JSONDecodeError as e:
            raise InputError(
                f"Unrecognized grid specification '{spec}'"
            ) from e
        if not isinstance(document, dict):
            raise InputError("Grid JSON must be an object")
        changes = {}
        for axis in ("t", "x", "y"):
            if axis not in document:
                continue
            try:
                lo, hi, n = document[axis]
            except (TypeError, ValueError) as e:
                raise InputError(
                    f"Grid axis '{axis}' must be [start, stop, count]"
                ) from e
            changes[f"{axis}_range"] = (float(lo), float(hi))
            changes[f"n{axis}"] = int(n)
        unknown = set(document) - {"t", "x", "y"}
        if unknown:
            raise InputError(f"Unknown grid axes {sorted(unknown)}")
        return replace(base, **changes)

    def with_mask(self, mask: Mask) -> "Grid":
        """Grid additionally excluding the points selected by ``mask``."""
        if self.mask is None:
            return replace(self, mask=mask)
        previous = self.mask
        return replace(self, mask=lambda p: previous(p) | mask(p))

    def points(self) -> np.ndarray:
        """All grid points as an (N, 3) array, t varying slowest."""
        axes = [
            np.linspace(lo, hi, n) if n > 1 else np.array([lo])
            for _, (lo, hi), n in self._axes()
        ]
        t, x, y = np.meshgrid(*axes, indexing="ij")
        return np.column_stack([t.ravel(), x.ravel(), y.ravel()])

    def masked(self) -> tuple[np.ndarray, int]:
        """Unmasked points and the number of masked ones."""
        points = self.points()
        if self.mask is None:
            return points, 0
        excluded = np.asarray(self.mask(points), dtype=bool)
        return points[~excluded], int(excluded.sum())

    def spacing(self) -> tuple[float, float, float]:
        """Grid spacing per axis; zero on inactive axes."""
        return tuple(
            (hi - lo) / (n - 1) if n > 1 else 0.0
            for _, (lo, hi), n in self._axes()
        )


def disk_mask(center: Callable, radius: float) -> Mask:
    """Mask points within ``radius`` of a moving center.

    Parameters
    ----------
    center : Callable
        Maps an array of times to complex centers x + iy.
    radius : float
        Exclusion radius.

    """

    def mask(points: np.ndarray) -> np.ndarray:
        c = center(points[:, 0])
        return np.abs(points[:, 1] + 1j * points[:, 2] - c) < radius

    return mask
