"""Streamlines of the velocity relative to a moving tool.

Curves solve dy/dx = (V0 - v) / (U0 - u), integrated in arc length as
the autonomous system dx/ds = (U0 - u)/|w|, dy/ds = (V0 - v)/|w| with
w = (U0 - u, V0 - v), which stays regular where U0 = u.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.spatial import cKDTree

from riemann.errors import DomainError, InputError, StagnationError

STAGNATION_SPEED = 1e-9
# unit-speed steps shorter than this fraction of ds mean the RK4 stages
# straddle a stagnation point
COLLAPSED_STEP = 0.5
DIRECTIONS = {"forward": (1.0,), "backward": (-1.0,), "both": (-1.0, 1.0)}

Velocity = Callable[[np.ndarray, np.ndarray], tuple]


@dataclass(frozen=True)
class StreamlineSeed:
    """Starting point and step control of one streamline.

    Parameters
    ----------
    start : tuple[float, float]
        Seed point (x, y).
    direction : str
        ``forward``, ``backward`` or ``both``.
    ds : float
        Arc-length step.
    s_max : float
        Maximum arc length traced in each direction.
    curve_id : str
        Identifier carried to the traced polyline.

    """

    start: tuple
    direction: str = "both"
    ds: float = 1e-3
    s_max: float = 10.0
    curve_id: str = ""

    def __post_init__(self) -> None:
        """Validate the direction and the step control."""
        if self.direction not in DIRECTIONS:
            raise InputError(
                f"Direction must be one of {sorted(DIRECTIONS)}, "
                f"got '{self.direction}'"
            )
        if not self.ds > 0:
            raise InputError(
                f"Arc-length step must be positive, got {self.ds}"
            )
        if not self.s_max > 0:
            raise InputError("Maximum arc length must be positive")
        object.__setattr__(self, "start", tuple(map(float, self.start)))


@dataclass(frozen=True, eq=False)
class Streamline:
    """Traced polyline with arc length and flow velocity at each vertex.

    ``termination`` holds the stop reason of the backward and forward
    branches (``length``, ``exit``, ``stagnation``, ``singular`` or
    ``None`` for an untraced direction).
    """

    curve_id: str
    s: np.ndarray
    points: np.ndarray
    velocity: np.ndarray
    U0: float
    V0: float
    termination: tuple = (None, None)

    def __len__(self) -> int:
        """Number of vertices."""
        return len(self.points)


def _relative_direction(velocity: Velocity, points, U0, V0):
    with np.errstate(all="ignore"):
        u, v = velocity(points[:, 0], points[:, 1])
        w = np.column_stack(
            [U0 - np.asarray(u, dtype=float), V0 - np.asarray(v, dtype=float)]
        )
        speed = np.hypot(w[:, 0], w[:, 1])
        return w / speed[:, None], speed


def _inside(points: np.ndarray, domain: Optional[Sequence[float]]):
    if domain is None:
        return np.ones(len(points), dtype=bool)
    xmin, xmax, ymin, ymax = domain
    return (
        (points[:, 0] >= xmin)
        & (points[:, 0] <= xmax)
        & (points[:, 1] >= ymin)
        & (points[:, 1] <= ymax)
    )


def _integrate(velocity, start, U0, V0, h, n_max, domain):
    """Vectorized RK4 for many rows until each one stops."""
    trails = [start.copy()]
    reasons = np.array(["length"] * len(start), dtype=object)
    active = np.ones(len(start), dtype=bool)
    last_step = np.zeros_like(start)

    for n in range(int(n_max.max(initial=0))):
        rows = active & (n < n_max)
        if not rows.any():
            break
        p, hh = trails[-1][rows], h[rows][:, None]
        u0, v0 = U0[rows], V0[rows]

        k1, _ = _relative_direction(velocity, p, u0, v0)
        k2, _ = _relative_direction(velocity, p + hh / 2 * k1, u0, v0)
        k3, _ = _relative_direction(velocity, p + hh / 2 * k2, u0, v0)
        k4, _ = _relative_direction(velocity, p + hh * k3, u0, v0)
        new = p + hh / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        _, speed = _relative_direction(velocity, new, u0, v0)

        step = new - p
        singular = ~np.all(np.isfinite(new), axis=1) | ~np.isfinite(speed)
        stagnant = ~singular & (
            (speed < STAGNATION_SPEED)
            | (np.hypot(*step.T) < COLLAPSED_STEP * np.abs(hh[:, 0]))
            | (np.einsum("ij,ij->i", step, last_step[rows]) < 0)
        )
        outside = ~singular & ~stagnant & ~_inside(new, domain)
        stop = singular | stagnant | outside

        idx = np.flatnonzero(rows)
        reasons[idx[singular]] = "singular"
        reasons[idx[stagnant]] = "stagnation"
        reasons[idx[outside]] = "exit"
        active[idx[stop]] = False

        trail = np.full_like(start, np.nan)
        trail[idx[~stop]] = new[~stop]
        last_step[idx[~stop]] = step[~stop]
        trails.append(trail)

    return np.stack(trails, axis=1), reasons


def trace_streamlines(
    velocity: Velocity,
    U0,
    V0,
    seeds: Sequence[StreamlineSeed],
    domain: Optional[Sequence[float]] = None,
) -> list[Streamline]:
    """Trace several streamlines at once.

    Parameters
    ----------
    velocity : Callable
        Maps x, y arrays to the flow velocity (u, v).
    U0, V0 : float or array_like
        Tool velocity, scalar or one value per seed.
    seeds : Sequence[StreamlineSeed]
        Seeds.
    domain : Sequence[float], optional
        ``(xmin, xmax, ymin, ymax)``; tracing stops on exit.

    Returns
    -------
    list[Streamline]
        One polyline per seed, ordered by increasing arc length.

    Raises
    ------
    StagnationError
        If a seed sits at a stagnation point of the relative flow.
    DomainError
        If the velocity is not finite at a seed.

    """
    seeds = list(seeds)
    if not seeds:
        return []
    U0 = np.broadcast_to(np.asarray(U0, dtype=float), (len(seeds),))
    V0 = np.broadcast_to(np.asarray(V0, dtype=float), (len(seeds),))
    starts = np.array([s.start for s in seeds], dtype=float)

    _, speed = _relative_direction(velocity, starts, U0, V0)
    for seed, sp in zip(seeds, speed):
        if not np.isfinite(sp):
            raise DomainError(f"Non-finite velocity at seed {seed.start}")
        if sp < STAGNATION_SPEED:
            raise StagnationError(
                f"Seed {seed.start} is a stagnation point of the relative flow"
            )

    rows = [
        (k, sign)
        for k, seed in enumerate(seeds)
        for sign in DIRECTIONS[seed.direction]
    ]
    index = np.array([k for k, _ in rows])
    sign = np.array([sg for _, sg in rows])
    ds = np.array([seeds[k].ds for k in index])
    n_max = np.array(
        [int(np.floor(seeds[k].s_max / seeds[k].ds + 1e-9)) for k in index]
    )
    trails, reasons = _integrate(
        velocity,
        starts[index],
        U0[index],
        V0[index],
        sign * ds,
        n_max,
        domain,
    )

    lines = []
    for k, seed in enumerate(seeds):
        pieces, s_pieces, stops = [], [], [None, None]
        for row in np.flatnonzero(index == k):
            trail = trails[row]
            trail = trail[np.all(np.isfinite(trail), axis=1)]
            s = seed.ds * np.arange(len(trail))
            if sign[row] < 0:
                pieces.insert(0, trail[:0:-1])
                s_pieces.insert(0, -s[:0:-1])
                stops[0] = reasons[row]
            else:
                pieces.append(trail)
                s_pieces.append(s)
                stops[1] = reasons[row]
        if seed.direction == "backward":
            pieces.append(starts[k][None, :])
            s_pieces.append(np.zeros(1))
        points = np.concatenate(pieces)
        u, v = velocity(points[:, 0], points[:, 1])
        lines.append(
            Streamline(
                curve_id=seed.curve_id,
                s=np.concatenate(s_pieces),
                points=points,
                velocity=np.column_stack(
                    np.broadcast_arrays(
                        np.asarray(u, dtype=float), np.asarray(v, dtype=float)
                    )
                ),
                U0=float(U0[k]),
                V0=float(V0[k]),
                termination=tuple(stops),
            )
        )
        logging.debug(
            f"Streamline {seed.curve_id or k}: {len(points)} points, "
            f"stopped by {stops}"
        )
    return lines


def trace_streamline(
    velocity: Velocity,
    U0: float,
    V0: float,
    seed: StreamlineSeed,
    domain: Optional[Sequence[float]] = None,
) -> Streamline:
    """Trace a single streamline; see :func:`trace_streamlines`."""
    return trace_streamlines(velocity, U0, V0, [seed], domain)[0]


def tangency_residual(line: Streamline) -> float:
    """Largest sine of the angle between polyline and relative velocity.

    The polyline tangent at each vertex with two neighbours on both
    sides is the 4th-order central difference of the vertices.
    """
    p = line.points
    if len(p) < 5:
        return 0.0
    tangent = (p[:-4] - 8 * p[1:-3] + 8 * p[3:-1] - p[4:]) / 12
    w = np.column_stack(
        [line.U0 - line.velocity[2:-2, 0], line.V0 - line.velocity[2:-2, 1]]
    )
    cross = np.abs(tangent[:, 0] * w[:, 1] - tangent[:, 1] * w[:, 0])
    norm = np.hypot(*tangent.T) * np.hypot(*w.T)
    return float(np.max(cross / norm))


def min_wall_distance(lines: Sequence[Streamline]) -> float:
    """Smallest distance between vertices of two distinct polylines."""
    if len(lines) < 2:
        raise InputError("Need at least two polylines")
    best = np.inf
    trees = [cKDTree(line.points) for line in lines]
    for i, line in enumerate(lines):
        for tree in trees[i + 1 :]:
            distance, _ = tree.query(line.points)
            best = min(best, float(np.min(distance)))
    return best
