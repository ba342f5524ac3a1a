"""Central finite differences of sampled fields."""

import logging
from typing import Optional, Sequence

import numpy as np

from riemann.errors import DomainError, InputError
from riemann.settings import setting
from riemann.solutions.fields import FieldEvaluator, as_points

# offsets and weights of first-derivative stencils
FIRST_DERIVATIVE = {
    "central-2nd": (np.array([-1.0, 1.0]), np.array([-0.5, 0.5])),
    "central-4th": (
        np.array([-2.0, -1.0, 1.0, 2.0]),
        np.array([1.0, -8.0, 8.0, -1.0]) / 12.0,
    ),
}
# 4th-order second derivative, center included
SECOND_DERIVATIVE = (
    np.array([-2.0, -1.0, 0.0, 1.0, 2.0]),
    np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0,
)


def _resolve(scheme: Optional[str], step: Optional[float]) -> tuple:
    scheme = scheme or setting("differences", "scheme")
    if scheme not in FIRST_DERIVATIVE:
        raise InputError(
            f"Unknown scheme '{scheme}'; expected {sorted(FIRST_DERIVATIVE)}"
        )
    step = step or setting("differences", "step")
    return scheme, step


def step_sizes(points: np.ndarray, step: float) -> np.ndarray:
    """Per-point, per-axis steps, relative to the coordinate scale."""
    return step * np.maximum(1.0, np.abs(points))


def _unwrap(values: np.ndarray, center: np.ndarray, periods) -> np.ndarray:
    """Shift periodic components to the branch of the stencil center."""
    values = values.copy()
    for k, period in enumerate(periods):
        if period is not None:
            delta = values[..., k] - center[..., k]
            values[..., k] -= period * np.round(delta / period)
    return values


def _evaluate_batches(field: FieldEvaluator, stencils: np.ndarray):
    """Evaluate (N, S, 3) stencil points; failed rows come back as None."""
    n, s, _ = stencils.shape
    try:
        values = field(stencils.reshape(-1, 3))
        return values.reshape(n, s, -1), np.zeros(n, dtype=bool)
    except DomainError:
        pass

    # retry point by point to isolate the failures
    out = np.full((n, s, len(field.names)), np.nan)
    failed = np.zeros(n, dtype=bool)
    for i in range(n):
        try:
            out[i] = field(stencils[i])
        except DomainError as e:
            logging.debug(f"Stencil evaluation failed: {e}")
            failed[i] = True
    return out, failed


def jacobians(
    field: FieldEvaluator,
    points,
    scheme: Optional[str] = None,
    step: Optional[float] = None,
    axes: Sequence[int] = (0, 1, 2),
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Field values and Jacobians at many points.

    Parameters
    ----------
    field : FieldEvaluator
        Field to differentiate.
    points : array_like
        (N, 3) array of (t, x, y) points.
    scheme : str, optional
        ``"central-2nd"`` or ``"central-4th"`` (default).
    step : float, optional
        Relative step; defaults to 1e-4.
    axes : Sequence[int]
        Coordinate columns to differentiate along.

    Returns
    -------
    tuple[np.ndarray, np.ndarray, np.ndarray]
        Values (N, q), Jacobians (N, q, len(axes)) and a boolean array
        marking points whose stencil could not be evaluated.

    """
    scheme, step = _resolve(scheme, step)
    points = as_points(points)
    offsets, weights = FIRST_DERIVATIVE[scheme]
    h = step_sizes(points, step)

    shifts = [np.zeros((len(points), 3))]
    for axis in axes:
        for o in offsets:
            shift = np.zeros((len(points), 3))
            shift[:, axis] = o * h[:, axis]
            shifts.append(shift)
    stencils = points[:, None, :] + np.stack(shifts, axis=1)

    values, failed = _evaluate_batches(field, stencils)
    center = values[:, 0, :]
    values = _unwrap(values, center[:, None, :], field.component_periods)

    n_off = len(offsets)
    J = np.empty((len(points), len(field.names), len(axes)))
    for a, axis in enumerate(axes):
        block = values[:, 1 + a * n_off : 1 + (a + 1) * n_off, :]
        J[:, :, a] = np.einsum("nsq,s->nq", block, weights) / h[:, axis, None]
    return center, J, failed


def numeric_jacobian(
    field: FieldEvaluator,
    point,
    scheme: Optional[str] = None,
    step: Optional[float] = None,
) -> Optional[np.ndarray]:
    """Matrix of partial derivatives of a field at one (t, x, y) point.

    Returns
    -------
    np.ndarray or None
        (q, 3) array of derivatives with respect to t, x and y, or None
        (the masked-point marker) when the stencil leaves the domain.

    """
    _, J, failed = jacobians(field, [point], scheme, step)
    return None if failed[0] else J[0]


def second_derivatives(
    field: FieldEvaluator,
    points,
    step: Optional[float] = None,
) -> tuple[dict, np.ndarray]:
    """4th-order first and second x, y derivatives of a scalar field.

    Returns
    -------
    tuple[dict, np.ndarray]
        Arrays keyed ``f, f_x, f_y, f_xx, f_yy, f_xy`` and the boolean
        array of failed points.

    """
    if len(field.names) != 1:
        raise InputError("Second derivatives need a scalar field")
    _, step = _resolve(None, step)
    points = as_points(points)
    h = step_sizes(points, step)
    offsets2, weights2 = SECOND_DERIVATIVE
    offsets1, weights1 = FIRST_DERIVATIVE["central-4th"]

    shifts = []
    for axis in (1, 2):
        for o in offsets2:
            shifts.append((axis, o, None, 0.0))
    for ox in offsets1:
        for oy in offsets1:
            shifts.append((1, ox, 2, oy))

    stencil = np.repeat(points[:, None, :], len(shifts), axis=1)
    for s, (a1, o1, a2, o2) in enumerate(shifts):
        stencil[:, s, a1] += o1 * h[:, a1]
        if a2 is not None:
            stencil[:, s, a2] += o2 * h[:, a2]

    values, failed = _evaluate_batches(field, stencil)
    center = values[:, 2:3, :]
    values = _unwrap(values, center, field.component_periods)[..., 0]

    n2 = len(offsets2)
    fx_block, fy_block = values[:, :n2], values[:, n2 : 2 * n2]
    mixed = values[:, 2 * n2 :].reshape(len(points), len(offsets1), -1)
    hx, hy = h[:, 1], h[:, 2]
    first_x = dict(zip(offsets2, fx_block.T))
    first_y = dict(zip(offsets2, fy_block.T))

    def first(samples: dict, hh: np.ndarray) -> np.ndarray:
        return sum(
            w * samples[o] for o, w in zip(offsets1, weights1)
        ) / hh

    result = {
        "f": fx_block[:, 2],
        "f_x": first(first_x, hx),
        "f_y": first(first_y, hy),
        "f_xx": fx_block @ weights2 / hx**2,
        "f_yy": fy_block @ weights2 / hy**2,
        "f_xy": np.einsum("nij,i,j->n", mixed, weights1, weights1)
        / (hx * hy),
    }
    return result, failed
