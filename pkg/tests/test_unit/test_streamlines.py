import numpy as np
import pytest

from riemann.dieshop.streamlines import (
    Streamline,
    StreamlineSeed,
    min_wall_distance,
    tangency_residual,
    trace_streamline,
    trace_streamlines,
)
from riemann.errors import DomainError, InputError, StagnationError


def hyperbolic(x, y):
    return x, -y


def uniform(x, y):
    # relative velocity (0, 1) for a tool at rest
    return np.zeros_like(x), -np.ones_like(y)


def test_hyperbolic_flow_traces_hyperbola():
    seed = StreamlineSeed((1.0, 1.0), ds=2e-3, s_max=0.5, curve_id="h")

    line = trace_streamline(hyperbolic, 0.0, 0.0, seed)

    x, y = line.points.T
    assert np.max(np.abs(x * y - 1)) <= 1e-8
    assert tangency_residual(line) <= 1e-6
    assert line.curve_id == "h"
    assert line.termination == ("length", "length")


def test_uniform_flow_traces_a_line():
    seed = StreamlineSeed((0.0, 0.0), ds=0.1, s_max=1.0)

    line = trace_streamline(uniform, 0.0, 0.0, seed)

    assert len(line) == 21
    assert np.allclose(line.points[:, 0], 0.0)
    assert np.allclose(line.points[:, 1], np.linspace(-1, 1, 21))
    assert np.allclose(line.s, np.linspace(-1, 1, 21))
    assert np.allclose(line.velocity, [0.0, -1.0])
    assert tangency_residual(line) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize(
    "direction, s_range", [("forward", (0, 1)), ("backward", (-1, 0))]
)
def test_single_direction(direction, s_range):
    seed = StreamlineSeed((0.0, 0.0), direction=direction, ds=0.1, s_max=1)

    line = trace_streamline(uniform, 0.0, 0.0, seed)

    assert len(line) == 11
    assert line.s[0] == pytest.approx(s_range[0])
    assert line.s[-1] == pytest.approx(s_range[1])
    assert np.all(np.diff(line.s) > 0)


def test_tool_velocity_is_subtracted():
    # material at rest, tool moving along x: the curves are horizontal
    seed = StreamlineSeed((0.0, 0.3), ds=0.1, s_max=1.0)

    line = trace_streamline(
        lambda x, y: (np.zeros_like(x), np.zeros_like(y)), 2.0, 0.0, seed
    )

    assert np.allclose(line.points[:, 1], 0.3)


def test_exit_from_domain():
    seed = StreamlineSeed((0.0, 0.0), ds=0.01, s_max=5.0)

    line = trace_streamline(uniform, 0.0, 0.0, seed, (-1, 1, -0.5, 0.5))

    assert line.termination == ("exit", "exit")
    assert np.all(np.abs(line.points[:, 1]) <= 0.5)


def test_stagnation_seed():
    seed = StreamlineSeed((0.0, 0.0))
    with pytest.raises(StagnationError):
        trace_streamline(hyperbolic, 0.0, 0.0, seed)


def test_non_finite_velocity_at_seed():
    def singular(x, y):
        return 1 / x, np.zeros_like(y)

    with pytest.raises(DomainError):
        trace_streamline(singular, 0.0, 0.0, StreamlineSeed((0.0, 0.0)))


def test_per_seed_tool_velocities():
    seeds = [
        StreamlineSeed((0.0, 0.0), ds=0.1, s_max=1.0, curve_id="a"),
        StreamlineSeed((0.0, 0.0), ds=0.1, s_max=1.0, curve_id="b"),
    ]

    lines = trace_streamlines(
        lambda x, y: (np.zeros_like(x), np.zeros_like(y)),
        [1.0, 0.0],
        [0.0, 1.0],
        seeds,
    )

    assert [line.curve_id for line in lines] == ["a", "b"]
    assert np.allclose(lines[0].points[:, 1], 0.0)
    assert np.allclose(lines[1].points[:, 0], 0.0)
    assert trace_streamlines(uniform, 0.0, 0.0, []) == []


def test_min_wall_distance():
    seeds = [
        StreamlineSeed((0.0, 0.0), ds=0.1, s_max=1.0),
        StreamlineSeed((0.5, 0.0), ds=0.1, s_max=1.0),
    ]
    lines = trace_streamlines(uniform, 0.0, 0.0, seeds)

    assert min_wall_distance(lines) == pytest.approx(0.5)
    with pytest.raises(InputError, match="two polylines"):
        min_wall_distance(lines[:1])


def test_short_polyline_has_no_tangency_residual():
    line = Streamline(
        "short", np.zeros(2), np.zeros((2, 2)), np.ones((2, 2)), 0.0, 0.0
    )
    assert tangency_residual(line) == 0.0


@pytest.mark.parametrize(
    "kwargs, message",
    [
        ({"direction": "sideways"}, "Direction"),
        ({"ds": 0.0}, "step"),
        ({"s_max": -1.0}, "arc length"),
    ],
)
def test_seed_validation(kwargs, message):
    with pytest.raises(InputError, match=message):
        StreamlineSeed((0.0, 0.0), **kwargs)


def test_stops_on_approach_to_a_stagnation_point():
    # relative flow (5.95 - 4x, 4y) runs straight down x = 1.4875 into
    # the stagnation point on the axis
    def extrusion(x, y):
        return 4 * x, -4 * y

    ds = 6.26e-3
    seed = StreamlineSeed((1.4875, 0.5), direction="backward", ds=ds)

    line = trace_streamline(extrusion, 5.95, 0.0, seed)

    spacing = np.hypot(*np.diff(line.points, axis=0).T)
    assert line.termination == ("stagnation", None)
    assert len(line) < 0.5 / ds + 2
    assert np.all(spacing > ds / 2)
    assert abs(line.points[0, 1]) < ds
    assert tangency_residual(line) <= 1e-6
