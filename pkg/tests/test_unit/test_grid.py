import numpy as np
import pytest

from riemann.errors import InputError
from riemann.verify.grid import Grid, disk_mask


def test_default_grid():
    grid = Grid.default()

    assert grid == Grid()
    assert grid.points().shape == (3 * 9 * 9, 3)
    assert grid.spacing() == pytest.approx((0.5, 0.25, 0.25))


def test_points_order():
    points = Grid(nt=3, nx=3, ny=3).points()
    assert np.all(points[:9, 0] == 0.0)
    assert points[-1].tolist() == [1.0, 1.0, 1.0]


def test_inactive_axis():
    grid = Grid(t_range=(0.5, 0.5), nt=1, nx=3, ny=3)
    assert np.all(grid.points()[:, 0] == 0.5)
    assert grid.spacing()[0] == 0.0


@pytest.mark.parametrize(
    "spec, nx, ny, nt",
    [
        (None, 9, 9, 3),
        ("default", 9, 9, 3),
        ("5x7", 5, 7, 3),
        ("5x7x1", 5, 7, 1),
        (" 11x11x5 ", 11, 11, 5),
    ],
)
def test_parse_counts(spec, nx, ny, nt):
    grid = Grid.parse(spec)
    assert (grid.nx, grid.ny, grid.nt) == (nx, ny, nt)
    assert grid.x_range == (-1.0, 1.0)


def test_parse_json_overrides_base():
    base = Grid.from_settings("wave_particle_grid")

    grid = Grid.parse('{"x": [1, 3, 5]}', base=base)

    assert grid.x_range == (1.0, 3.0)
    assert grid.nx == 5
    assert grid.y_range == base.y_range
    assert grid.nt == 1


@pytest.mark.parametrize(
    "spec, message",
    [
        ("fine", "Unrecognized"),
        ("[1, 2]", "object"),
        ('{"x": [0, 1]}', "start, stop, count"),
        ('{"z": [0, 1, 3]}', "Unknown grid axes"),
    ],
)
def test_parse_errors(spec, message):
    with pytest.raises(InputError, match=message):
        Grid.parse(spec)


@pytest.mark.parametrize(
    "kwargs, message",
    [
        ({"nx": 0}, ">= 1"),
        ({"nx": 2}, "at least"),
        ({"x_range": (1.0, -1.0)}, "reversed"),
        ({"x_range": (0.0, 1e-4), "nx": 3}, "too fine"),
    ],
)
def test_invalid_grids(kwargs, message):
    with pytest.raises(InputError, match=message):
        Grid(**kwargs)


def test_disk_mask():
    grid = Grid(t_range=(0.0, 0.0), nt=1, nx=5, ny=5).with_mask(
        disk_mask(lambda t: np.zeros_like(t, dtype=complex), 0.3)
    )

    points, masked = grid.masked()

    assert masked == 1
    assert len(points) == 24
    assert not np.any(np.all(points[:, 1:] == 0, axis=1))


def test_masks_combine():
    grid = (
        Grid(t_range=(0.0, 0.0), nt=1, nx=5, ny=5)
        .with_mask(lambda p: p[:, 1] < 0)
        .with_mask(lambda p: p[:, 2] < 0)
    )

    points, masked = grid.masked()

    assert masked == 25 - 9
    assert np.all(points[:, 1:] >= 0)
