import io
import json
import xml.etree.ElementTree as ET

import numpy as np
import pandas as pd
import pytest

from riemann.dieshop.design import (
    DieDesign,
    build_die_design,
    load_die_design,
    reproduce_figure,
)
from riemann.dieshop.io import (
    CSV_COLUMNS,
    design_dataframe,
    design_document,
    emit_die_design,
    write_die_design,
)
from riemann.dieshop.streamlines import Streamline, min_wall_distance
from riemann.errors import ConfigError, InputError
from riemann.solutions.params import PlasticityParams

SVG_NS = "{http://www.w3.org/2000/svg}"


@pytest.fixture(scope="module")
def fig1() -> DieDesign:
    return reproduce_figure("fig1")


@pytest.fixture(scope="module")
def fig2() -> DieDesign:
    return reproduce_figure("fig2")


@pytest.fixture()
def custom_config() -> dict:
    return {
        "params": {"family": "case-i", "c1": {"const": [1.0, 0.0]}},
        "feed": [5.95, 0.0],
        "exit": [24.05, 0.0],
        "domain": [1.0, 6.5, -1.5, 1.5],
        "walls": [[1.4875, 1.0]],
        "ds": 0.01,
        "s_max": 2.0,
    }


def test_fig1_parameters(fig1):
    assert fig1.params.family == "case-i"
    assert fig1.feed == (5.95, 0.0)
    assert fig1.exit == (24.05, 0.0)
    assert [len(g) for g in (fig1.walls, fig1.interior)] == [2, 9]
    assert [line.curve_id for line in fig1.inlet] == ["C1-1", "C1-2"]


def test_fig2_parameters(fig2):
    assert fig2.params.family == "case-ii"
    assert fig2.feed == (0.2, 0.2)
    assert fig2.exit == (0.2, -0.2)
    assert fig2.params.c3(0.0) == pytest.approx(-0.5)


@pytest.mark.parametrize("which", ["fig1", "fig2"])
def test_curves_follow_the_relative_flow(which, fig1, fig2):
    design = {"fig1": fig1, "fig2": fig2}[which]
    assert design.max_tangency_residual() <= 1e-6
    for _, line in design.curves():
        assert len(line) > 1


def test_fig1_axis_curves_stop_at_stagnation(fig1):
    # inlet and outlet seeds lie on x = U/4 and run into the axis
    for line in (*fig1.inlet, *fig1.outlet):
        spacing = np.hypot(*np.diff(line.points, axis=0).T)

        assert "stagnation" in line.termination
        assert np.all(spacing > 0.5 * np.min(np.abs(np.diff(line.s))))
        assert np.min(np.abs(line.points[:, 1])) < 1e-2


@pytest.mark.parametrize("which", ["fig1", "fig2"])
def test_walls_do_not_touch(which, fig1, fig2):
    design = {"fig1": fig1, "fig2": fig2}[which]
    assert min_wall_distance(design.walls) > 0


def test_fig1_is_mirror_symmetric(fig1):
    lines = {line.curve_id: line for line in fig1.interior}
    for k in range(1, 5):
        lower, upper = lines[f"flow-{k}"], lines[f"flow-{10 - k}"]
        assert len(lower) == len(upper)
        assert np.allclose(
            lower.points * [1, -1], upper.points, atol=1e-8, rtol=0
        )


def test_svg_groups_carry_curve_ids(fig1):
    root = ET.fromstring(emit_die_design(fig1, "svg"))

    ids = {g.get("id") for g in root.iter(f"{SVG_NS}g")}

    assert root.tag == f"{SVG_NS}svg"
    assert {line.curve_id for _, line in fig1.curves()} <= ids


def test_svg_is_reproducible(fig2):
    assert emit_die_design(fig2) == emit_die_design(fig2)


def test_csv(fig1):
    frame = pd.read_csv(io.StringIO(emit_die_design(fig1, "csv")))

    assert list(frame.columns) == CSV_COLUMNS
    assert len(frame) == sum(len(line) for _, line in fig1.curves())
    assert set(frame["curve_id"]) == {
        line.curve_id for _, line in fig1.curves()
    }
    expected = design_dataframe(fig1)[["x", "y"]].to_numpy()
    assert np.allclose(frame[["x", "y"]].to_numpy(), expected)


@pytest.mark.parametrize("fmt", ["svg", "csv", "json"])
def test_write(fig2, tmp_path, fmt):
    path = write_die_design(fig2, tmp_path / "out" / f"fig2.{fmt}", fmt)
    assert path.read_text() == emit_die_design(fig2, fmt)


def test_json(fig2):
    document = json.loads(emit_die_design(fig2, "json"))

    assert document == json.loads(json.dumps(design_document(fig2)))
    assert document["feed"] == [0.2, 0.2]
    assert [c["kind"] for c in document["curves"]][:2] == ["wall", "wall"]
    assert len(document["curves"][0]["points"]) == len(fig2.walls[0])


def test_unknown_format(fig2):
    with pytest.raises(InputError, match="Format"):
        emit_die_design(fig2, "png")


def test_empty_designs():
    empty = DieDesign(
        "empty", PlasticityParams(), 0.0, (0, 0), (0, 0), (0, 1, 0, 1)
    )
    blank = Streamline(
        "wall-1", np.zeros(0), np.zeros((0, 2)), np.zeros((0, 2)), 0, 0
    )

    with pytest.raises(InputError, match="no polylines"):
        emit_die_design(empty)
    with pytest.raises(InputError, match="empty"):
        emit_die_design(
            DieDesign(
                "blank",
                PlasticityParams(),
                0.0,
                (0, 0),
                (0, 0),
                (0, 1, 0, 1),
                walls=[blank],
            ),
            "csv",
        )


def test_custom_design(custom_config, tmp_path):
    path = tmp_path / "die.json"
    path.write_text(json.dumps(custom_config))

    from_mapping = build_die_design(custom_config, name="mine")
    from_file = load_die_design(str(path))

    assert from_mapping.name == "mine"
    assert from_file.name == "custom"
    assert [line.curve_id for _, line in from_file.curves()] == ["wall-1"]
    assert np.allclose(from_file.walls[0].points, from_mapping.walls[0].points)


def test_figure_defaults_can_be_overridden():
    overrides = {"interior": [], "inlet": [], "outlet": []}
    design = build_die_design(
        {"figure": "fig1", "ds": 0.01, "s_max": 2.0, **overrides}
    )
    assert design.name == "fig1"
    assert len(design.curves()) == 2


@pytest.mark.parametrize(
    "change, error",
    [
        ({"feed": None}, ConfigError),
        ({"domain": [1.0, 0.0, 0.0, 1.0]}, ConfigError),
        ({"walls": []}, ConfigError),
        ({"figure": "fig3"}, InputError),
    ],
)
def test_invalid_designs(custom_config, change, error):
    config = {**custom_config, **change}
    config = {k: v for k, v in config.items() if v is not None}
    with pytest.raises(error):
        build_die_design(config)


@pytest.mark.parametrize("source", ["{not json", "[1, 2]"])
def test_invalid_design_documents(source):
    with pytest.raises(ConfigError):
        load_die_design(source)
