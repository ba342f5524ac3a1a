import json

import numpy as np
import pytest

from riemann.errors import ConfigError, EvaluationError, InputError
from riemann.systems.registry import (
    available_systems,
    builtin_system,
    load_system,
)
from riemann.systems.spec import as_real, eval_system, parse_system_config


def test_available_systems():
    assert available_systems() == [
        "plasticity-full",
        "plasticity-reduced",
        "plasticity-subsystem",
        "wave-particle",
    ]


@pytest.mark.parametrize(
    "name, shape",
    [
        ("plasticity-subsystem", (2, 4, 3)),
        ("plasticity-full", (3, 4, 5)),
        ("plasticity-reduced", (2, 5, 7)),
        ("wave-particle", (2, 2, 2)),
    ],
)
def test_builtin_shapes(name, shape):
    sys = builtin_system(name)
    assert (sys.p, sys.q, sys.m) == shape
    assert len(sys.equations) == sys.m
    assert len(sys.A) == sys.p
    assert all(len(row) == sys.q for matrix in sys.A for row in matrix)


def test_homogeneity(subsystem, wave_particle_system):
    assert subsystem.is_homogeneous
    assert not wave_particle_system.is_homogeneous


def test_wave_particle_source(wave_particle_system):
    _, b = eval_system(wave_particle_system, [0.0, np.pi])
    assert b[0] == pytest.approx(np.sqrt(2))
    assert abs(b[1]) < 1e-15


def test_constants_override():
    sys = builtin_system("wave-particle", constants={"a": 2.0})
    _, b = eval_system(sys, [0.0, np.pi])
    assert b[0] == pytest.approx(2 * np.sqrt(2))


def test_unknown_constant_is_rejected():
    with pytest.raises(InputError, match="no constant"):
        builtin_system("wave-particle", constants={"rho": 1.0})


def test_potential_gradient_enters_momentum_sources():
    sys = builtin_system("plasticity-full", potential="x*y*exp(-t)")
    _, b = eval_system(sys, [0.0, 0.0, 0.0, 0.0], (0.0, 0.5, 2.0))
    assert b[0].real == pytest.approx(-2.0, abs=1e-8)
    assert b[1].real == pytest.approx(-0.5, abs=1e-8)


def test_parse_custom_document(scalar_document):
    sys = parse_system_config(scalar_document)

    A, b = eval_system(sys, [3.0], (2.0, 0.0))

    assert sys.coords == ("x", "y")
    assert sys.equations == ("eq1",)
    assert A[1][0, 0] == 2.0
    assert b[0] == 3.0


def test_entries_depending_on_coordinates_need_a_point(scalar_document):
    sys = parse_system_config(scalar_document)
    with pytest.raises(EvaluationError, match="Unbound"):
        eval_system(sys, [1.0])


@pytest.mark.parametrize(
    "change, message",
    [
        ({"q": 2}, "'vars' has 1 names"),
        ({"A": [[["1"]]]}, "'A' must hold p=2"),
        ({"A": [[["1"]], [["1", "0"]]]}, r"A\[1\] has shape 1x2"),
        ({"b": ["f", "f"]}, "'b' has 2 entries"),
        ({"b": ["g"]}, "b\\[0\\]"),
        ({"equations": ["one", "two"]}, "'equations' has 2 names"),
        ({"p": 0}, "positive integer"),
    ],
)
def test_schema_violations(scalar_document, change, message):
    with pytest.raises(ConfigError, match=message):
        parse_system_config({**scalar_document, **change})


def test_missing_keys(scalar_document):
    del scalar_document["b"]
    with pytest.raises(ConfigError, match="Missing keys: b"):
        parse_system_config(scalar_document)


def test_load_system_from_file(tmp_path, scalar_document):
    path = tmp_path / "scalar.json"
    path.write_text(json.dumps(scalar_document))

    assert load_system(str(path)).name == "scalar"
    assert load_system("builtin:wave-particle").name == "wave-particle"


@pytest.mark.parametrize("source", ["builtin:navier-stokes", "missing.json"])
def test_load_system_errors(source):
    with pytest.raises(InputError):
        load_system(source)


def test_wrong_number_of_unknowns(subsystem):
    with pytest.raises(InputError, match="Expected 4 unknowns"):
        eval_system(subsystem, [0.0, 0.0])


def test_as_real():
    assert as_real(1.0 + 1e-15j) == 1.0
    with pytest.raises(EvaluationError, match="imaginary"):
        as_real(1.0 + 1e-3j, "slope")
