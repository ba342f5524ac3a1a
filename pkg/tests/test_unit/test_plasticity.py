import numpy as np
import pytest

from riemann.errors import ConfigError, DomainError, InputError
from riemann.solutions.params import (
    ConstantCoefficient,
    DampedCoefficient,
    PlasticityParams,
    coefficient_from_dict,
    load_params,
    random_damped,
)
from riemann.solutions.plasticity import (
    PlasticitySolution,
    angle_mismatch,
    case_ii_theta,
    generic_kinematics,
    h_eval,
    kinematics,
    sigma_case_i,
    sigma_quadrature,
    wrap_theta,
)
from riemann.verify.residuals import separation_ode_residual


@pytest.mark.parametrize(
    "spec, t, expected",
    [
        (2.5, 1.0, 2.5),
        ({"const": [1.0, -2.0]}, 0.3, 1 - 2j),
        (
            {"damped": {"a": 2.0, "s": 1.0, "b": 1.0, "q": 0.5}},
            1.0,
            2 * np.exp(-1) + 1j * np.exp(-0.5),
        ),
        ({"expr": "t^2 + 1j"}, 2.0, 4 + 1j),
    ],
)
def test_coefficients(spec, t, expected):
    assert coefficient_from_dict(spec)(t) == pytest.approx(expected)


def test_coefficient_derivatives():
    damped = DampedCoefficient(2.0, 1.0, 1.0, 0.5)
    expression = coefficient_from_dict({"expr": "sin(t)"})

    assert damped.derivative(1.0) == pytest.approx(
        -2 * np.exp(-1) - 0.5j * np.exp(-0.5)
    )
    assert expression.derivative(0.4) == pytest.approx(np.cos(0.4), abs=1e-10)
    assert ConstantCoefficient(3.0).derivative(1.0) == 0


@pytest.mark.parametrize(
    "spec",
    [{"linear": 1}, {"const": [1, 2, 3]}, {"expr": "t + s"}, "text"],
)
def test_bad_coefficients(spec):
    with pytest.raises(ConfigError):
        coefficient_from_dict(spec)


def test_params_round_trip(case_i_params):
    assert PlasticityParams.from_dict(case_i_params.to_dict()) == case_i_params


def test_load_params_from_text_and_file(tmp_path):
    text = '{"c1": {"const": [1, 0]}, "rho": 2}'
    path = tmp_path / "params.json"
    path.write_text(text)

    from_text = load_params(text, "case-i")
    from_file = load_params(str(path), "case-i")

    assert from_text == from_file
    assert from_text.family == "case-i"
    assert from_text.rho == 2.0


@pytest.mark.parametrize(
    "kwargs",
    [{"family": "case-iii"}, {"rho": 0.0}, {"family": "general", "rho": -1}],
)
def test_invalid_params(kwargs):
    with pytest.raises(InputError):
        PlasticityParams(**kwargs)


def test_invalid_params_json():
    with pytest.raises(ConfigError):
        load_params("{not json")


def test_zero_separation_constant():
    params = PlasticityParams(omega=ConstantCoefficient(0.0))
    with pytest.raises(DomainError, match="nonzero"):
        params.omega_at(0.0)


def test_random_damped_is_reproducible():
    a = random_damped(np.random.default_rng(11))
    b = random_damped(np.random.default_rng(11))
    assert a == b
    assert a.family == "general"


def test_wrap_theta():
    theta = wrap_theta([0.0, np.pi, -np.pi / 2, np.pi / 2, 2.0])
    assert np.all(theta > -np.pi / 2)
    assert np.all(theta <= np.pi / 2)
    assert theta[4] == pytest.approx(2.0 - np.pi)


def test_case_i_velocity():
    k = kinematics(PlasticityParams(family="case-i"), 0.0, 0.3, 0.2)
    assert k.u == pytest.approx(1.2)
    assert k.v == pytest.approx(-0.8)
    assert k.theta == pytest.approx(np.pi / 4)


@pytest.mark.parametrize("family", ["case-i", "case-ii"])
def test_closed_form_velocities_match_the_potential(
    family, case_i_params, case_ii_params
):
    params = case_i_params if family == "case-i" else case_ii_params
    rng = np.random.default_rng(0)
    t, x, y = rng.uniform([0, -1, -1], [1, 1, 1], size=(20, 3)).T
    # keep away from the case-ii pole
    y = np.where(np.abs(x + 1j * y + params.c2(t)) < 0.2, y + 0.5, y)

    closed = kinematics(params, t, x, y)
    generic = generic_kinematics(params, t, x, y)

    assert np.allclose(closed.u, generic.u, atol=1e-12)
    assert np.allclose(closed.v, generic.v, atol=1e-12)


def test_general_jet_derivatives():
    params = PlasticityParams()
    r = 0.3 + 0.2j
    h = 1e-5

    def jet(z):
        return h_eval(params, 0.0, z)

    centre = jet(r)
    for value, derivative in (("h", "dh"), ("dh", "d2h"), ("d2h", "d3h")):
        numeric = (
            getattr(jet(r + h), value) - getattr(jet(r - h), value)
        ) / (2 * h)
        expected = getattr(centre, derivative)
        assert abs(numeric - expected) <= 1e-6 * max(1.0, abs(expected))


def test_general_time_derivative(general_params):
    r = 0.2 - 0.1j
    h = 1e-5
    numeric = (
        h_eval(general_params, 0.5 + h, r).h
        - h_eval(general_params, 0.5 - h, r).h
    ) / (2 * h)
    assert abs(numeric - h_eval(general_params, 0.5, r).ht) < 1e-7


def test_case_ii_pole():
    params = PlasticityParams(family="case-ii", c2=ConstantCoefficient(-0.5))
    with pytest.raises(DomainError):
        kinematics(params, 0.0, 0.5, 0.0)


@pytest.mark.parametrize("seed", range(4))
def test_case_ii_closed_form_angle_matches_generic(seed):
    rng = np.random.default_rng(seed)
    c1, c2 = rng.normal(size=(2, 2))
    params = PlasticityParams.from_dict(
        {"c1": {"const": c1.tolist()}, "c2": {"const": c2.tolist()}},
        family="case-ii",
    )
    x, y = rng.uniform(-2, 2, size=(2, 50))
    t = np.zeros_like(x)

    closed = case_ii_theta(params, t, x, y)
    generic = generic_kinematics(params, t, x, y, "case-ii").theta

    assert np.all(angle_mismatch(closed, generic) <= 1e-10)
    assert np.allclose(kinematics(params, t, x, y).theta, generic)


def test_case_ii_closed_form_angle_without_shift():
    # c2 = 0: tan(-2 theta) = (a(x^2 - y^2) + 2bxy) / (2axy - b(x^2 - y^2))
    a, b = 0.7, -0.4
    params = PlasticityParams.from_dict(
        {"c1": {"const": [a, b]}}, family="case-ii"
    )
    x, y = np.array([0.3, 1.2, -0.8]), np.array([0.9, -0.5, -1.1])
    ratio = (a * (x**2 - y**2) + 2 * b * x * y) / (
        2 * a * x * y - b * (x**2 - y**2)
    )

    theta = case_ii_theta(params, 0.0, x, y)

    assert np.all(angle_mismatch(theta, -0.5 * np.arctan(ratio)) <= 1e-12)


@pytest.mark.parametrize(
    "a, b, expected",
    [(0.1, 0.0, 0.1), (np.pi / 2, 0.0, 0.0), (0.0, np.pi / 2 - 1e-3, 1e-3)],
)
def test_angle_mismatch(a, b, expected):
    assert angle_mismatch(a, b) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("t", [0.0, 0.5])
def test_case_i_pressure_closed_form_matches_quadrature(t, case_i_params):
    x = np.array([0.3, -0.7, 0.9])
    y = np.array([0.4, 0.2, -0.8])

    closed = sigma_case_i(case_i_params, t, x, y)
    quadrature = sigma_quadrature(case_i_params, t, x, y)

    assert np.allclose(closed, quadrature, atol=1e-8)


def test_fields_are_real(general_params):
    solution = PlasticitySolution(general_params)
    points = np.random.default_rng(5).uniform(
        [0, -1, -1], [1, 1, 1], size=(10, 3)
    )

    values = solution.field(("sigma", "theta", "u", "v"))(points)

    assert values.dtype == float
    assert np.all(np.isfinite(values))


def test_unknown_field_name(general_params):
    with pytest.raises(InputError):
        PlasticitySolution(general_params).field(("pressure",))


def test_separation_ode(general_params):
    samples = 0.5 * np.exp(1j * np.linspace(0, 2 * np.pi, 7))
    for t in (0.0, 0.5, 1.0):
        assert separation_ode_residual(general_params, samples, t) <= 1e-8
    assert separation_ode_residual(general_params, samples, 0.0, 0.1) > 1e-6
