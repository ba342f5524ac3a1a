import numpy as np
import pytest
from scipy import special

from riemann.algebra.specfun import (
    erf_c,
    erf_c_derivative,
    erfi_c,
    inverse_erf_c,
)
from riemann.errors import DomainError


def test_erf_c_agrees_with_real_erf():
    x = np.linspace(-3, 3, 13)
    assert np.allclose(erf_c(x), special.erf(x), atol=1e-15)


def test_erfi_c_is_real_on_the_real_axis():
    x = np.linspace(-2, 2, 9)
    values = erfi_c(x)
    assert np.max(np.abs(values.imag)) < 1e-15
    assert np.allclose(values, -1j * erf_c(1j * x))


def test_erf_c_scalar_returns_scalar():
    assert np.isscalar(erf_c(0.5 + 0.5j))
    assert erf_c(0) == 0


def test_envelope_is_enforced():
    with pytest.raises(DomainError, match="envelope"):
        erf_c(13.0)
    assert erf_c(13.0, allow_outside=True) == pytest.approx(1.0)


def test_erf_c_derivative_matches_differences():
    z = 0.4 + 0.3j
    h = 1e-6
    numeric = (erf_c(z + h) - erf_c(z - h)) / (2 * h)
    assert abs(erf_c_derivative(z) - numeric) < 1e-8


@pytest.mark.parametrize(
    "w",
    [0.0, 0.3, -0.6 + 0.2j, 0.5 + 0.5j, 0.95j, -0.8 + 0.5j, 0.97],
)
def test_inverse_erf_c_round_trip(w):
    z = inverse_erf_c(w)
    assert abs(special.erf(z) - w) <= 1e-11


def test_inverse_erf_c_principal_branch_near_origin():
    w = np.array([0.1, -0.1j, 0.2 + 0.1j])
    z = inverse_erf_c(w)
    assert z.shape == w.shape
    # erf(z) ~ 2 z / sqrt(pi) near zero
    assert np.allclose(z, np.sqrt(np.pi) / 2 * w, atol=1e-2)


@pytest.mark.parametrize("w", [1.0, -1.0, 1.0 + 1e-8j])
def test_inverse_erf_c_rejects_branch_points(w):
    with pytest.raises(DomainError, match="branch point"):
        inverse_erf_c(w)


def test_inverse_erf_c_with_guess():
    z = inverse_erf_c(0.5 + 0.1j, guess=0.5)
    assert abs(special.erf(z) - (0.5 + 0.1j)) <= 1e-11


@pytest.fixture()
def disk_samples() -> np.ndarray:
    """200 points spread uniformly over the disk |z| <= 1.5."""
    rng = np.random.default_rng(11)
    radius = 1.5 * np.sqrt(rng.uniform(size=200))
    return radius * np.exp(2j * np.pi * rng.uniform(size=200))


def test_inverse_erf_c_undoes_erf_c(disk_samples):
    z = inverse_erf_c(erf_c(disk_samples))
    assert np.max(np.abs(z - disk_samples)) <= 1e-9


def test_erf_c_is_odd_and_real_symmetric(disk_samples):
    z = disk_samples
    assert np.allclose(erf_c(-z), -erf_c(z), atol=1e-15, rtol=0)
    assert np.allclose(erf_c(np.conj(z)), np.conj(erf_c(z)), atol=1e-15)
    assert np.allclose(erfi_c(-z), -erfi_c(z), atol=1e-15, rtol=0)
