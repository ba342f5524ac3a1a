"""Complex error functions and the inverse error function."""

import logging
from typing import Optional

import numpy as np
from scipy import special

from riemann.errors import ConvergenceError, DomainError
from riemann.settings import setting

TWO_OVER_SQRT_PI = 2.0 / np.sqrt(np.pi)

# Maclaurin coefficients of erf^{-1}(w) in powers of (sqrt(pi)/2 w)
_INVERSE_SERIES = (
    1.0,
    1.0 / 3.0,
    7.0 / 30.0,
    127.0 / 630.0,
    4369.0 / 22680.0,
    34807.0 / 178200.0,
)
_SERIES_RADIUS = 0.9
_CONTINUATION_STEPS = 16


def _check_envelope(z: np.ndarray, allow_outside: bool) -> None:
    envelope = setting("specfun", "envelope")
    if not allow_outside and np.any(np.abs(z) > envelope):
        worst = z.flat[np.argmax(np.abs(z))]
        raise DomainError(
            f"|z| = {abs(worst):.3g} outside the accuracy envelope "
            f"|z| <= {envelope:g}; pass allow_outside=True to accept it"
        )


def _unwrap(value: np.ndarray):
    return value[()] if value.ndim == 0 else value


def erf_c(z, allow_outside: bool = False):
    """Error function for complex arguments.

    Parameters
    ----------
    z : complex or array_like
        Argument(s).
    allow_outside : bool, optional
        Accept arguments beyond the ``|z| <= 12`` envelope.

    Returns
    -------
    complex or np.ndarray
        erf(z).

    """
    z = np.asarray(z, dtype=complex)
    _check_envelope(z, allow_outside)
    return _unwrap(special.erf(z))


def erfi_c(z, allow_outside: bool = False):
    """Imaginary error function, erfi(z) = -i erf(iz)."""
    z = np.asarray(z, dtype=complex)
    _check_envelope(z, allow_outside)
    return _unwrap(-1j * special.erf(1j * z))


def erf_c_derivative(z):
    """Derivative of erf, (2/sqrt(pi)) exp(-z^2)."""
    z = np.asarray(z, dtype=complex)
    return _unwrap(TWO_OVER_SQRT_PI * np.exp(-(z**2)))


def _series_guess(w: np.ndarray) -> np.ndarray:
    s = 0.5 * np.sqrt(np.pi) * w
    return s * sum(c * s ** (2 * k) for k, c in enumerate(_INVERSE_SERIES))


def _newton(w: np.ndarray, z: np.ndarray, max_iter: int) -> np.ndarray:
    """Run Newton on erf(z) = w to machine precision."""
    z = z.copy()
    active = np.ones(z.shape, dtype=bool)
    polish = np.zeros(z.shape, dtype=bool)
    for _ in range(max_iter):
        if not active.any():
            break
        za = z[active]
        step = (special.erf(za) - w[active]) / (
            TWO_OVER_SQRT_PI * np.exp(-(za**2))
        )
        z[active] = za - step

        # one extra step after the update size reaches rounding level
        small = np.abs(step) <= 1e-14 * np.maximum(1.0, np.abs(za))
        done = polish[active] & small
        idx = np.flatnonzero(active)
        polish[idx[small]] = True
        active[idx[done]] = False
    return z


def inverse_erf_c(w, guess: Optional[complex] = None):
    """Principal-branch inverse of the complex error function.

    The root is the one continuously connected to z = 0 at w = 0. For
    ``|w| < 0.9`` Newton starts from the Maclaurin series of the
    inverse; further out it follows the segment from 0 to w unless a
    guess is supplied.

    Parameters
    ----------
    w : complex or array_like
        Value(s) of erf to invert; must stay away from the branch
        points w = 1 and w = -1.
    guess : complex, optional
        Starting iterate for Newton.

    Returns
    -------
    complex or np.ndarray
        z with ``|erf(z) - w| <= 1e-11``.

    Raises
    ------
    DomainError
        If w is within 1e-6 of a branch point.
    ConvergenceError
        If Newton does not reach the residual tolerance in 64 iterations.

    """
    w = np.asarray(w, dtype=complex)
    w_flat = np.atleast_1d(w).ravel()
    max_iter = setting("specfun", "newton_max_iter")
    branch_distance = setting("specfun", "branch_point_distance")

    near_branch = np.minimum(np.abs(w_flat - 1), np.abs(w_flat + 1))
    if np.any(near_branch < branch_distance):
        bad = w_flat[np.argmin(near_branch)]
        raise DomainError(f"erf^-1 argument {bad:.6g} is at a branch point")

    if guess is not None:
        z = np.full(w_flat.shape, complex(guess))
        z = _newton(w_flat, z, max_iter)
    else:
        z = _series_guess(w_flat)
        outer = np.abs(w_flat) >= _SERIES_RADIUS
        if outer.any():
            logging.debug(
                f"Continuation along 0 -> w for {outer.sum()} argument(s)"
            )
            wo = w_flat[outer]
            zo = np.zeros(wo.shape, dtype=complex)
            for k in range(1, _CONTINUATION_STEPS + 1):
                zo = _newton(wo * k / _CONTINUATION_STEPS, zo, max_iter)
            z[outer] = zo
        z = _newton(w_flat, z, max_iter)

    residual = np.abs(special.erf(z) - w_flat)
    tol = setting("specfun", "newton_residual_tol")
    if not np.all(residual <= tol):
        worst = int(np.argmax(residual))
        raise ConvergenceError(
            f"Newton for erf^-1({w_flat[worst]:.6g}) stopped with "
            f"residual {residual[worst]:.3g}",
            last_iterate=z[worst],
        )
    return _unwrap(z.reshape(w.shape))
