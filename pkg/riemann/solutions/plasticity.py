"""Closed-form solutions of the planar ideal plasticity equations.

Velocities come from a holomorphic function h of r = x + iy through
u - iv = 2h; the angle theta is fixed by h' and the pressure sigma by
integrating the two momentum equations.
"""

import logging
from typing import NamedTuple, Optional

import numpy as np

from riemann.algebra.specfun import erfi_c, inverse_erf_c
from riemann.errors import DomainError, InputError, point_str
from riemann.settings import load_settings
from riemann.solutions.fields import FieldEvaluator, as_points
from riemann.solutions.params import PlasticityParams

SQRT_PI = np.sqrt(np.pi)
FIELD_NAMES = ("sigma", "theta", "phi", "psi", "u", "v")
_DEGENERATE_THETA = np.pi / 4
CASE_II_THETA_TOL = 1e-8


class HJet(NamedTuple):
    """h and its r-derivatives up to third order, plus dh/dt."""

    h: np.ndarray
    dh: np.ndarray
    d2h: np.ndarray
    d3h: np.ndarray
    ht: np.ndarray


class Kinematics(NamedTuple):
    """Velocity, angle and their needed derivatives at sample points."""

    u: np.ndarray
    v: np.ndarray
    u_t: np.ndarray
    v_t: np.ndarray
    theta: np.ndarray
    theta_x: np.ndarray
    theta_y: np.ndarray


def h_eval(
    params: PlasticityParams, t, r, family: Optional[str] = None
) -> HJet:
    """Evaluate h and its derivatives for a solution family.

    Parameters
    ----------
    params : PlasticityParams
        Family parameters.
    t : float or array_like
        Time(s).
    r : complex or array_like
        Riemann invariant(s) r = x + iy, broadcast against t.
    family : str, optional
        Overrides ``params.family``.

    Returns
    -------
    HJet
        h, h', h'', h''' and the time derivative of h.

    Raises
    ------
    DomainError
        Near a branch point of erf^-1 (general family) or at the pole
        r = -c2 (case-ii).

    """
    family = family or params.family
    t, r = np.broadcast_arrays(
        np.asarray(t, dtype=float), np.asarray(r, dtype=complex)
    )
    c1, c2, c3 = params.c1(t), params.c2(t), params.c3(t)
    dc1, dc2, dc3 = (
        params.c1.derivative(t),
        params.c2.derivative(t),
        params.c3.derivative(t),
    )

    if family == "case-i":
        zero = np.zeros_like(r)
        return HJet(c1 * r + c2, c1 + zero, zero, zero, dc1 * r + dc2)

    if family == "case-ii":
        w = r + c2
        if np.any(np.abs(w) < 1e-12):
            raise DomainError("Case-ii pole r = -c2 hit")
        return HJet(
            c1 / w + c3,
            -c1 / w**2,
            2 * c1 / w**3,
            -6 * c1 / w**4,
            dc1 / w - c1 * dc2 / w**2 + dc3,
        )

    omega = params.omega_at(t)
    domega = np.real(params.omega.derivative(t))
    z = inverse_erf_c(c2 + c1 * r)
    erfi_z = erfi_c(z, allow_outside=True)
    e2 = np.exp(2 * z**2)
    k = -2 * np.pi * c1**2 / omega
    ht = (
        -2 * np.pi * (dc1 / omega - c1 * domega / omega**2) * erfi_z
        - 2 * np.pi * c1 / omega * e2 * (dc2 + dc1 * r)
        + dc3
    )
    return HJet(
        -2 * np.pi * c1 / omega * erfi_z + c3,
        k * e2,
        2 * SQRT_PI * k * c1 * z * np.exp(3 * z**2),
        np.pi * k * c1**2 * np.exp(4 * z**2) * (1 + 6 * z**2),
        ht,
    )


def wrap_theta(theta):
    """Map an angle into (-pi/2, pi/2]."""
    theta = np.asarray(theta, dtype=float)
    return np.pi / 2 - np.mod(np.pi / 2 - theta, np.pi)


def _theta_from_dh(dh, d2h):
    """Angle pi/4 - arg(h')/2 and its x, y derivatives."""
    degenerate = dh == 0
    safe = np.where(degenerate, 1.0, dh)
    ratio = np.where(degenerate, 0.0, d2h / safe)
    theta = np.where(
        degenerate, _DEGENERATE_THETA, np.pi / 4 - 0.5 * np.angle(safe)
    )
    return wrap_theta(theta), -0.5 * ratio.imag, -0.5 * ratio.real


def generic_kinematics(
    params: PlasticityParams, t, x, y, family: Optional[str] = None
) -> Kinematics:
    """Fields through u - iv = 2h for the family's h, without closed forms.

    Case-i and case-ii enter with the effective potentials
    2(conj(c1) r + conj(c2)) and c1/(r + c2) + conj(c3)/2 that reproduce
    their explicit velocity formulas.
    """
    family = family or params.family
    t = np.asarray(t, dtype=float)
    r = np.asarray(x, dtype=float) + 1j * np.asarray(y, dtype=float)

    if family == "case-i":
        c1, c2 = params.c1(t), params.c2(t)
        dc1, dc2 = params.c1.derivative(t), params.c2.derivative(t)
        h = 2 * (np.conj(c1) * r + np.conj(c2))
        ht = 2 * (np.conj(dc1) * r + np.conj(dc2))
        dh = 2 * np.conj(c1) + np.zeros_like(r)
        d2h = np.zeros_like(r)
    else:
        jet = h_eval(params, t, r, family)
        h, dh, d2h, ht = jet.h, jet.dh, jet.d2h, jet.ht
        if family == "case-ii":
            c3, dc3 = params.c3(t), params.c3.derivative(t)
            h = h - c3 + 0.5 * np.conj(c3)
            ht = ht - dc3 + 0.5 * np.conj(dc3)

    theta, theta_x, theta_y = _theta_from_dh(dh, d2h)
    return Kinematics(
        2 * h.real, -2 * h.imag, 2 * ht.real, -2 * ht.imag,
        theta, theta_x, theta_y,
    )


def _case_i_kinematics(params: PlasticityParams, t, x, y) -> Kinematics:
    c1, c2 = params.c1(t), params.c2(t)
    dc1, dc2 = params.c1.derivative(t), params.c2.derivative(t)
    u = 4 * (c1.real * x + c1.imag * y + c2.real)
    v = 4 * (c1.imag * x - c1.real * y + c2.imag)
    u_t = 4 * (dc1.real * x + dc1.imag * y + dc2.real)
    v_t = 4 * (dc1.imag * x - dc1.real * y + dc2.imag)

    im_c1 = np.broadcast_to(c1.imag, np.shape(u))
    with np.errstate(divide="ignore", invalid="ignore"):
        theta = np.where(
            im_c1 == 0,
            _DEGENERATE_THETA,
            -0.5 * np.arctan(np.real(c1) / np.where(im_c1 == 0, 1.0, im_c1)),
        )
    zero = np.zeros(np.shape(u))
    return Kinematics(u, v, u_t, v_t, theta + zero, zero, zero)


def angle_mismatch(a, b) -> np.ndarray:
    """Distance between two angles modulo pi/2."""
    d = np.mod(np.asarray(a) - np.asarray(b) + np.pi / 4, np.pi / 2)
    return np.abs(d - np.pi / 4)


def case_ii_theta(params: PlasticityParams, t, x, y) -> np.ndarray:
    """Closed-form case-ii angle -1/2 arctan(B/A).

    B + iA = conj(c1) (r + c2)^2, the polynomial pair of the explicit
    case-ii solution; A = 0 gives pi/4. The arctangent jumps by pi/2
    where A changes sign, so the result matches the generic angle only
    modulo pi/2.
    """
    c1, c2 = params.c1(t), params.c2(t)
    w = np.asarray(x, dtype=float) + 1j * np.asarray(y, dtype=float) + c2
    z = np.conj(c1) * w**2
    A, B = np.imag(z), np.real(z)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = B / np.where(A == 0, 1.0, A)
        theta = np.where(A == 0, _DEGENERATE_THETA, -0.5 * np.arctan(ratio))
    return wrap_theta(theta)


def _case_ii_kinematics(params: PlasticityParams, t, x, y) -> Kinematics:
    c1, c2, c3 = params.c1(t), params.c2(t), params.c3(t)
    X, Y = x + np.real(c2), y + np.imag(c2)
    D = X**2 + Y**2
    if np.any(D == 0):
        raise DomainError("Case-ii singular point r = -c2 hit")
    c1c2 = c1 * np.conj(c2)
    u = c3.real + 2 * (c1c2.real + c1.real * x + c1.imag * y) / D
    v = c3.imag + 2 * (-c1c2.imag - c1.imag * x + c1.real * y) / D
    generic = generic_kinematics(params, t, x, y, "case-ii")
    # the closed-form angle is discontinuous, the generic one is kept
    mismatch = angle_mismatch(case_ii_theta(params, t, x, y), generic.theta)
    if np.size(mismatch) and np.max(mismatch) > CASE_II_THETA_TOL:
        logging.warning(
            f"Case-ii angle differs from its closed form by "
            f"{np.max(mismatch):.3g} modulo pi/2"
        )
    return generic._replace(u=u, v=v)


def kinematics(params: PlasticityParams, t, x, y) -> Kinematics:
    """Velocity, angle and derivatives, using closed forms where printed."""
    t, x, y = np.broadcast_arrays(
        np.asarray(t, dtype=float),
        np.asarray(x, dtype=float),
        np.asarray(y, dtype=float),
    )
    if params.family == "case-i":
        return _case_i_kinematics(params, t, x, y)
    if params.family == "case-ii":
        return _case_ii_kinematics(params, t, x, y)
    return generic_kinematics(params, t, x, y)


def _gauss_legendre(integrand, lower, upper, tol: float) -> np.ndarray:
    """Integrate along segments with composite Gauss-Legendre panels.

    ``integrand(s)`` receives an (N, K) array of abscissae in [0, 1],
    one row per segment, and returns the integrand values. Panels are
    doubled until successive estimates agree to ``tol``.
    """
    cfg = load_settings()["quadrature"]
    nodes, weights = np.polynomial.legendre.leggauss(cfg["nodes"])
    length = upper - lower

    def estimate(panels: int) -> np.ndarray:
        edges = np.linspace(0.0, 1.0, panels + 1)
        s = (
            edges[:-1, None] + (nodes[None, :] + 1) / (2 * panels)
        ).ravel()
        w = np.tile(weights / (2 * panels), panels)
        values = integrand(lower[:, None] + length[:, None] * s[None, :])
        return length * (values @ w)

    panels = 1
    previous = estimate(panels)
    while panels < cfg["max_panels"]:
        panels *= 2
        current = estimate(panels)
        scale = np.maximum(1.0, np.abs(current))
        if np.all(np.abs(current - previous) <= tol * scale):
            return current
        previous = current
    logging.warning("Quadrature reached the panel limit")
    return previous


def sigma_quadrature(
    params: PlasticityParams,
    t,
    x,
    y,
    x_ref: float = 0.0,
    y_ref: float = 0.0,
) -> np.ndarray:
    """Pressure from the momentum equations by quadrature.

    sigma = -rho V + sin(2 theta)/2 + rho (u^2 + v^2)/2
            + int_{y_ref}^{y} [rho v_t + theta_x sin 2theta
                                - 2 theta_y cos 2theta](x_ref, y') dy'
            + int_{x_ref}^{x} [rho u_t + theta_y sin 2theta](x', y) dx'
            + sigma0(t)

    Raises
    ------
    DomainError
        If the integration path meets a singularity of the fields.

    """
    t, x, y = (
        np.atleast_1d(np.asarray(a, dtype=float)).ravel()
        for a in np.broadcast_arrays(t, x, y)
    )
    rho = params.rho
    tol = load_settings()["quadrature"]["tol"]

    def y_leg(s):
        tt = np.broadcast_to(t[:, None], s.shape)
        k = kinematics(params, tt, np.full(s.shape, x_ref), s)
        return (
            rho * k.v_t
            + k.theta_x * np.sin(2 * k.theta)
            - 2 * k.theta_y * np.cos(2 * k.theta)
        )

    def x_leg(s):
        tt = np.broadcast_to(t[:, None], s.shape)
        yy = np.broadcast_to(y[:, None], s.shape)
        k = kinematics(params, tt, s, yy)
        return rho * k.u_t + k.theta_y * np.sin(2 * k.theta)

    try:
        integral = _gauss_legendre(
            y_leg, np.full(y.shape, y_ref), y, tol
        ) + _gauss_legendre(x_leg, np.full(x.shape, x_ref), x, tol)
    except DomainError as e:
        raise DomainError(
            f"Singularity on the pressure integration path: {e}"
        ) from e
    if not np.all(np.isfinite(integral)):
        bad = np.flatnonzero(~np.isfinite(integral))[0]
        raise DomainError(
            "Singularity on the pressure integration path to "
            f"{point_str((t[bad], x[bad], y[bad]))}"
        )

    k = kinematics(params, t, x, y)
    V = np.real(params.V.evaluate(t=t, x=x, y=y))
    return (
        -rho * V
        + 0.5 * np.sin(2 * k.theta)
        + 0.5 * rho * (k.u**2 + k.v**2)
        + integral
        + np.real(params.sigma0(t))
    )


def sigma_case_i(params: PlasticityParams, t, x, y) -> np.ndarray:
    """Closed-form case-i pressure, referenced at the origin."""
    t, x, y = np.broadcast_arrays(
        np.asarray(t, dtype=float),
        np.asarray(x, dtype=float),
        np.asarray(y, dtype=float),
    )
    r = x + 1j * y
    c1, c2 = params.c1(t), params.c2(t)
    dc1, dc2 = params.c1.derivative(t), params.c2.derivative(t)
    theta = _case_i_kinematics(params, t, x, y).theta
    V = np.real(params.V.evaluate(t=t, x=x, y=y))
    rho = params.rho
    return (
        -rho * V
        + 0.5 * np.sin(2 * theta)
        + 8 * rho * np.abs(np.conj(c1) * r + np.conj(c2)) ** 2
        + rho * np.real(2 * np.conj(dc1) * r**2 + 4 * np.conj(dc2) * r)
        + np.real(params.sigma0(t))
    )


class PlasticitySolution:
    """Evaluator of a plasticity solution family.

    Parameters
    ----------
    params : PlasticityParams
        Family and parameters.
    x_ref, y_ref : float
        Reference point of the pressure integration.

    """

    def __init__(
        self,
        params: PlasticityParams,
        x_ref: float = 0.0,
        y_ref: float = 0.0,
    ) -> None:
        """Store the parameters and the pressure reference point."""
        self.params = params
        self.x_ref = x_ref
        self.y_ref = y_ref

    def sigma(self, t, x, y) -> np.ndarray:
        """Pressure; closed form for case-i referenced at the origin."""
        if self.params.family == "case-i" and self.x_ref == self.y_ref == 0:
            return sigma_case_i(self.params, t, x, y)
        return sigma_quadrature(
            self.params, t, x, y, self.x_ref, self.y_ref
        )

    def sample(self, points, names=FIELD_NAMES) -> dict:
        """Evaluate named fields at an (N, 3) array of (t, x, y) points."""
        points = as_points(points)
        t, x, y = points.T
        k = kinematics(self.params, t, x, y)
        available = {
            "theta": k.theta,
            "phi": k.theta_x,
            "psi": k.theta_y,
            "u": k.u,
            "v": k.v,
        }
        result = {n: available[n] for n in names if n != "sigma"}
        if "sigma" in names:
            result["sigma"] = self.sigma(t, x, y)
        return result

    def field(self, names=("sigma", "theta", "u", "v")) -> FieldEvaluator:
        """Evaluator of the given components, e.g. a system's unknowns."""
        names = tuple(names)
        unknown = set(names) - set(FIELD_NAMES)
        if unknown:
            raise InputError(
                f"Plasticity solutions provide {FIELD_NAMES}, "
                f"not {sorted(unknown)}"
            )

        def fn(points):
            values = self.sample(points, names)
            return np.column_stack([values[n] for n in names])

        periods = tuple(np.pi if n == "theta" else None for n in names)
        return FieldEvaluator(names, fn, periods)

    def velocity(self, t: float = 0.0):
        """Velocity (u, v) at fixed time as a function of x, y arrays."""

        def uv(x, y):
            k = kinematics(self.params, t, x, y)
            return k.u, k.v

        return uv
