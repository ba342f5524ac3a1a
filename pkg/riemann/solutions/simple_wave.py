"""Simple-wave profiles of inhomogeneous systems with a constant wave vector.

For a constant real wave vector the gradient-catastrophe denominator is
identically 1, so the profile f(r) solves df/dr = Omega L b (+ tau).
"""

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from riemann.dispersion.factorization import InhomFactorization
from riemann.dispersion.roots import WaveVector, wave_matrix
from riemann.errors import ConvergenceError, EvaluationError, InputError
from riemann.settings import setting
from riemann.systems.spec import (
    SystemSpec,
    as_real,
    eval_system,
    parse_system_config,
)

TAU_TOL = 1e-8
_DEFAULT = object()


@dataclass(frozen=True, eq=False)
class SimpleWavePath:
    """Sampled profile with cubic Hermite dense output.

    Parameters
    ----------
    r : np.ndarray
        Nodes of the Riemann invariant, increasing.
    f : np.ndarray
        (len(r), q) profile values at the nodes.
    dfdr : np.ndarray
        (len(r), q) right-hand side at the nodes.
    rejected : int
        Number of rejected steps that were subdivided.

    """

    r: np.ndarray
    f: np.ndarray
    dfdr: np.ndarray
    rejected: int = 0
    spline: CubicHermiteSpline = field(init=False, repr=False)

    def __post_init__(self) -> None:
        """Build the cubic Hermite interpolant of the path."""
        object.__setattr__(
            self, "spline", CubicHermiteSpline(self.r, self.f, self.dfdr)
        )

    def __call__(self, r) -> np.ndarray:
        """Profile at arbitrary r inside the integrated interval."""
        r = np.asarray(r, dtype=float)
        if np.any((r < self.r[0]) | (r > self.r[-1])):
            raise InputError(
                f"r outside the integrated interval "
                f"[{self.r[0]}, {self.r[-1]}]"
            )
        return self.spline(r)

    def points(self, lam: WaveVector) -> np.ndarray:
        """Spatial points x = r lambda / |lambda|^2 of the nodes."""
        lam = lam.array.real
        return np.outer(self.r, lam / (lam @ lam))


def _ray_point(lam: np.ndarray, r: float) -> np.ndarray:
    return r * lam / (lam @ lam)


def _make_rhs(
    sys: SystemSpec,
    lam: WaveVector,
    fac: InhomFactorization,
    check_tau: bool,
):
    lam_real = lam.array.real

    def rhs(r: float, f: np.ndarray) -> np.ndarray:
        x = _ray_point(lam_real, r)
        omega, L, tau = fac.evaluate(x, f)
        _, b = eval_system(sys, f, x)
        if check_tau and np.any(tau != 0):
            annihilated = wave_matrix(sys, f, lam, x) @ tau
            if np.max(np.abs(annihilated)) > TAU_TOL:
                raise InputError(
                    f"tau is not characteristic at r = {r:.6g}: "
                    f"|A^i lambda_i tau| = {np.max(np.abs(annihilated)):.3g}"
                )
        slope = as_real(omega * (L @ b) + tau, f"df/dr at r = {r:.6g}")
        if not np.all(np.isfinite(slope)):
            raise EvaluationError(f"Non-finite right-hand side at r = {r:.6g}")
        return slope

    return rhs


def _rk4(rhs, r: float, f: np.ndarray, h: float) -> np.ndarray:
    k1 = rhs(r, f)
    k2 = rhs(r + h / 2, f + h / 2 * k1)
    k3 = rhs(r + h / 2, f + h / 2 * k2)
    k4 = rhs(r + h, f + h * k3)
    return f + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def simple_wave_integrate(
    sys: SystemSpec,
    lam: WaveVector,
    fac: InhomFactorization,
    f0: Sequence[float],
    r_span: tuple[float, float],
    dr: float,
    local_tol=_DEFAULT,
    check_tau: bool = True,
) -> SimpleWavePath:
    """Integrate the simple-wave profile equation by classical RK4.

    Parameters
    ----------
    sys : SystemSpec
        Square inhomogeneous system with p spatial coordinates.
    lam : WaveVector
        Constant real wave vector.
    fac : InhomFactorization
        Omega, L and optionally tau along the profile.
    f0 : Sequence[float]
        Initial state at r_span[0].
    r_span : tuple[float, float]
        Integration interval; r_span[1] may be smaller than r_span[0].
    dr : float
        Positive step size.
    local_tol : float or None, optional
        Step-doubling error threshold above which a step is subdivided
        (default from settings); None disables the estimate.
    check_tau : bool
        Verify that tau is annihilated by A^i lambda_i.

    Returns
    -------
    SimpleWavePath
        Nodes, values and slopes with dense output.

    Raises
    ------
    ConvergenceError
        If a step keeps failing the local error test after the maximum
        number of halvings.

    """
    if not lam.is_real:
        raise InputError("Simple waves need a real wave vector")
    if len(lam.components) != sys.p:
        raise InputError(f"Wave vector must have {sys.p} components")
    if not dr > 0:
        raise InputError(f"Step must be positive, got {dr}")
    f = np.asarray(f0, dtype=float).ravel()
    if f.shape != (sys.q,):
        raise InputError(f"Initial state must have {sys.q} components")
    if local_tol is _DEFAULT:
        local_tol = setting("simple_wave", "local_tol")
    max_halvings = setting("simple_wave", "max_halvings")

    rhs = _make_rhs(sys, lam, fac, check_tau)
    r0, r1 = map(float, r_span)
    if r0 == r1:
        raise InputError("Integration interval is empty")
    direction = 1.0 if r1 >= r0 else -1.0
    n_steps = max(1, int(np.ceil(abs(r1 - r0) / dr - 1e-12)))
    nodes = r0 + direction * dr * np.arange(n_steps + 1)
    nodes[-1] = r1
    rejected = 0

    def advance(r: float, f: np.ndarray, h: float, depth: int):
        nonlocal rejected
        full = _rk4(rhs, r, f, h)
        if local_tol is None:
            return full
        half = _rk4(rhs, r + h / 2, _rk4(rhs, r, f, h / 2), h / 2)
        error = np.max(np.abs(full - half))
        if error <= local_tol:
            return full
        if depth >= max_halvings:
            raise ConvergenceError(
                f"Step at r = {r:.6g} rejected after {depth} halvings "
                f"(local error {error:.3g})",
                last_iterate=full,
            )
        rejected += 1
        mid = advance(r, f, h / 2, depth + 1)
        return advance(r + h / 2, mid, h / 2, depth + 1)

    values = [f]
    for k in range(n_steps):
        h = nodes[k + 1] - nodes[k]
        values.append(advance(nodes[k], values[-1], h, 0))
    values = np.array(values)
    slopes = np.array([rhs(r, v) for r, v in zip(nodes, values)])

    if rejected:
        logging.info(f"Subdivided {rejected} simple-wave step(s)")
    if direction < 0:
        nodes, values, slopes = nodes[::-1], values[::-1], slopes[::-1]
    return SimpleWavePath(nodes, values, slopes, rejected)


def exponential_toy() -> tuple[SystemSpec, WaveVector, InhomFactorization]:
    """Scalar system f_x + f_y = f whose profile is f0 e^r."""
    sys = parse_system_config(
        {
            "name": "exponential-toy",
            "p": 2,
            "q": 1,
            "m": 1,
            "vars": ["f"],
            "A": [[["1"]], [["1"]]],
            "b": ["f"],
        }
    )
    fac = InhomFactorization(
        omega=lambda x, u: 1.0, L=lambda x, u: np.eye(1)
    )
    return sys, WaveVector((1.0, 0.0)), fac
