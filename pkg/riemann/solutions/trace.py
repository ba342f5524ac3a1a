"""Trace conditions of multimode solutions with constant wave vectors."""

from typing import Optional

import numpy as np

from riemann.algebra.linalg import solve_square
from riemann.errors import DomainError, InputError, point_str
from riemann.solutions.fields import COORDS, FieldEvaluator, as_points
from riemann.systems.spec import SystemSpec, eval_system
from riemann.verify.differences import numeric_jacobian

CONSISTENCY_TOL = 1e-6


def coordinate_columns(sys: SystemSpec) -> list[int]:
    """Columns of (t, x, y) holding the system's coordinates."""
    unknown = set(sys.coords) - set(COORDS)
    if unknown:
        raise InputError(
            f"{sys.name}: coordinates {sorted(unknown)} are not among {COORDS}"
        )
    return [COORDS.index(c) for c in sys.coords]


def check_components(sys: SystemSpec, field: FieldEvaluator) -> None:
    """Require the field to provide exactly the system's unknowns."""
    if tuple(field.names) != tuple(sys.vars):
        raise InputError(
            f"{sys.name} needs components {sys.vars}, "
            f"the solution provides {field.names}"
        )


def invariant_derivatives(
    jacobian: np.ndarray, Lambda: np.ndarray
) -> np.ndarray:
    """Rotate (q, p) coordinate derivatives to the Riemann invariants.

    Solves D Lambda = jacobian for the (q, 2k) matrix D whose columns
    are the derivatives with respect to r^1 .. r^k and their conjugates.
    """
    if Lambda.shape[0] == Lambda.shape[1]:
        D = solve_square(Lambda.T, jacobian.T).T
    else:
        D = np.linalg.lstsq(
            Lambda.T, jacobian.T.astype(complex), rcond=None
        )[0].T
    mismatch = np.max(np.abs(D @ Lambda - jacobian), initial=0.0)
    if mismatch > CONSISTENCY_TOL * max(1.0, np.max(np.abs(jacobian))):
        raise InputError(
            "The solution gradient is not spanned by the wave vectors "
            f"(mismatch {mismatch:.3g})"
        )
    return D


def trace_condition_residual(
    sys: SystemSpec,
    solution: FieldEvaluator,
    Lambda,
    point,
    scheme: Optional[str] = None,
    step: Optional[float] = None,
) -> np.ndarray:
    """Trace conditions tr(A^mu (df/dR + dfbar/dR) Lambda) - b^mu.

    Parameters
    ----------
    sys : SystemSpec
        System whose unknowns the solution provides.
    solution : FieldEvaluator
        Evaluator of the unknowns at (t, x, y).
    Lambda : array_like
        Constant (2k, p) matrix of wave vectors and their conjugates.
    point : array_like
        (t, x, y) evaluation point.
    scheme, step : optional
        Differencing scheme and relative step.

    Returns
    -------
    np.ndarray
        Complex m-vector of traces; zero for a solution.

    Raises
    ------
    DomainError
        If the differencing stencil leaves the solution's domain.

    """
    check_components(sys, solution)
    cols = coordinate_columns(sys)
    Lambda = np.atleast_2d(np.asarray(Lambda, dtype=complex))
    if Lambda.shape[1] != sys.p:
        raise InputError(f"Lambda must have {sys.p} columns")

    point = as_points(point)[0]
    J = numeric_jacobian(solution, point, scheme, step)
    if J is None:
        raise DomainError(f"Differencing failed at {point_str(point)}")
    D = invariant_derivatives(J[:, cols], Lambda)

    u = solution(point)[0]
    A, b = eval_system(sys, u, point[cols])
    # tr(A^mu D Lambda) = sum_i (A^i D Lambda[:, i])_mu
    traces = sum(A_i @ (D @ Lambda[:, i]) for i, A_i in enumerate(A))
    return traces - b
