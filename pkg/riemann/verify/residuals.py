"""Grid residuals of PDE systems and scalar field equations."""

import logging
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from riemann.dispersion.roots import WaveVector
from riemann.errors import InputError
from riemann.settings import setting
from riemann.solutions.fields import FieldEvaluator
from riemann.solutions.params import PlasticityParams
from riemann.solutions.plasticity import h_eval
from riemann.solutions.trace import check_components, coordinate_columns
from riemann.systems.spec import SystemSpec, eval_system
from riemann.verify.differences import jacobians, second_derivatives
from riemann.verify.grid import Grid
from riemann.verify.report import ResidualReport, build_report


def _tolerance(tol: Optional[float]) -> float:
    return setting("verify", "tol") if tol is None else tol


def _count_failed(failed: np.ndarray, what: str) -> int:
    n_failed = int(failed.sum())
    if n_failed:
        logging.warning(
            f"{what}: {n_failed} point(s) dropped, their stencil left "
            "the domain"
        )
    return n_failed


def equation_names(sys: SystemSpec, label: Optional[str] = None) -> list:
    """Equation names of a system, optionally prefixed by a label."""
    names = sys.equations or tuple(f"eq{r + 1}" for r in range(sys.m))
    return [f"{label}/{n}" if label else n for n in names]


def pde_residuals(
    sys: SystemSpec,
    solution: FieldEvaluator,
    grid: Grid,
    tol: Optional[float] = None,
    tolerances: Optional[dict] = None,
    scheme: Optional[str] = None,
    step: Optional[float] = None,
    label: Optional[str] = None,
) -> ResidualReport:
    """Residuals A^i(u) u_i - b(u) of a system on a grid.

    Parameters
    ----------
    sys : SystemSpec
        System whose coordinates are among t, x, y.
    solution : FieldEvaluator
        Evaluator providing exactly the system's unknowns.
    grid : Grid
        Sampling grid; masked points are skipped and counted.
    tol : float, optional
        Tolerance; defaults to the configured residual tolerance.
    tolerances : dict, optional
        Per-equation tolerances keyed by equation name.
    scheme, step : optional
        Differencing scheme and relative step.
    label : str, optional
        Prefix of the equation names in the report.

    Returns
    -------
    ResidualReport
        One record per equation.

    """
    tol = _tolerance(tol)
    check_components(sys, solution)
    cols = coordinate_columns(sys)
    points, masked = grid.masked()

    values, J, failed = jacobians(solution, points, scheme, step, cols)
    n_failed = _count_failed(failed, sys.name)
    keep = ~failed
    points, values, J = points[keep], values[keep], J[keep]

    residuals = np.empty((len(points), sys.m), dtype=complex)
    for n, point in enumerate(points):
        A, b = eval_system(sys, values[n], point[cols])
        residuals[n] = sum(A_i @ J[n, :, i] for i, A_i in enumerate(A)) - b

    names = equation_names(sys, label)
    if tolerances and label:
        tolerances = {f"{label}/{k}": v for k, v in tolerances.items()}
    return build_report(
        names, residuals, points, tol, masked, tolerances, n_failed
    )


def _scalar_report(
    name: str,
    field: FieldEvaluator,
    grid: Grid,
    tol: Optional[float],
    step: Optional[float],
    residual: Callable[[dict], np.ndarray],
) -> ResidualReport:
    tol = _tolerance(tol)
    points, masked = grid.masked()
    d, failed = second_derivatives(field, points, step)
    n_failed = _count_failed(failed, name)
    keep = ~failed
    d = {k: v[keep] for k, v in d.items()}
    return build_report(
        [name], residual(d), points[keep], tol, masked, failed=n_failed
    )


def compatibility_residual(
    theta: FieldEvaluator,
    grid: Grid,
    tol: Optional[float] = None,
    step: Optional[float] = None,
) -> ResidualReport:
    """Residual of the compatibility condition of the angle field.

    2 (t_x^2 - t_xy - t_y^2) cos 2t + (t_xx + 4 t_x t_y - t_yy) sin 2t
    """

    def residual(d: dict) -> np.ndarray:
        th, tx, ty = d["f"], d["f_x"], d["f_y"]
        return 2 * (tx**2 - d["f_xy"] - ty**2) * np.cos(2 * th) + (
            d["f_xx"] + 4 * tx * ty - d["f_yy"]
        ) * np.sin(2 * th)

    return _scalar_report("compatibility", theta, grid, tol, step, residual)


def liouville_residual(
    u: FieldEvaluator,
    a: float,
    grid: Grid,
    tol: Optional[float] = None,
    step: Optional[float] = None,
) -> ResidualReport:
    """Residual of u_xx + u_yy = a^2 e^u."""

    def residual(d: dict) -> np.ndarray:
        return d["f_xx"] + d["f_yy"] - a**2 * np.exp(d["f"])

    return _scalar_report("liouville", u, grid, tol, step, residual)


def separation_ode_values(
    params: PlasticityParams,
    r_samples,
    t: float = 0.0,
    g_offset: float = 0.0,
) -> np.ndarray:
    """g g'' - 1.5 g'^2 + (Omega/2) g^3 with g = h' (+ g_offset)."""
    r = np.asarray(r_samples, dtype=complex)
    jet = h_eval(params, np.full(r.shape, float(t)), r)
    omega = params.omega_at(t)
    g = jet.dh + g_offset
    return g * jet.d3h - 1.5 * jet.d2h**2 + 0.5 * omega * g**3


def separation_ode_residual(
    params: PlasticityParams,
    r_samples,
    t: float = 0.0,
    g_offset: float = 0.0,
) -> float:
    """Maximum residual of the separated ODE for h' over sample points.

    Uses the analytic derivatives of :func:`h_eval`; ``g_offset``
    perturbs g for sensitivity checks.
    """
    values = separation_ode_values(params, r_samples, t, g_offset)
    return float(np.max(np.abs(values)))


def ode_samples(count: int = 20, radius: float = 0.5) -> np.ndarray:
    """Deterministic samples spiralling inside the disk |r| <= radius."""
    k = np.arange(count)
    return radius * np.sqrt((k + 0.5) / count) * np.exp(2.39996323j * k)


@dataclass(frozen=True, eq=False)
class DetPhiScan:
    """Gradient-catastrophe determinant on the unmasked grid points."""

    points: np.ndarray
    det: np.ndarray
    flags: np.ndarray
    masked: int = 0
    failed: int = 0

    @property
    def flagged_points(self) -> np.ndarray:
        """Points where the determinant is below the flag tolerance."""
        return self.points[self.flags]

    def to_dict(self) -> dict:
        """Summary of the scan as JSON-ready values."""
        return {
            "min_abs_det": float(np.min(np.abs(self.det))),
            "max_abs_det_minus_one": float(np.max(np.abs(self.det - 1))),
            "flagged": self.flagged_points.tolist(),
            "masked": self.masked,
            "failed": self.failed,
        }


def det_phi_scan(
    solution: FieldEvaluator,
    lambda_derivative: Union[None, np.ndarray, Callable],
    grid: Grid,
    lam: WaveVector = WaveVector((1.0, 1j)),
    flag_tol: Optional[float] = None,
    step: Optional[float] = None,
) -> DetPhiScan:
    """Scan det(I - [du/dr dr/du + c.c.]) over a grid.

    Parameters
    ----------
    solution : FieldEvaluator
        Real solution u = f + conj(f) of q components.
    lambda_derivative : array_like, Callable or None
        (q, 2) array of d lambda_i / d u^alpha, or a function of the
        solution values returning it; None for a constant wave vector.
    grid : Grid
        Sampling grid.
    lam : WaveVector
        Complex wave vector in (x, y) at the sampled solution.
    flag_tol : float, optional
        Points with |det| below it are flagged (default 1e-6).

    Returns
    -------
    DetPhiScan
        Determinants and flags.

    """
    if flag_tol is None:
        flag_tol = setting("verify", "det_phi_flag")
    q = len(solution.names)
    Lambda = np.array([lam.array, lam.conj.array])
    if Lambda.shape != (2, 2):
        raise InputError("The wave vector must have two components")
    inverse = np.linalg.inv(Lambda)

    points, masked = grid.masked()
    values, J, failed = jacobians(solution, points, None, step, (1, 2))
    n_failed = _count_failed(failed, "det-phi")
    keep = ~failed
    points, values, J = points[keep], values[keep], J[keep]

    du_dr = (J @ inverse)[:, :, 0]
    det = np.empty(len(points))
    for n, point in enumerate(points):
        if lambda_derivative is None:
            dr_du = np.zeros(q, dtype=complex)
        else:
            d_lambda = (
                lambda_derivative(values[n])
                if callable(lambda_derivative)
                else lambda_derivative
            )
            dr_du = np.asarray(d_lambda, dtype=complex) @ point[1:]
        phi = np.eye(q) - 2 * np.real(np.outer(du_dr[n], dr_du))
        det[n] = np.linalg.det(phi)

    flags = np.abs(det) < flag_tol
    if flags.any():
        logging.warning(
            f"Gradient catastrophe flagged at {flags.sum()} point(s)"
        )
    return DetPhiScan(points, det, flags, masked, n_failed)
