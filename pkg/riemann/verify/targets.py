"""Verification runs for the shipped solution families."""

import logging
from dataclasses import replace
from typing import Optional

import numpy as np

from riemann.dispersion.factorization import (
    SIMPLE_MODE,
    SIMPLE_WAVE,
    annihilating_scale,
    inhom_condition_residual,
    wave_particle_factorization,
)
from riemann.dispersion.roots import WaveVector
from riemann.errors import InputError
from riemann.settings import setting
from riemann.solutions.fields import FieldEvaluator, corrupt
from riemann.solutions.params import PlasticityParams
from riemann.solutions.plasticity import FIELD_NAMES, PlasticitySolution
from riemann.solutions.trace import trace_condition_residual
from riemann.solutions.wave_particle import (
    FIELD_NAMES as WAVE_PARTICLE_FIELDS,
    WaveParticleSolution,
    wave_particle_ray_flow,
)
from riemann.systems.registry import builtin_system
from riemann.systems.spec import SystemSpec
from riemann.verify.grid import Grid, disk_mask
from riemann.verify.report import ResidualReport, build_report
from riemann.verify.residuals import (
    compatibility_residual,
    equation_names,
    liouville_residual,
    ode_samples,
    pde_residuals,
    separation_ode_values,
)

CASE_II_MASK_RADIUS = 0.25
ODE_TOL = 1e-8
MOMENTUM_EQUATIONS = ("momentum-x", "momentum-y")
TRACE_SAMPLES = 20
SUBSYSTEM_WAVE_VECTORS = ((1.0, 1j), (1.0, -1j))
READINGS = ("linear", "power")


def case_ii_mask(
    params: PlasticityParams, radius: float = CASE_II_MASK_RADIUS
):
    """Mask the neighborhood of the case-ii singularity r = -c2(t)."""
    return disk_mask(lambda t: -params.c2(t), radius)


def plasticity_grid(params: PlasticityParams, grid: Grid) -> Grid:
    """Grid with the singular neighborhood masked for case-ii."""
    if params.family == "case-ii":
        return grid.with_mask(case_ii_mask(params))
    return grid


def _maybe_corrupt(field: FieldEvaluator, inject: bool) -> FieldEvaluator:
    return corrupt(field) if inject else field


def separation_ode_report(
    params: PlasticityParams, grid: Grid, tol: float = ODE_TOL
) -> ResidualReport:
    """Separated-ODE residual at fixed samples and every grid time."""
    r = ode_samples()
    times = np.unique(grid.points()[:, 0])
    values = np.concatenate(
        [separation_ode_values(params, r, t) for t in times]
    )
    points = np.array([(t, z.real, z.imag) for t in times for z in r])
    return build_report(["separation-ode"], values, points, tol)


def verify_plasticity(
    params: PlasticityParams,
    grid: Optional[Grid] = None,
    tol: Optional[float] = None,
    inject_corruption: bool = False,
) -> ResidualReport:
    """Verify a plasticity solution against the governing systems.

    The general and case-i families are checked against the full system
    (pressure from quadrature or closed form, with the momentum rows at
    the looser momentum tolerance). Every family is checked against the
    reduced angle system; the general family additionally against the
    compatibility condition and the separated ODE.

    Parameters
    ----------
    params : PlasticityParams
        Family and parameters.
    grid : Grid, optional
        Sampling grid; defaults to the configured default grid.
    tol : float, optional
        Residual tolerance; defaults to the configured one.
    inject_corruption : bool
        Add x^2 to the velocity u (negative control).

    Returns
    -------
    ResidualReport
        Merged report of all checks.

    """
    tol = setting("verify", "tol") if tol is None else tol
    grid = plasticity_grid(params, grid or Grid.default())
    solution = PlasticitySolution(params)
    reports = []

    if params.family in ("general", "case-i"):
        full = builtin_system(
            "plasticity-full",
            constants={"rho": params.rho},
            potential=params.V.text,
        )
        momentum_tol = max(tol, setting("verify", "momentum_tol"))
        reports.append(
            pde_residuals(
                full,
                _maybe_corrupt(solution.field(full.vars), inject_corruption),
                grid,
                tol,
                tolerances={n: momentum_tol for n in MOMENTUM_EQUATIONS},
                label=full.name,
            )
        )

    reduced = builtin_system("plasticity-reduced")
    reports.append(
        pde_residuals(
            reduced,
            _maybe_corrupt(solution.field(reduced.vars), inject_corruption),
            grid,
            tol,
            label=reduced.name,
        )
    )

    if params.family == "general":
        theta = _maybe_corrupt(solution.field(("theta",)), inject_corruption)
        reports.append(compatibility_residual(theta, grid, tol))
        reports.append(separation_ode_report(params, grid, min(tol, ODE_TOL)))

    return reports[0].merge(*reports[1:])


def verify_wave_particle(
    solution: WaveParticleSolution,
    grid: Optional[Grid] = None,
    tol: Optional[float] = None,
    inject_corruption: bool = False,
) -> ResidualReport:
    """Verify a wave-particle solution against its system and Liouville."""
    tol = setting("verify", "tol") if tol is None else tol
    grid = grid or Grid.from_settings("wave_particle_grid")
    sys = solution.system()
    field = _maybe_corrupt(solution.field(), inject_corruption)
    system_report = pde_residuals(sys, field, grid, tol, label=sys.name)
    liouville = liouville_residual(
        field.select(("u",)), solution.a, grid, tol
    )
    return system_report.merge(liouville)


def solution_for_system(
    sys: SystemSpec,
    params: Optional[PlasticityParams] = None,
    wave_particle: Optional[WaveParticleSolution] = None,
) -> FieldEvaluator:
    """Pick the solution evaluator providing a system's unknowns."""
    # u and phi are names of both families; the pair means wave-particle
    if set(sys.vars) == set(WAVE_PARTICLE_FIELDS):
        solution = wave_particle or WaveParticleSolution("r")
        return solution.field(sys.vars)
    if set(sys.vars) <= set(FIELD_NAMES):
        return PlasticitySolution(params or PlasticityParams()).field(sys.vars)
    raise InputError(
        f"No solution family provides the unknowns {sys.vars} of {sys.name}"
    )


def verify_system(
    sys: SystemSpec,
    solution: FieldEvaluator,
    grid: Optional[Grid] = None,
    tol: Optional[float] = None,
    inject_corruption: bool = False,
) -> ResidualReport:
    """Residual report of any system against a solution evaluator."""
    grid = grid or Grid.default()
    if sys.p == 2 and grid.nt > 1:
        logging.info(f"{sys.name} has no time coordinate, using t = 0 only")
        grid = replace(grid, t_range=(grid.t_range[0],) * 2, nt=1)
    field = _maybe_corrupt(solution, inject_corruption)
    return pde_residuals(sys, field, grid, tol)


def trace_report(
    params: PlasticityParams,
    grid: Optional[Grid] = None,
    tol: Optional[float] = None,
    count: int = TRACE_SAMPLES,
    seed: Optional[int] = None,
    inject_corruption: bool = False,
) -> ResidualReport:
    """Trace conditions of a plasticity solution at random points.

    The velocity subsystem is checked with the wave vectors (1, i) and
    (1, -i); points are drawn uniformly from the grid's box.

    Parameters
    ----------
    params : PlasticityParams
        Family and parameters.
    grid : Grid, optional
        Box the points are drawn from; masked points are redrawn.
    tol : float, optional
        Residual tolerance.
    count : int
        Number of points.
    seed : int, optional
        Seed of the point generator; defaults to the configured one.
    inject_corruption : bool
        Add x^2 to the velocity u (negative control).

    Returns
    -------
    ResidualReport
        One record per subsystem equation.

    """
    tol = setting("verify", "tol") if tol is None else tol
    grid = plasticity_grid(params, grid or Grid.default())
    rng = np.random.default_rng(
        setting("random", "seed") if seed is None else seed
    )
    sys = builtin_system("plasticity-subsystem")
    field = _maybe_corrupt(
        PlasticitySolution(params).field(sys.vars), inject_corruption
    )
    Lambda = np.array(SUBSYSTEM_WAVE_VECTORS)

    lows, highs = zip(grid.t_range, grid.x_range, grid.y_range)
    points = []
    while len(points) < count:
        point = rng.uniform(lows, highs)
        if grid.mask is None or not grid.mask(point[None, :])[0]:
            points.append(point)
    points = np.array(points)

    residuals = np.array(
        [trace_condition_residual(sys, field, Lambda, p) for p in points]
    )
    return build_report(
        equation_names(sys, "trace"), residuals, points, tol
    )


def inhom_check(
    solution: WaveParticleSolution,
    grid: Optional[Grid] = None,
    tol: Optional[float] = None,
) -> dict:
    """Factorization conditions of the wave-particle system.

    The simple-wave condition is evaluated on the real ray of the
    psi = r family, where it holds with Omega = 1 and L = I. The
    simple-mode condition with lambda = (1, i) is evaluated at the
    solution's values for both readings of Omega and both signs of
    epsilon, reporting the scale Omega would need to annihilate it.

    Returns
    -------
    dict
        ``simple-wave`` records, ``simple-mode`` diagnostics per reading,
        the readings that annihilate the condition and ``pass``, which
        depends on the simple-wave condition only.

    """
    tol = setting("verify", "tol") if tol is None else tol
    grid = grid or Grid.from_settings("wave_particle_grid")
    sys, lam, fac, _ = wave_particle_ray_flow(solution.a, n=solution.n)

    xs = np.linspace(*grid.x_range, grid.nx)
    ray = np.column_stack([np.zeros_like(xs), xs, np.zeros_like(xs)])
    ray_solution = WaveParticleSolution("r", solution.a, solution.n)
    ray_values = ray_solution.field()(ray)
    wave = build_report(
        equation_names(sys, SIMPLE_WAVE),
        np.array(
            [
                inhom_condition_residual(sys, p[1:], u, fac, lam, SIMPLE_WAVE)
                for p, u in zip(ray, ray_values)
            ]
        ),
        ray,
        tol,
    )

    points, _ = grid.masked()
    values = solution.field()(points)
    mode_lam = WaveVector((1.0, 1j))
    modes, annihilating = {}, []
    for reading in READINGS:
        for epsilon in (1, -1):
            fac = wave_particle_factorization(sys, epsilon, reading)
            residual = np.array(
                [
                    inhom_condition_residual(
                        sys, p[1:], u, fac, mode_lam, SIMPLE_MODE
                    )
                    for p, u in zip(points, values)
                ]
            )
            scales = [
                annihilating_scale(sys, p[1:], u, fac, mode_lam, SIMPLE_MODE)
                for p, u in zip(points, values)
            ]
            scales = np.array([s for s in scales if s is not None])
            name = f"{reading}/epsilon={epsilon:+d}"
            max_abs = float(np.max(np.abs(residual)))
            median = (
                complex(np.median(scales.real), np.median(scales.imag))
                if scales.size
                else None
            )
            modes[name] = {
                "max_abs": max_abs,
                "scale_median": (
                    None if median is None else [median.real, median.imag]
                ),
            }
            if max_abs <= tol:
                annihilating.append(name)
            if median is None:
                logging.info(
                    f"Simple-mode condition, {name}: max |residual| "
                    f"{max_abs:.3g}, Omega L annihilates b everywhere"
                )
            else:
                logging.info(
                    f"Simple-mode condition, {name}: max |residual| "
                    f"{max_abs:.3g}, median scale {median:.4g}"
                )

    return {
        SIMPLE_WAVE: [e.to_dict() for e in wave.equations],
        SIMPLE_MODE: modes,
        "annihilating": annihilating,
        "tolerance": tol,
        "pass": wave.passed,
    }
