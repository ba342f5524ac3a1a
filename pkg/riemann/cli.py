"""Command-line interface.

Exit codes: 0 pass, 1 verification failure, 2 usage or input error,
3 numerical failure. Reports are written before a failing exit.
"""

import json
import logging
import sys
from contextlib import contextmanager
from enum import Enum
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
import typer

from riemann.dieshop.design import (
    FIGURES,
    build_die_design,
    is_die_system,
    load_die_config,
)
from riemann.dieshop.io import FORMATS, emit_die_design
from riemann.dispersion.roots import WaveVector, characteristic_pairs
from riemann.errors import InputError, NumericalError
from riemann.solutions.params import (
    FAMILIES,
    PlasticityParams,
    load_params,
    random_damped,
)
from riemann.solutions.plasticity import PlasticitySolution
from riemann.solutions.wave_particle import (
    FIELD_NAMES as WAVE_PARTICLE_FIELDS,
    WaveParticleSolution,
)
from riemann.systems.registry import load_system
from riemann.verify.grid import Grid
from riemann.verify.residuals import det_phi_scan
from riemann.verify.targets import (
    ODE_TOL,
    TRACE_SAMPLES,
    inhom_check,
    plasticity_grid,
    separation_ode_report,
    solution_for_system,
    trace_report,
    verify_plasticity,
    verify_system,
    verify_wave_particle,
)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_NUMERICAL = 3

# instantiate Typer app
app = typer.Typer(rich_markup_mode="rich", add_completion=False)


class Target(str, Enum):
    """Solution family to verify."""

    plasticity = "plasticity"
    waveparticle = "waveparticle"
    system = "system"


@contextmanager
def exit_codes():
    """Turn library errors into the documented exit codes."""
    try:
        yield
    except InputError as e:
        logging.error(f"{type(e).__name__}: {e}")
        raise typer.Exit(EXIT_INPUT) from e
    except NumericalError as e:
        logging.error(f"{type(e).__name__}: {e}")
        raise typer.Exit(EXIT_NUMERICAL) from e


def emit(document: str, out: Optional[Path]) -> None:
    """Write a document to ``out``, or print it."""
    if out is None:
        typer.echo(document)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(document)
    logging.info(f"Output written to {out}")


def finish(passed: bool) -> None:
    """Exit with the failure code unless the check passed."""
    if not passed:
        raise typer.Exit(EXIT_FAIL)


def check_tolerance(tol: Optional[float]) -> Optional[float]:
    """Reject non-positive tolerances."""
    if tol is not None and not tol > 0:
        raise InputError(f"Tolerance must be positive, got {tol}")
    return tol


def _complex(z) -> list:
    return [float(np.real(z)), float(np.imag(z))]


def plasticity_params(
    params: Optional[str], family: Optional[str], seed: Optional[int]
) -> PlasticityParams:
    """Parameters from JSON, random damped ones, or the defaults."""
    if family is not None and family not in FAMILIES:
        raise InputError(f"Family must be one of {FAMILIES}, got '{family}'")
    if params is not None:
        return load_params(params, family)
    if seed is not None:
        logging.info(f"Drawing damped parameters with seed {seed}")
        return random_damped(
            np.random.default_rng(seed), family or "general"
        )
    return PlasticityParams(family=family or "general")


@app.command()
def dispersion(
    system: str = "builtin:plasticity-subsystem",
    state: Optional[str] = None,
    point: Optional[str] = None,
    out: Optional[Path] = None,
):
    """Print the dispersion roots zeta and their kernel vectors.

    Parameters
    ----------
    system : str
        ``builtin:NAME`` or a path to a system JSON document.
    state : str, optional
        JSON list of the unknowns' values, zeros by default.
    point : str, optional
        JSON list of coordinates, for systems depending on them.
    out : Path, optional
        Output file of the JSON document, stdout by default.

    """
    with exit_codes():
        sys_spec = load_system(system)
        u = np.zeros(sys_spec.q) if state is None else json.loads(state)
        x = None if point is None else json.loads(point)
        pairs = characteristic_pairs(sys_spec, u, x)
        document = {
            "system": sys_spec.name,
            "roots": [_complex(lam.components[1]) for lam, _ in pairs],
            "pairs": [
                {
                    "zeta": _complex(lam.components[1]),
                    "kernel": [[_complex(z) for z in v] for v in kernel],
                }
                for lam, kernel in pairs
            ],
        }
        emit(json.dumps(document, indent=4), out)


@app.command()
def verify(
    target: Target,
    system: Optional[str] = None,
    params: Optional[str] = None,
    family: Optional[str] = None,
    seed: Optional[int] = None,
    psi: str = "r",
    a: float = 1.0,
    n: int = 1,
    grid: Optional[str] = None,
    tol: Optional[float] = None,
    out: Optional[Path] = None,
    corrupt: bool = False,
):
    """Verify a solution by grid residuals and print the report.

    Exits with 0 iff every equation is within tolerance.

    Parameters
    ----------
    target : Target
        ``plasticity``, ``waveparticle`` or ``system``.
    system : str, optional
        System of the ``system`` target (``builtin:NAME`` or a path).
    params : str, optional
        Plasticity parameters as JSON text or a JSON file.
    family : str, optional
        Plasticity family: general, case-i or case-ii.
    seed : int, optional
        Draw random damped parameters when ``params`` is omitted.
    psi : str
        Generating function of the wave-particle solution.
    a : float
        Coupling constant of the wave-particle system.
    n : int
        Odd branch index of the wave-particle phase.
    grid : str, optional
        ``default``, ``NXxNY``, ``NXxNYxNT`` or a JSON object.
    tol : float, optional
        Residual tolerance; ``RIEMANN_TOL`` or 1e-5 by default.
    out : Path, optional
        Output file of the report, stdout by default.
    corrupt : bool
        Inject the non-solution u + x^2 (negative control).

    """
    with exit_codes():
        tol = check_tolerance(tol)
        if target == Target.plasticity:
            report = verify_plasticity(
                plasticity_params(params, family, seed),
                Grid.parse(grid),
                tol,
                inject_corruption=corrupt,
            )
        elif target == Target.waveparticle:
            report = verify_wave_particle(
                WaveParticleSolution(psi, a, n),
                Grid.parse(
                    grid, base=Grid.from_settings("wave_particle_grid")
                ),
                tol,
                inject_corruption=corrupt,
            )
        else:
            if system is None:
                raise InputError("verify system needs --system")
            sys_spec = load_system(system)
            wave = set(sys_spec.vars) == set(WAVE_PARTICLE_FIELDS)
            if wave and system.startswith("builtin:"):
                sys_spec = load_system(system, constants={"a": a})
            p = plasticity_params(params, family, seed)
            solution = solution_for_system(
                sys_spec, p, WaveParticleSolution(psi, a, n)
            )
            if wave:
                wave_grid = Grid.from_settings("wave_particle_grid")
                system_grid = Grid.parse(grid, base=wave_grid)
            else:
                system_grid = plasticity_grid(p, Grid.parse(grid))
            report = verify_system(
                sys_spec,
                solution,
                system_grid,
                tol,
                inject_corruption=corrupt,
            )
        report.log_summary()
        emit(report.to_json(), out)
    finish(report.passed)


def separation_ode(
    params: Optional[str] = None,
    family: Optional[str] = None,
    seed: Optional[int] = None,
    grid: Optional[str] = None,
    tol: float = ODE_TOL,
    out: Optional[Path] = None,
):
    """Check the separated ODE of h' at fixed samples inside |r| <= 0.5."""
    with exit_codes():
        check_tolerance(tol)
        report = separation_ode_report(
            plasticity_params(params, family, seed), Grid.parse(grid), tol
        )
        report.log_summary()
        emit(report.to_json(), out)
    finish(report.passed)


app.command("separation-ode")(separation_ode)
app.command("ode417", hidden=True)(separation_ode)


@app.command()
def tracecheck(
    params: Optional[str] = None,
    family: Optional[str] = None,
    seed: Optional[int] = None,
    count: int = TRACE_SAMPLES,
    grid: Optional[str] = None,
    tol: Optional[float] = None,
    out: Optional[Path] = None,
    corrupt: bool = False,
):
    """Trace conditions of a plasticity solution at random points.

    ``seed`` selects both the random parameters (when ``params`` is
    omitted) and the sample points.
    """
    with exit_codes():
        tol = check_tolerance(tol)
        report = trace_report(
            plasticity_params(params, family, seed),
            Grid.parse(grid),
            tol,
            count=count,
            seed=seed,
            inject_corruption=corrupt,
        )
        report.log_summary()
        emit(report.to_json(), out)
    finish(report.passed)


@app.command()
def die(
    figure: str = "fig1",
    config: Optional[str] = None,
    params: Optional[str] = None,
    system: Optional[str] = None,
    tol: Optional[float] = None,
    fmt: str = typer.Option("svg", "--format", help="svg, csv or json"),
    out: Optional[Path] = None,
):
    """Trace an extrusion-die design and emit it as SVG, CSV or JSON.

    With ``--system`` the design's velocity field is also checked against
    that system on its domain; the command then exits with 1 if the
    residuals exceed the tolerance.

    Parameters
    ----------
    figure : str
        Shipped design, ``fig1`` or ``fig2``; ignored with ``config``.
    config : str, optional
        Design configuration as JSON text or a JSON file.
    params : str, optional
        Plasticity parameters (JSON text or file) replacing the design's.
    system : str, optional
        Plasticity system the traced field must satisfy.
    tol : float, optional
        Residual tolerance for ``system``.
    fmt : str
        Output format.
    out : Path, optional
        Output file, stdout by default.

    """
    report = None
    with exit_codes():
        check_tolerance(tol)
        if fmt not in FORMATS:
            raise InputError(f"Format must be one of {FORMATS}, got '{fmt}'")
        if config is None and figure not in FIGURES:
            raise InputError(f"Figure must be one of {FIGURES}")
        document = load_die_config(config if config is not None else figure)
        if params is not None:
            document["params"] = load_params(params).to_dict()
        sys_spec = None
        if system is not None:
            sys_spec = load_system(system)
            if not is_die_system(sys_spec.vars):
                raise InputError(
                    f"{sys_spec.name} is not a plasticity system with "
                    "velocities u and v"
                )
        design = build_die_design(document)
        logging.info(
            f"{design.name}: max tangency residual "
            f"{design.max_tangency_residual():.3g}"
        )
        if sys_spec is not None:
            report = verify_system(
                sys_spec,
                PlasticitySolution(design.params).field(sys_spec.vars),
                plasticity_grid(design.params, design.residual_grid()),
                tol,
            )
            logging.info(
                f"{sys_spec.name} on the {design.name} domain: max residual "
                f"{report.max_abs:.3g}, pass {report.passed}"
            )
        emit(emit_die_design(design, fmt), out)
    if report is not None:
        finish(report.passed)


@app.command("inhom-check")
def inhom_check_command(
    psi: str = "r",
    a: float = 1.0,
    n: int = 1,
    grid: Optional[str] = None,
    tol: Optional[float] = None,
    out: Optional[Path] = None,
):
    """Factorization conditions of the wave-particle system.

    Exits with 0 iff the simple-wave condition holds; the simple-mode
    readings of Omega are reported as diagnostics.
    """
    with exit_codes():
        tol = check_tolerance(tol)
        wave_grid = Grid.from_settings("wave_particle_grid")
        document = inhom_check(
            WaveParticleSolution(psi, a, n),
            Grid.parse(grid, base=wave_grid),
            tol,
        )
        emit(json.dumps(document, indent=4), out)
    finish(document["pass"])


@app.command("det-phi")
def det_phi(
    target: Target = Target.plasticity,
    params: Optional[str] = None,
    family: Optional[str] = None,
    seed: Optional[int] = None,
    psi: str = "r",
    a: float = 1.0,
    n: int = 1,
    grid: Optional[str] = None,
    out: Optional[Path] = None,
):
    """Scan the gradient-catastrophe determinant of a solution.

    The wave vectors of the shipped families are constant, so the scan
    runs with a vanishing wave-vector derivative. Exits with 1 if any
    point is flagged.
    """
    with exit_codes():
        if target == Target.plasticity:
            p = plasticity_params(params, family, seed)
            solution = PlasticitySolution(p).field(("u", "v"))
            scan_grid = plasticity_grid(p, Grid.parse(grid))
        elif target == Target.waveparticle:
            solution = WaveParticleSolution(psi, a, n).field()
            scan_grid = Grid.parse(
                grid, base=Grid.from_settings("wave_particle_grid")
            )
        else:
            raise InputError("det-phi scans plasticity or waveparticle")
        scan = det_phi_scan(
            solution, None, scan_grid, WaveVector((1.0, 1j))
        )
        emit(json.dumps(scan.to_dict(), indent=4), out)
    finish(not scan.flags.any())


def run_command(argv: Sequence[str]) -> int:
    """Run the CLI on an argument list and return its exit code."""
    try:
        app(args=list(argv), prog_name="riemann")
    except SystemExit as e:
        if e.code is None:
            return EXIT_PASS
        return e.code if isinstance(e.code, int) else EXIT_INPUT
    return EXIT_PASS


def app_wrapper():
    """Wrap function for the Typer app."""
    logging.getLogger().setLevel(logging.INFO)
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    app_wrapper()
