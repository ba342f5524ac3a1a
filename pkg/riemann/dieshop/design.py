"""Extrusion-die designs built from plasticity velocity fields."""

import json
import logging
from collections.abc import Mapping
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

import numpy as np
import yaml  # type: ignore

from riemann.dieshop.streamlines import (
    Streamline,
    StreamlineSeed,
    tangency_residual,
    trace_streamlines,
)
from riemann.errors import ConfigError, InputError
from riemann.solutions.params import PlasticityParams
from riemann.solutions.plasticity import FIELD_NAMES, PlasticitySolution
from riemann.verify.grid import Grid

FIGURES_CONFIG = Path(__file__).parent / "config" / "figures.yaml"
FIGURES = ("fig1", "fig2")
CURVE_KINDS = ("wall", "flow", "inlet", "outlet")
RESIDUAL_GRID_POINTS = 17


def load_figures_config() -> dict:
    """Read the shipped die designs."""
    with open(FIGURES_CONFIG) as f:
        return yaml.safe_load(f)


@dataclass(frozen=True, eq=False)
class DieDesign:
    """A die: walls and flow lines of the material, and the boundaries of
    the plastic region traced with the feed and extraction velocities.

    Parameters
    ----------
    name : str
        Design name.
    params : PlasticityParams
        Solution family parameters.
    t : float
        Time at which the velocity field is frozen.
    feed, exit : tuple[float, float]
        Tool feed (U0, V0) and extraction (U1, V1) velocities.
    domain : tuple[float, float, float, float]
        Traced region (xmin, xmax, ymin, ymax).
    walls, interior, inlet, outlet : list[Streamline]
        Die walls, interior flow lines and boundary curves C1 and C2.

    """

    name: str
    params: PlasticityParams
    t: float
    feed: tuple
    exit: tuple
    domain: tuple
    walls: list = field(default_factory=list)
    interior: list = field(default_factory=list)
    inlet: list = field(default_factory=list)
    outlet: list = field(default_factory=list)

    def curves(self) -> list[tuple[str, Streamline]]:
        """All polylines tagged by kind, walls first."""
        groups = (self.walls, self.interior, self.inlet, self.outlet)
        return [
            (kind, line)
            for kind, lines in zip(CURVE_KINDS, groups)
            for line in lines
        ]

    def max_tangency_residual(self) -> float:
        """Largest tangency residual over all polylines."""
        return max(
            (tangency_residual(line) for _, line in self.curves()),
            default=0.0,
        )

    def residual_grid(self, n: int = RESIDUAL_GRID_POINTS) -> Grid:
        """An n x n grid over the domain at the design time."""
        xmin, xmax, ymin, ymax = self.domain
        return Grid(
            t_range=(self.t, self.t),
            x_range=(xmin, xmax),
            y_range=(ymin, ymax),
            nt=1,
            nx=n,
            ny=n,
        )


def is_die_system(names) -> bool:
    """True iff a system's unknowns are plasticity fields with u and v."""
    return {"u", "v"} <= set(names) <= set(FIELD_NAMES)


def _pair(value, key: str) -> tuple:
    try:
        a, b = value
        return float(a), float(b)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"'{key}' must be a pair of numbers") from e


def _seeds(points, prefix: str, ds: float, s_max: float) -> list:
    return [
        StreamlineSeed(
            start=_pair(p, prefix),
            ds=ds,
            s_max=s_max,
            curve_id=f"{prefix}-{k + 1}",
        )
        for k, p in enumerate(points or [])
    ]


def build_die_design(config: Mapping, name: Optional[str] = None) -> DieDesign:
    """Trace a die design from a configuration mapping.

    Parameters
    ----------
    config : Mapping
        Keys ``params``, ``feed``, ``exit``, ``domain``, ``walls`` (or
        ``seeds``), ``interior``, ``inlet``, ``outlet`` and optionally
        ``t``, ``ds``, ``s_max``. With ``figure`` set to ``fig1`` or
        ``fig2`` the shipped design supplies the missing keys.
    name : str, optional
        Design name; defaults to the figure name or ``custom``.

    Returns
    -------
    DieDesign
        The traced design.

    """
    shipped = load_figures_config()
    figure = config.get("figure", "custom")
    if figure in FIGURES:
        config = {**shipped[figure], **config}
    elif figure != "custom":
        raise InputError(
            f"Unknown figure '{figure}'; expected one of {FIGURES} or custom"
        )
    required = ("params", "feed", "exit", "domain")
    missing = [k for k in required if k not in config]
    if missing:
        raise ConfigError(f"Die design is missing {', '.join(missing)}")

    params = PlasticityParams.from_dict(config["params"])
    t = float(config.get("t", 0.0))
    feed = _pair(config["feed"], "feed")
    exit_ = _pair(config["exit"], "exit")
    domain = tuple(float(v) for v in config["domain"])
    if len(domain) != 4 or domain[0] >= domain[1] or domain[2] >= domain[3]:
        raise ConfigError("'domain' must be [xmin, xmax, ymin, ymax]")

    diagonal = float(np.hypot(domain[1] - domain[0], domain[3] - domain[2]))
    ds = float(config.get("ds", shipped["ds_fraction"] * diagonal))
    s_max = float(config.get("s_max", shipped["s_max_factor"] * diagonal))

    groups = {
        "wall": _seeds(
            config.get("walls", config.get("seeds")), "wall", ds, s_max
        ),
        "flow": _seeds(config.get("interior"), "flow", ds, s_max),
        "inlet": _seeds(config.get("inlet"), "C1", ds, s_max),
        "outlet": _seeds(config.get("outlet"), "C2", ds, s_max),
    }
    # walls and flow lines follow the material, C1 and C2 the tool
    relative = {
        "wall": (0.0, 0.0),
        "flow": (0.0, 0.0),
        "inlet": feed,
        "outlet": exit_,
    }
    seeds = [s for kind in CURVE_KINDS for s in groups[kind]]
    if not seeds:
        raise ConfigError("Die design has no seeds")
    U0 = [relative[kind][0] for kind in CURVE_KINDS for _ in groups[kind]]
    V0 = [relative[kind][1] for kind in CURVE_KINDS for _ in groups[kind]]

    velocity = PlasticitySolution(params).velocity(t)
    lines = iter(trace_streamlines(velocity, U0, V0, seeds, domain))
    traced = {
        kind: [next(lines) for _ in groups[kind]] for kind in CURVE_KINDS
    }

    design = DieDesign(
        name=name or (figure if figure in FIGURES else "custom"),
        params=params,
        t=t,
        feed=feed,
        exit=exit_,
        domain=domain,
        walls=traced["wall"],
        interior=traced["flow"],
        inlet=traced["inlet"],
        outlet=traced["outlet"],
    )
    logging.info(
        f"Die design {design.name}: {len(seeds)} curves traced, "
        f"max tangency residual {design.max_tangency_residual():.2e}"
    )
    return design


def reproduce_figure(which: str) -> DieDesign:
    """Trace one of the shipped designs, ``fig1`` or ``fig2``."""
    if which not in FIGURES:
        raise InputError(
            f"Unknown figure '{which}'; expected one of {FIGURES}"
        )
    return build_die_design({"figure": which})


def load_die_config(source: Union[str, Path, Mapping]) -> dict:
    """Design configuration from a figure name, JSON text or a JSON file."""
    if isinstance(source, Mapping):
        return dict(source)
    text = str(source)
    if text in FIGURES:
        return {"figure": text}
    if Path(text).is_file():
        text = Path(text).read_text()
    try:
        config = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"Invalid die design JSON: {e}") from e
    if not isinstance(config, Mapping):
        raise ConfigError("Die design must be a JSON object")
    return dict(config)


def load_die_design(source: Union[str, Path, Mapping]) -> DieDesign:
    """Build a design from a figure name, JSON text or a JSON file."""
    return build_die_design(load_die_config(source))
