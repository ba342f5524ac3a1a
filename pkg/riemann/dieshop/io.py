"""SVG, CSV and JSON emission of die designs."""

import io
import json
import logging
from pathlib import Path
from typing import Union

import matplotlib
import pandas as pd
from matplotlib.figure import Figure

from riemann.dieshop.design import DieDesign
from riemann.errors import InputError

FORMATS = ("svg", "csv", "json")
CSV_COLUMNS = ["curve_id", "s", "x", "y", "u", "v"]
STYLES = {
    "wall": {"color": "black", "linewidth": 2.0},
    "flow": {"color": "tab:blue", "linewidth": 0.8},
    "inlet": {"color": "tab:red", "linewidth": 1.2, "linestyle": "--"},
    "outlet": {"color": "tab:green", "linewidth": 1.2, "linestyle": "--"},
}
MARGIN = 0.05


def _check(design: DieDesign) -> None:
    curves = design.curves()
    if not curves:
        raise InputError(f"Die design '{design.name}' has no polylines")
    for _, line in curves:
        if len(line) == 0:
            raise InputError(f"Polyline '{line.curve_id}' is empty")


def design_dataframe(design: DieDesign) -> pd.DataFrame:
    """One row per polyline vertex."""
    _check(design)
    frames = [
        pd.DataFrame(
            {
                "curve_id": line.curve_id,
                "s": line.s,
                "x": line.points[:, 0],
                "y": line.points[:, 1],
                "u": line.velocity[:, 0],
                "v": line.velocity[:, 1],
            }
        )
        for _, line in design.curves()
    ]
    return pd.concat(frames, ignore_index=True)[CSV_COLUMNS]


def design_document(design: DieDesign) -> dict:
    """Design parameters and polylines as a JSON-ready mapping."""
    _check(design)
    return {
        "name": design.name,
        "params": design.params.to_dict(),
        "t": design.t,
        "feed": list(design.feed),
        "exit": list(design.exit),
        "domain": list(design.domain),
        "curves": [
            {
                "curve_id": line.curve_id,
                "kind": kind,
                "termination": list(line.termination),
                "s": line.s.tolist(),
                "points": line.points.tolist(),
            }
            for kind, line in design.curves()
        ],
    }


def render_svg(design: DieDesign) -> str:
    """Draw the polylines, one SVG group per curve id."""
    _check(design)
    figure = Figure(figsize=(6, 6))
    figure.patch.set_visible(False)
    ax = figure.add_axes((0, 0, 1, 1))
    ax.set_axis_off()
    for kind, line in design.curves():
        (artist,) = ax.plot(
            line.points[:, 0], line.points[:, 1], **STYLES[kind]
        )
        artist.set_gid(line.curve_id)
    ax.set_aspect("equal", adjustable="datalim")
    ax.margins(MARGIN)

    buffer = io.StringIO()
    with matplotlib.rc_context({"svg.hashsalt": "riemann"}):
        figure.savefig(buffer, format="svg", metadata={"Date": None})
    return buffer.getvalue()


def emit_die_design(design: DieDesign, fmt: str = "svg") -> str:
    """Render a design as an SVG or CSV document.

    Parameters
    ----------
    design : DieDesign
        Traced design with at least one non-empty polyline.
    fmt : str
        ``"svg"``, ``"csv"`` or ``"json"``.

    Returns
    -------
    str
        The document text.

    """
    if fmt == "svg":
        return render_svg(design)
    if fmt == "csv":
        return design_dataframe(design).to_csv(index=False)
    if fmt == "json":
        return json.dumps(design_document(design), indent=2)
    raise InputError(f"Format must be one of {FORMATS}, got '{fmt}'")


def write_die_design(
    design: DieDesign, path: Union[str, Path], fmt: str = "svg"
) -> Path:
    """Write a design document to a file."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(emit_die_design(design, fmt))
    logging.info(f"Die design {design.name} written to {path}")
    return path
