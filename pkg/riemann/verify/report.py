"""Residual reports and their JSON form."""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from riemann.errors import InputError


@dataclass(frozen=True)
class EquationRecord:
    """Aggregated absolute residual of one equation over a grid."""

    name: str
    max_abs: float
    mean_abs: float
    argmax: tuple
    tolerance: float

    @property
    def passed(self) -> bool:
        """True iff the maximum is within tolerance."""
        return bool(self.max_abs <= self.tolerance)

    def to_dict(self) -> dict:
        """JSON form of the record."""
        return {
            "name": self.name,
            "max_abs": self.max_abs,
            "mean_abs": self.mean_abs,
            "argmax": list(self.argmax),
            "tolerance": self.tolerance,
        }


@dataclass(frozen=True)
class ResidualReport:
    """Per-equation residual records for one verification run.

    Parameters
    ----------
    equations : list[EquationRecord]
        Records in equation order.
    tolerance : float
        Tolerance of the run; individual equations may use a looser one.
    masked : int
        Number of grid points excluded by the grid mask.
    failed : int
        Number of grid points dropped because their stencil could not
        be evaluated.

    """

    equations: list = field(default_factory=list)
    tolerance: float = 1e-5
    masked: int = 0
    failed: int = 0

    @property
    def passed(self) -> bool:
        """True iff every equation is within its tolerance."""
        return all(e.passed for e in self.equations)

    @property
    def max_abs(self) -> float:
        """Largest residual over all equations."""
        return max((e.max_abs for e in self.equations), default=0.0)

    def record(self, name: str) -> EquationRecord:
        """Record of the named equation."""
        for e in self.equations:
            if e.name == name:
                return e
        raise KeyError(name)

    def merge(self, *others: "ResidualReport") -> "ResidualReport":
        """Concatenate records; point counts take the maximum."""
        reports = (self,) + others
        return ResidualReport(
            equations=[e for r in reports for e in r.equations],
            tolerance=self.tolerance,
            masked=max(r.masked for r in reports),
            failed=max(r.failed for r in reports),
        )

    def to_dict(self) -> dict:
        """JSON form of the report."""
        return {
            "equations": [e.to_dict() for e in self.equations],
            "tolerance": self.tolerance,
            "pass": self.passed,
            "masked": self.masked,
            "failed": self.failed,
        }

    def to_json(self) -> str:
        """Indented JSON text of the report."""
        return json.dumps(self.to_dict(), indent=2)

    def write(self, path: Union[str, Path]) -> None:
        """Write the JSON report to a file."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_json() + "\n")
        logging.info(f"Report written to {path}")

    def log_summary(self) -> None:
        """Log one line per equation."""
        for e in self.equations:
            status = "ok" if e.passed else "FAIL"
            logging.info(
                f"{e.name}: max {e.max_abs:.3e} (tol {e.tolerance:.1e}) "
                f"{status}"
            )
        if self.masked:
            logging.info(f"{self.masked} point(s) masked")
        if self.failed:
            logging.info(f"{self.failed} point(s) without a stencil")


def build_report(
    names: Sequence[str],
    residuals: np.ndarray,
    points: np.ndarray,
    tol: float,
    masked: int = 0,
    tolerances: Optional[dict] = None,
    failed: int = 0,
) -> ResidualReport:
    """Aggregate an (N, m) array of residuals into a report.

    Parameters
    ----------
    names : Sequence[str]
        Equation names, one per column.
    residuals : np.ndarray
        Residual values (complex allowed) at the N unmasked points.
    points : np.ndarray
        The (N, 3) points.
    tol : float
        Default tolerance.
    masked : int
        Number of points excluded by the grid mask.
    tolerances : dict, optional
        Per-equation tolerance overrides keyed by name.
    failed : int
        Number of points dropped for lack of a stencil.

    """
    if not tol > 0:
        raise InputError(f"Tolerance must be positive, got {tol}")
    if len(points) == 0:
        raise InputError("Every grid point is masked")
    residuals = np.abs(np.asarray(residuals)).reshape(len(points), -1)
    tolerances = tolerances or {}
    records = []
    for k, name in enumerate(names):
        column = residuals[:, k]
        i = int(np.argmax(column))
        records.append(
            EquationRecord(
                name=name,
                max_abs=float(column[i]),
                mean_abs=float(np.mean(column)),
                argmax=tuple(float(c) for c in points[i]),
                tolerance=float(tolerances.get(name, tol)),
            )
        )
    return ResidualReport(records, float(tol), int(masked), int(failed))
