"""Quasilinear systems A^i(u) u_i = b(u) and their configuration."""

import json
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np

from riemann.errors import (
    ConfigError,
    EvaluationError,
    InputError,
    point_str,
)
from riemann.systems.expressions import Expression, Number, parse_expression

REQUIRED_KEYS = ("p", "q", "m", "vars", "A", "b")
IMAGINARY_GUARD = 1e-12


@dataclass(frozen=True)
class SystemSpec:
    """A first-order quasilinear system.

    Parameters
    ----------
    name : str
        Identifier of the system.
    p, q, m : int
        Number of independent variables, unknowns and equations.
    vars : tuple[str, ...]
        Names of the q unknowns.
    A : tuple
        p coefficient matrices, each a tuple of m rows of q Expressions.
    b : tuple[Expression, ...]
        Source terms, one per equation.
    coords : tuple[str, ...]
        Names of the p independent variables.
    constants : dict
        Named real constants available to every entry.
    equations : tuple[str, ...]
        Names of the m equations, used in residual reports.
    potential : Expression, optional
        Scalar potential in the coordinates; its partial derivatives
        are bound as ``V_<coord>``.

    """

    name: str
    p: int
    q: int
    m: int
    vars: tuple
    A: tuple = field(repr=False)
    b: tuple = field(repr=False)
    coords: tuple = ()
    constants: dict = field(default_factory=dict)
    potential: Optional[Expression] = None
    equations: tuple = ()

    @property
    def is_homogeneous(self) -> bool:
        """True if every source term is the literal 0."""
        return all(
            isinstance(e.root, Number) and e.root.value == 0 for e in self.b
        )

    def coord_index(self, name: str) -> int:
        """Position of a coordinate name."""
        return self.coords.index(name)


def default_coords(p: int) -> tuple:
    """Coordinate names used when a document does not give any."""
    if p == 2:
        return ("x", "y")
    if p == 3:
        return ("t", "x", "y")
    return tuple(f"x{i + 1}" for i in range(p))


def potential_names(coords: Sequence[str]) -> tuple:
    """Names bound from the potential: V and its partial derivatives."""
    return ("V",) + tuple(f"V_{c}" for c in coords)


def _parse_entry(text: Any, allowed: frozenset, where: str) -> Expression:
    if isinstance(text, (int, float)):
        text = repr(text)
    if not isinstance(text, str):
        raise ConfigError(f"{where}: expected an expression string")
    try:
        return parse_expression(text, allowed)
    except InputError as e:
        raise ConfigError(f"{where}: {e}") from e


def _check_int(document: Mapping, key: str) -> int:
    value = document[key]
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise ConfigError(f"'{key}' must be a positive integer")
    return value


def _load_document(document) -> Mapping:
    if isinstance(document, Mapping):
        return document
    if isinstance(document, Path):
        document = document.read_text()
    try:
        loaded = json.loads(document)
    except json.JSONDecodeError as e:
        raise ConfigError(f"Invalid JSON: {e}") from e
    if not isinstance(loaded, Mapping):
        raise ConfigError("System document must be a JSON object")
    return loaded


def parse_system_config(document: Union[str, Path, Mapping]) -> SystemSpec:
    """Build a validated SystemSpec from a JSON document.

    Parameters
    ----------
    document : str, Path or Mapping
        JSON text, path to a JSON file, or the decoded object, with keys
        ``p, q, m, vars, A, b`` and optional ``name, coords, constants,
        potential, equations``.

    Returns
    -------
    SystemSpec
        The validated system.

    Raises
    ------
    ConfigError
        On missing keys, shape mismatches (naming the offending matrix
        index) and expression errors (naming the entry).

    """
    document = _load_document(document)
    missing = [k for k in REQUIRED_KEYS if k not in document]
    if missing:
        raise ConfigError(f"Missing keys: {', '.join(missing)}")

    p, q, m = (_check_int(document, k) for k in ("p", "q", "m"))
    names = tuple(document["vars"])
    if len(names) != q:
        raise ConfigError(f"'vars' has {len(names)} names, expected q={q}")
    coords = tuple(document.get("coords") or default_coords(p))
    if len(coords) != p:
        raise ConfigError(f"'coords' has {len(coords)} names, expected p={p}")
    constants = {
        str(k): float(v) for k, v in (document.get("constants") or {}).items()
    }

    potential = None
    allowed = set(names) | set(coords) | set(constants)
    if document.get("potential") is not None:
        potential = _parse_entry(
            document["potential"],
            frozenset(set(coords) | set(constants)),
            "potential",
        )
        allowed |= set(potential_names(coords))
    allowed = frozenset(allowed)

    matrices = document["A"]
    if not isinstance(matrices, Sequence) or len(matrices) != p:
        raise ConfigError(f"'A' must hold p={p} matrices")
    A = []
    for i, matrix in enumerate(matrices):
        shape = (len(matrix), *{len(row) for row in matrix})
        if shape != (m, q):
            raise ConfigError(
                f"A[{i}] has shape {'x'.join(map(str, shape))}, "
                f"expected {m}x{q}"
            )
        A.append(
            tuple(
                tuple(
                    _parse_entry(entry, allowed, f"A[{i}][{r}][{c}]")
                    for c, entry in enumerate(row)
                )
                for r, row in enumerate(matrix)
            )
        )

    if len(document["b"]) != m:
        raise ConfigError(
            f"'b' has {len(document['b'])} entries, expected {m}"
        )
    b = tuple(
        _parse_entry(entry, allowed, f"b[{r}]")
        for r, entry in enumerate(document["b"])
    )
    equations = tuple(
        document.get("equations") or (f"eq{r + 1}" for r in range(m))
    )
    if len(equations) != m:
        raise ConfigError(
            f"'equations' has {len(equations)} names, expected m={m}"
        )

    return SystemSpec(
        name=str(document.get("name", "custom")),
        p=p,
        q=q,
        m=m,
        vars=names,
        A=tuple(A),
        b=b,
        coords=coords,
        constants=constants,
        potential=potential,
        equations=equations,
    )


def potential_bindings(
    sys: SystemSpec, x: Sequence[float], step: float = 1e-4
) -> dict:
    """Value and 4th-order central-difference gradient of the potential."""
    x = np.asarray(x, dtype=float)
    base = {**sys.constants, **dict(zip(sys.coords, x))}
    bindings = {"V": sys.potential.evaluate(base)}
    for k, c in enumerate(sys.coords):
        h = step * max(1.0, abs(x[k]))
        offsets = np.array([-2.0, -1.0, 1.0, 2.0]) * h
        shifted = {**base, c: x[k] + offsets}
        values = np.broadcast_to(sys.potential.evaluate(shifted), (4,))
        bindings[f"V_{c}"] = (
            values[0] - 8 * values[1] + 8 * values[2] - values[3]
        ) / (12 * h)
    return bindings


def eval_system(
    sys: SystemSpec, u, x: Optional[Sequence[float]] = None
) -> tuple[list[np.ndarray], np.ndarray]:
    """Evaluate A^i(u) and b(u).

    Parameters
    ----------
    sys : SystemSpec
        The system.
    u : array_like
        Values of the q unknowns.
    x : Sequence[float], optional
        Coordinates of the evaluation point; needed when entries refer
        to coordinates or to the potential.

    Returns
    -------
    tuple[list[np.ndarray], np.ndarray]
        The p complex m x q matrices and the complex m-vector b.

    """
    u = np.asarray(u, dtype=complex).ravel()
    if u.shape != (sys.q,):
        raise InputError(f"Expected {sys.q} unknowns, got {u.shape[0]}")

    bindings = {**sys.constants, **dict(zip(sys.vars, u))}
    if x is not None:
        if len(x) != sys.p:
            raise InputError(f"Expected a point with {sys.p} coordinates")
        bindings.update(zip(sys.coords, np.asarray(x, dtype=float)))
        if sys.potential is not None:
            bindings.update(potential_bindings(sys, x))

    def entry(expr: Expression, where: str) -> complex:
        try:
            return complex(expr.evaluate(bindings))
        except EvaluationError as e:
            raise EvaluationError(
                f"{sys.name} {where} at {point_str(x)}: {e}"
            ) from e

    A = [
        np.array(
            [
                [entry(e, f"A[{i}][{r}][{c}]") for c, e in enumerate(row)]
                for r, row in enumerate(matrix)
            ],
            dtype=complex,
        )
        for i, matrix in enumerate(sys.A)
    ]
    b = np.array([entry(e, f"b[{r}]") for r, e in enumerate(sys.b)])
    return A, b


def as_real(value, what: str = "value") -> np.ndarray:
    """Real part of a complex result, rejecting material imaginary parts."""
    value = np.asarray(value, dtype=complex)
    excess = np.abs(value.imag) > IMAGINARY_GUARD * np.maximum(
        1.0, np.abs(value.real)
    )
    if np.any(excess):
        raise EvaluationError(f"{what} has a non-negligible imaginary part")
    return value.real
