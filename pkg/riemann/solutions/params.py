"""Time-dependent parameters of the plasticity solution families."""

import json
from collections.abc import Mapping
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Union

import numpy as np

from riemann.errors import ConfigError, DomainError, InputError
from riemann.settings import load_settings
from riemann.systems.expressions import Expression, parse_expression

FAMILIES = ("general", "case-i", "case-ii")
_DIFF_STEP = 1e-4


@dataclass(frozen=True)
class ConstantCoefficient:
    """Coefficient constant in time."""

    value: complex

    def __call__(self, t):
        """Value at time t."""
        return np.full(np.shape(t), complex(self.value))[()]

    def derivative(self, t):
        """Time derivative at t."""
        return np.zeros(np.shape(t), dtype=complex)[()]

    def to_dict(self) -> dict:
        """JSON form of the coefficient."""
        return {"const": [self.value.real, self.value.imag]}


@dataclass(frozen=True)
class DampedCoefficient:
    """c(t) = a exp(-s t) + i b exp(-q t)."""

    a: float
    s: float
    b: float
    q: float

    def __call__(self, t):
        """Value at time t."""
        t = np.asarray(t, dtype=float)
        real = self.a * np.exp(-self.s * t)
        return (real + 1j * self.b * np.exp(-self.q * t))[()]

    def derivative(self, t):
        """Time derivative at t."""
        t = np.asarray(t, dtype=float)
        return (
            -self.s * self.a * np.exp(-self.s * t)
            - 1j * self.q * self.b * np.exp(-self.q * t)
        )[()]

    def to_dict(self) -> dict:
        """JSON form of the coefficient."""
        return {"damped": {"a": self.a, "s": self.s, "b": self.b, "q": self.q}}


@dataclass(frozen=True)
class ExpressionCoefficient:
    """Coefficient given as an expression in t, differentiated numerically."""

    expr: Expression

    def __call__(self, t):
        """Value at time t."""
        t = np.asarray(t, dtype=float)
        return np.broadcast_to(self.expr.evaluate(t=t), t.shape)[()]

    def derivative(self, t):
        """Time derivative by 4th-order central differences."""
        t = np.asarray(t, dtype=float)
        h = _DIFF_STEP * np.maximum(1.0, np.abs(t))
        return (
            self(t - 2 * h)
            - 8 * self(t - h)
            + 8 * self(t + h)
            - self(t + 2 * h)
        ) / (12 * h)

    def to_dict(self) -> dict:
        """JSON form of the coefficient."""
        return {"expr": self.expr.text}


Coefficient = Union[
    ConstantCoefficient, DampedCoefficient, ExpressionCoefficient
]


def coefficient_from_dict(spec, where: str = "coefficient") -> Coefficient:
    """Parse ``{"damped": {...}}``, ``{"expr": ...}`` or ``{"const": ...}``.

    A bare number is accepted as a real constant.
    """
    if isinstance(spec, (int, float)):
        return ConstantCoefficient(complex(spec))
    if not isinstance(spec, Mapping) or len(spec) != 1:
        raise ConfigError(f"{where}: expected one of damped, expr, const")
    kind, value = next(iter(spec.items()))
    try:
        if kind == "const":
            if isinstance(value, (int, float)):
                return ConstantCoefficient(complex(value))
            re_part, im_part = value
            return ConstantCoefficient(complex(re_part, im_part))
        if kind == "damped":
            return DampedCoefficient(
                *(float(value.get(k, 0.0)) for k in ("a", "s", "b", "q"))
            )
        if kind == "expr":
            return ExpressionCoefficient(parse_expression(value, ["t"]))
    except (TypeError, ValueError, AttributeError) as e:
        raise ConfigError(f"{where}: {e}") from e
    raise ConfigError(f"{where}: unknown coefficient kind '{kind}'")


@dataclass(frozen=True)
class PlasticityParams:
    """Parameters of a plasticity solution family.

    Parameters
    ----------
    family : str
        One of ``general``, ``case-i``, ``case-ii``.
    c1, c2, c3 : Coefficient
        Complex functions of time.
    omega : Coefficient
        Real separation constant (general family), nonzero.
    sigma0 : Coefficient
        Real integration constant of the pressure.
    rho : float
        Density.
    V : Expression
        Potential in (t, x, y).

    """

    family: str = "general"
    c1: Coefficient = ConstantCoefficient(1.0)
    c2: Coefficient = ConstantCoefficient(0.0)
    c3: Coefficient = ConstantCoefficient(0.0)
    omega: Coefficient = ConstantCoefficient(1.0)
    sigma0: Coefficient = ConstantCoefficient(0.0)
    rho: float = 1.0
    V: Expression = field(default_factory=lambda: parse_expression("0"))

    def __post_init__(self) -> None:
        """Validate the family, the density and the potential."""
        if self.family not in FAMILIES:
            raise InputError(
                f"Unknown family '{self.family}'; expected one of {FAMILIES}"
            )
        if not self.rho > 0:
            raise InputError("Density must be positive")
        unknown = self.V.variables - {"t", "x", "y"}
        if unknown:
            raise InputError(f"Potential uses unknown names {sorted(unknown)}")

    def omega_at(self, t):
        """Real separation constant, checked nonzero for the general family."""
        omega = np.real(self.omega(t))
        if self.family == "general" and np.any(omega == 0):
            raise DomainError("The separation constant must be nonzero")
        return omega

    def with_family(self, family: str) -> "PlasticityParams":
        """Same parameters under another family."""
        return replace(self, family=family)

    def to_dict(self) -> dict:
        """JSON form, read back by :meth:`from_dict`."""
        return {
            "family": self.family,
            "c1": self.c1.to_dict(),
            "c2": self.c2.to_dict(),
            "c3": self.c3.to_dict(),
            "Omega": self.omega.to_dict(),
            "sigma0": self.sigma0.to_dict(),
            "rho": self.rho,
            "V": self.V.text,
        }

    @classmethod
    def from_dict(
        cls, document: Mapping, family: Optional[str] = None
    ) -> "PlasticityParams":
        """Build parameters from the JSON schema.

        Missing coefficients default to c1 = 1, c2 = c3 = 0, Omega = 1,
        sigma0 = 0, rho = 1 and V = 0.
        """
        kwargs = {}
        for key, name in (
            ("c1", "c1"),
            ("c2", "c2"),
            ("c3", "c3"),
            ("Omega", "omega"),
            ("sigma0", "sigma0"),
        ):
            if key in document:
                kwargs[name] = coefficient_from_dict(document[key], key)
        if "rho" in document:
            kwargs["rho"] = float(document["rho"])
        if "V" in document:
            kwargs["V"] = parse_expression(str(document["V"]), ["t", "x", "y"])
        kwargs["family"] = family or document.get("family", "general")
        return cls(**kwargs)


def load_params(
    source: Union[str, Path, Mapping], family: Optional[str] = None
) -> PlasticityParams:
    """Load parameters from JSON text, a JSON file or a mapping."""
    if isinstance(source, Mapping):
        return PlasticityParams.from_dict(source, family)
    text = str(source)
    if Path(text).suffix == ".json" and Path(text).is_file():
        text = Path(text).read_text()
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"Invalid parameter JSON: {e}") from e
    if not isinstance(document, Mapping):
        raise ConfigError("Parameters must be a JSON object")
    return PlasticityParams.from_dict(document, family)


def random_damped(
    rng: np.random.Generator,
    family: str = "general",
    rho: float = 1.0,
    V: str = "0",
) -> PlasticityParams:
    """Draw a damped parameter set.

    Amplitudes are small enough that c2 + c1 r stays well inside the unit
    disk for |r| <= sqrt(2), so the default grid avoids the branch points
    of the inverse error function.
    """
    cfg = load_settings()["random"]

    def damped(amplitude: float) -> DampedCoefficient:
        a, b = rng.uniform(-1, 1, size=2) * amplitude / np.sqrt(2)
        s, q = rng.uniform(0, cfg["damped_rate"], size=2)
        return DampedCoefficient(float(a), float(s), float(b), float(q))

    sign = rng.choice([-1.0, 1.0])
    return PlasticityParams(
        family=family,
        c1=damped(cfg["damped_c1_amplitude"]),
        c2=damped(cfg["damped_c2_amplitude"]),
        c3=damped(cfg["damped_c3_amplitude"]),
        omega=ConstantCoefficient(sign * rng.uniform(0.5, 1.5)),
        sigma0=DampedCoefficient(float(rng.uniform(-1, 1)), 0.5, 0.0, 0.0),
        rho=rho,
        V=parse_expression(V, ["t", "x", "y"]),
    )
