"""Wave-particle solutions generated by one holomorphic function.

A holomorphic psi(r) with r = x + iy gives the shock amplitude and phase

    u = 2 ln(sqrt(8) |psi'| / (a (psi + conj(psi))))
    phi = pi - 2 arg(psi') + 2 n pi,   n odd.

The phase is pi - 2 arg(psi') rather than the principal logarithm of
-conj(psi')/psi'. Both agree modulo 2 pi, but the principal value wraps
by 2 pi, flipping the sign of the sin(phi/2), cos(phi/2) source terms;
the form used here only jumps by the true period 4 pi.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from riemann.dispersion.factorization import InhomFactorization
from riemann.dispersion.roots import WaveVector
from riemann.errors import DomainError, EvaluationError, InputError
from riemann.solutions.fields import FieldEvaluator, as_points
from riemann.systems.expressions import (
    Binary,
    Call,
    Expression,
    Name,
    Node,
    Number,
    Unary,
    parse_expression,
)
from riemann.systems.registry import builtin_system
from riemann.systems.spec import SystemSpec

VARIABLE = "r"
RICHARDSON_STEP = 1e-5
FIELD_NAMES = ("u", "phi")
PHASE_PERIOD = 4 * np.pi


def _is_constant(node: Node) -> bool:
    if isinstance(node, Name):
        return node.id != VARIABLE
    if isinstance(node, Number):
        return True
    if isinstance(node, Unary):
        return _is_constant(node.operand)
    if isinstance(node, Binary):
        return _is_constant(node.left) and _is_constant(node.right)
    return _is_constant(node.arg)


def _derivative(node: Node) -> Optional[Node]:
    """d/dr of sums of constant multiples of r^n and exp(k r).

    Returns None for anything outside that class.
    """
    if _is_constant(node):
        return Number(0j)
    if isinstance(node, Name):
        return Number(1 + 0j)
    if isinstance(node, Unary):
        inner = _derivative(node.operand)
        return None if inner is None else Unary(inner)
    if isinstance(node, Binary):
        if node.op in "+-":
            left, right = _derivative(node.left), _derivative(node.right)
            if left is None or right is None:
                return None
            return Binary(node.op, left, right)
        if node.op == "*" and _is_constant(node.left):
            inner = _derivative(node.right)
            return None if inner is None else Binary("*", node.left, inner)
        if node.op in "*/" and _is_constant(node.right):
            inner = _derivative(node.left)
            if inner is None:
                return None
            return Binary(node.op, inner, node.right)
        if (
            node.op == "^"
            and isinstance(node.left, Name)
            and _is_constant(node.right)
        ):
            lowered = Binary("-", node.right, Number(1 + 0j))
            return Binary(
                "*", node.right, Binary("^", node.left, lowered)
            )
        return None
    if isinstance(node, Call) and node.func == "exp":
        inner = _derivative(node.arg)
        if inner is not None and _is_constant(inner):
            return Binary("*", inner, node)
    return None


@dataclass(frozen=True)
class HolomorphicFn:
    """A function psi of the complex variable r and its derivative.

    Parameters
    ----------
    psi : Expression
        Expression in ``r`` (other names must be bound in ``constants``).
    constants : dict
        Values of the remaining names.

    """

    psi: Expression
    constants: dict = field(default_factory=dict)
    dpsi: Optional[Expression] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        """Check bound names and derive psi' in closed form if possible."""
        unbound = self.psi.variables - {VARIABLE} - set(self.constants)
        if unbound:
            raise InputError(f"psi uses unbound names {sorted(unbound)}")
        root = _derivative(self.psi.root)
        dpsi = None
        if root is not None:
            dpsi = Expression(f"d({self.psi.text})", root)
        else:
            logging.debug(
                f"No closed-form derivative for '{self.psi.text}', "
                "using complex differences"
            )
        object.__setattr__(self, "dpsi", dpsi)

    @classmethod
    def parse(cls, text: str, **constants) -> "HolomorphicFn":
        """Parse the expression text of psi in r."""
        return cls(parse_expression(text), constants)

    @property
    def is_analytic(self) -> bool:
        """True if psi' is evaluated in closed form."""
        return self.dpsi is not None

    def __call__(self, r) -> np.ndarray:
        """Evaluate psi at complex r."""
        return np.asarray(
            self.psi.evaluate(self.constants, r=np.asarray(r, dtype=complex))
        )

    def derivative(self, r) -> np.ndarray:
        """psi'(r), closed form or Richardson-extrapolated differences."""
        r = np.asarray(r, dtype=complex)
        if self.dpsi is not None:
            return np.broadcast_to(
                self.dpsi.evaluate(self.constants, r=r), r.shape
            ).copy()

        h = RICHARDSON_STEP * np.maximum(1.0, np.abs(r))

        def central(step):
            return (self(r + step) - self(r - step)) / (2 * step)

        return (4 * central(h / 2) - central(h)) / 3


def _check_odd(n: int) -> None:
    if int(n) != n or int(n) % 2 == 0:
        raise InputError(f"n must be an odd integer, got {n}")


def wave_particle_fields(
    psi: HolomorphicFn, a: float, n: int, x, y
) -> tuple[np.ndarray, np.ndarray]:
    """Shock amplitude u and phase phi at points (x, y).

    Parameters
    ----------
    psi : HolomorphicFn
        Generating function.
    a : float
        Positive coupling constant.
    n : int
        Odd branch index of the phase.
    x, y : array_like
        Coordinates.

    Returns
    -------
    tuple[np.ndarray, np.ndarray]
        Arrays u and phi.

    Raises
    ------
    DomainError
        Where psi + conj(psi) <= 0 or psi' = 0.

    """
    if not a > 0:
        raise InputError(f"a must be positive, got {a}")
    _check_odd(n)
    x, y = np.broadcast_arrays(
        np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    )
    r = x + 1j * y
    try:
        value = psi(r)
        slope = psi.derivative(r)
    except EvaluationError as e:
        raise DomainError(f"psi cannot be evaluated: {e}") from e

    two_re = 2 * np.real(value)
    bad = two_re <= 0
    if np.any(bad):
        k = np.flatnonzero(bad.ravel())[0]
        raise DomainError(
            f"psi + conj(psi) <= 0 at (x, y) = "
            f"({x.ravel()[k]:.6g}, {y.ravel()[k]:.6g})"
        )
    modulus = np.abs(slope)
    if np.any(modulus == 0):
        k = np.flatnonzero(modulus.ravel() == 0)[0]
        raise DomainError(
            f"psi' vanishes at (x, y) = "
            f"({x.ravel()[k]:.6g}, {y.ravel()[k]:.6g})"
        )

    u = 2 * np.log(np.sqrt(8) * modulus / (a * two_re))
    phi = np.pi - 2 * np.angle(slope) + 2 * n * np.pi
    return u, phi


class WaveParticleSolution:
    """Evaluator of the wave-particle solution generated by psi.

    Parameters
    ----------
    psi : HolomorphicFn or str
        Generating function, or its expression text in ``r``.
    a : float
        Coupling constant.
    n : int
        Odd branch index.

    """

    def __init__(
        self, psi: Union[HolomorphicFn, str], a: float = 1.0, n: int = 1
    ) -> None:
        """Parse psi and validate the coupling constant and branch."""
        self.psi = HolomorphicFn.parse(psi) if isinstance(psi, str) else psi
        if not a > 0:
            raise InputError(f"a must be positive, got {a}")
        _check_odd(n)
        self.a = float(a)
        self.n = int(n)

    def system(self) -> SystemSpec:
        """The builtin wave-particle system with this coupling constant."""
        return builtin_system("wave-particle", constants={"a": self.a})

    def field(self, names=FIELD_NAMES) -> FieldEvaluator:
        """Evaluator of the named components among u and phi."""
        names = tuple(names)
        unknown = set(names) - set(FIELD_NAMES)
        if unknown:
            raise InputError(
                f"Wave-particle solutions provide {FIELD_NAMES}, "
                f"not {sorted(unknown)}"
            )

        def fn(points):
            points = as_points(points)
            u, phi = wave_particle_fields(
                self.psi, self.a, self.n, points[:, 1], points[:, 2]
            )
            values = {"u": u, "phi": phi}
            return np.column_stack([values[k] for k in names])

        periods = tuple(PHASE_PERIOD if k == "phi" else None for k in names)
        return FieldEvaluator(names, fn, periods)


def ray_amplitude(a: float, x) -> np.ndarray:
    """Closed-form u = 2 ln(sqrt(2) / (a x)) of psi = r on the real ray."""
    return 2 * np.log(np.sqrt(2) / (a * np.asarray(x, dtype=float)))


def wave_particle_ray_flow(
    a: float = 1.0, x0: float = 1.0, n: int = 1
) -> tuple[SystemSpec, WaveVector, InhomFactorization, np.ndarray]:
    """Reduced flow of the wave-particle system along the real axis.

    With lambda = (1, 0), Omega = 1 and L = I the profile equation is
    du/dx = b1 = sqrt(2) a e^(u/2) sin(phi/2), dphi/dx = b2 = 0 on the
    branch phi = (2n + 1) pi, whose solution is the psi = r family.

    Returns
    -------
    tuple
        The system, wave vector, factorization and initial state at x0.

    """
    _check_odd(n)
    sys = builtin_system("wave-particle", constants={"a": float(a)})
    fac = InhomFactorization(
        omega=lambda x, u: 1.0, L=lambda x, u: np.eye(2)
    )
    f0 = np.array([float(ray_amplitude(a, x0)), (2 * n + 1) * np.pi])
    return sys, WaveVector((1.0, 0.0)), fac, f0
