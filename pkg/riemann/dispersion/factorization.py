"""Rotation-matrix factorization conditions for inhomogeneous systems.

A simple wave (real wave vector) or simple mode (complex wave vector
and its conjugate) of A^i(u) u_i = b(u) needs a scalar Omega, a
rotation L in SO(q, C) and a characteristic vector tau such that the
profile derivative reads Omega L b + tau.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from riemann.algebra.linalg import is_special_orthogonal
from riemann.dispersion.roots import WaveVector, wave_matrix
from riemann.errors import InputError
from riemann.systems.spec import SystemSpec, eval_system

SIMPLE_WAVE = "simple-wave"
SIMPLE_MODE = "simple-mode"
MODES = (SIMPLE_WAVE, SIMPLE_MODE)
ROTATION_TOL = 1e-8


@dataclass(frozen=True)
class InhomFactorization:
    """The (Omega, L, tau) triple as functions of (x, u).

    Conjugates are taken entrywise, which is what the conjugate handles
    reduce to for real x and u.

    Parameters
    ----------
    omega : Callable
        (x, u) -> complex scalar.
    L : Callable
        (x, u) -> complex q x q matrix.
    tau : Callable, optional
        (x, u) -> complex q-vector; zero if omitted.

    """

    omega: Callable
    L: Callable
    tau: Optional[Callable] = None

    def evaluate(self, x, u) -> tuple[complex, np.ndarray, np.ndarray]:
        """Evaluate Omega, L and tau, checking that L is a rotation."""
        u = np.asarray(u)
        omega = complex(self.omega(x, u))
        L = np.atleast_2d(np.asarray(self.L(x, u), dtype=complex))
        if not is_special_orthogonal(L, ROTATION_TOL):
            raise InputError("L is not in SO(q) at the evaluation point")
        tau = (
            np.zeros(L.shape[0], dtype=complex)
            if self.tau is None
            else np.asarray(self.tau(x, u), dtype=complex)
        )
        return omega, L, tau


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise InputError(f"Mode must be one of {MODES}, got '{mode}'")


def factorized_operator(
    sys: SystemSpec,
    u,
    lam: WaveVector,
    omega: complex,
    L: np.ndarray,
    mode: str,
    x: Optional[Sequence[float]] = None,
) -> np.ndarray:
    """Matrix multiplying b in the factorization condition (before -I)."""
    _check_mode(mode)
    W = wave_matrix(sys, u, lam, x)
    if mode == SIMPLE_WAVE:
        return omega * W @ L
    W_bar = wave_matrix(sys, u, lam.conj, x)
    return omega * W @ L + np.conj(omega) * W_bar @ np.conj(L)


def inhom_condition_residual(
    sys: SystemSpec,
    x: Sequence[float],
    u,
    fac: InhomFactorization,
    lam: WaveVector,
    mode: str,
) -> np.ndarray:
    """Residual of the factorization condition at one point.

    Parameters
    ----------
    sys : SystemSpec
        Inhomogeneous system.
    x : Sequence[float]
        Evaluation point.
    u : array_like
        Values of the unknowns.
    fac : InhomFactorization
        Candidate factorization.
    lam : WaveVector
        Wave vector (real for a simple wave).
    mode : str
        ``"simple-wave"``: (Omega A^i lambda_i L - I) b;
        ``"simple-mode"``: (A^i(lambda_i Omega L + conj) - I) b.

    Returns
    -------
    np.ndarray
        Complex q-vector; zero certifies the factorization.

    """
    _check_mode(mode)
    _, b = eval_system(sys, u, x)
    if not np.any(b != 0):
        logging.warning(
            f"{sys.name}: b vanishes at u={u}, the condition is vacuous"
        )
        return np.zeros(sys.q, dtype=complex)
    if sys.m != sys.q:
        raise InputError("Factorization conditions need a square system")
    omega, L, _ = fac.evaluate(x, u)
    M = factorized_operator(sys, u, lam, omega, L, mode, x)
    return M @ b - b


def inhom_dispersion_det(
    sys: SystemSpec,
    u,
    lam: WaveVector,
    L,
    Lbar,
    mode: str,
    *,
    omega: complex = 1.0,
    x: Optional[Sequence[float]] = None,
) -> complex:
    """Determinant form of the factorization condition.

    Simple wave: det(Omega A^i lambda_i L - I), with Lbar unused;
    simple mode: det(A^i(lambda_i L + conj(lambda_i) Lbar) - I), where
    ``Lbar=None`` takes the entrywise conjugate of L.
    """
    _check_mode(mode)
    L = np.atleast_2d(np.asarray(L, dtype=complex))
    W = wave_matrix(sys, u, lam, x)
    if mode == SIMPLE_WAVE:
        M = omega * W @ L
    else:
        Lbar = np.conj(L) if Lbar is None else np.asarray(Lbar, dtype=complex)
        M = W @ L + wave_matrix(sys, u, lam.conj, x) @ Lbar
    return complex(np.linalg.det(M - np.eye(sys.q)))


def annihilating_scale(
    sys: SystemSpec,
    x: Sequence[float],
    u,
    fac: InhomFactorization,
    lam: WaveVector,
    mode: str,
) -> Optional[complex]:
    """Least-squares factor c with (c M - I) b closest to zero.

    M is the factorized operator; c = 1 means the factorization holds
    as given, c = 1/4 means Omega should be four times smaller. None
    when M b vanishes, since no rescaling of Omega can reach b.
    """
    _, b = eval_system(sys, u, x)
    omega, L, _ = fac.evaluate(x, u)
    Mb = factorized_operator(sys, u, lam, omega, L, mode, x) @ b
    if np.linalg.norm(Mb) <= np.finfo(float).eps * np.linalg.norm(b):
        logging.debug(f"{sys.name}: factorized operator annihilates b")
        return None
    return complex(np.vdot(Mb, b) / np.vdot(Mb, Mb))


def wave_particle_omega(epsilon: int, reading: str) -> complex:
    """Omega of the wave-particle simple mode.

    ``reading="linear"`` uses 12^(1/4) (1 - epsilon i); ``"power"``
    uses 12^(1/4) (1 - epsilon^i) with the principal power.
    """
    if epsilon not in (1, -1):
        raise InputError("epsilon must be 1 or -1")
    if reading == "linear":
        return 12**0.25 * (1 - epsilon * 1j)
    if reading == "power":
        return complex(12**0.25 * (1 - complex(epsilon) ** 1j))
    raise InputError(f"Unknown reading '{reading}'")


def wave_particle_rotation(b, epsilon: int) -> np.ndarray:
    """Rotation matrix of the wave-particle simple mode at source b."""
    b1, b2 = np.asarray(b, dtype=complex)
    s = (b1 + 1j * b2) ** 2
    d = (b1 - 1j * b2) ** 2
    norm = 6 * (1 - epsilon * 1j) * (b1**2 + b2**2)
    scale = 108**0.25 * 1j / norm
    l11 = -scale * (np.sqrt(3) * epsilon * s + 1j * d)
    l12 = scale * (np.sqrt(3) * epsilon * 1j * s + d)
    return np.array([[l11, l12], [-l12, l11]])


def wave_particle_factorization(
    sys: SystemSpec, epsilon: int = 1, reading: str = "linear"
) -> InhomFactorization:
    """Candidate factorization for the wave-particle system."""
    omega = wave_particle_omega(epsilon, reading)

    def L(x, u):
        _, b = eval_system(sys, u, x)
        return wave_particle_rotation(b, epsilon)

    return InhomFactorization(omega=lambda x, u: omega, L=L)
