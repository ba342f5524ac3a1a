"""Wave relations and dispersion-relation roots."""

import itertools
import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from numpy.polynomial import chebyshev, polynomial

from riemann.algebra.linalg import kernel_basis, rank_with_tolerance
from riemann.errors import DegenerateSystemError, InputError
from riemann.systems.spec import SystemSpec, eval_system

ROOT_CLUSTER_RADIUS = 1e-8
ROOT_RANK_TOL = 1e-8
_TRIM_TOL = 1e-10


@dataclass(frozen=True)
class WaveVector:
    """Complex wave vector defining the Riemann invariant r = lambda_i x^i.

    Parameters
    ----------
    components : tuple[complex, ...]
        The p components of lambda.

    """

    components: tuple

    def __post_init__(self) -> None:
        """Require a nonzero one-dimensional vector."""
        lam = np.asarray(self.components, dtype=complex)
        if lam.ndim != 1 or not np.any(lam != 0):
            raise InputError("Wave vector must be a nonzero 1D vector")
        object.__setattr__(self, "components", tuple(complex(c) for c in lam))

    @property
    def array(self) -> np.ndarray:
        """Components as a complex array."""
        return np.array(self.components, dtype=complex)

    @property
    def conj(self) -> "WaveVector":
        """Complex conjugate wave vector."""
        return WaveVector(tuple(np.conj(self.array)))

    @property
    def is_real(self) -> bool:
        """True if every component is real."""
        return bool(np.all(self.array.imag == 0))

    def normalized(self) -> "WaveVector":
        """Rescale to lambda_1 = 1 when lambda_1 is nonzero."""
        lam = self.array
        return WaveVector(tuple(lam / lam[0])) if lam[0] != 0 else self

    def invariant(self, x: Sequence[float]) -> complex:
        """Riemann invariant lambda_i x^i at a point."""
        return complex(self.array @ np.asarray(x, dtype=float))


def wave_matrix(
    sys: SystemSpec,
    u,
    lam: WaveVector,
    x: Optional[Sequence[float]] = None,
) -> np.ndarray:
    """Contract the coefficient matrices with a wave vector."""
    if len(lam.components) != sys.p:
        raise InputError(f"Wave vector needs {sys.p} components")
    A, _ = eval_system(sys, u, x)
    return sum(li * Ai for li, Ai in zip(lam.array, A))


def wave_relation_residual(
    sys: SystemSpec,
    u,
    lam: WaveVector,
    gamma,
    x: Optional[Sequence[float]] = None,
) -> np.ndarray:
    """Residual (lambda_i A^i(u)) gamma of the wave relation.

    Parameters
    ----------
    sys : SystemSpec
        The system.
    u : array_like
        Values of the unknowns.
    lam : WaveVector
        Candidate wave vector.
    gamma : array_like
        Candidate polarization vector of length q.
    x : Sequence[float], optional
        Evaluation point, when entries depend on it.

    Returns
    -------
    np.ndarray
        Complex m-vector; zero iff (lambda, gamma) is a characteristic
        pair.

    """
    gamma = np.asarray(gamma, dtype=complex)
    if gamma.shape != (sys.q,):
        raise InputError(f"Polarization vector needs {sys.q} components")
    return wave_matrix(sys, u, lam, x) @ gamma


def _minor_polynomials(A1: np.ndarray, A2: np.ndarray) -> list[np.ndarray]:
    """Power-basis coefficients of every k-minor of A1 + zeta A2."""
    m, q = A1.shape
    k = min(m, q)
    nodes = chebyshev.chebpts1(k + 1)
    pencils = [A1 + z * A2 for z in nodes]

    polys = []
    for rows in itertools.combinations(range(m), k):
        for cols in itertools.combinations(range(q), k):
            idx = np.ix_(rows, cols)
            values = np.array([np.linalg.det(P[idx]) for P in pencils])
            coefs = chebyshev.cheb2poly(chebyshev.chebfit(nodes, values, k))
            scale = np.abs(coefs).max()
            if scale == 0:
                continue
            coefs = polynomial.polytrim(coefs, _TRIM_TOL * scale)
            if np.abs(coefs).max() > _TRIM_TOL * scale:
                polys.append(coefs)
    return polys


def _vanishes(coefs: np.ndarray, zeta: complex) -> bool:
    powers = np.abs(zeta) ** np.arange(len(coefs))
    scale = np.sum(np.abs(coefs) * powers)
    return abs(polynomial.polyval(zeta, coefs)) <= ROOT_CLUSTER_RADIUS * scale


def _pencil_scale(A1: np.ndarray, A2: np.ndarray, zeta: complex) -> float:
    # the pencil itself cancels at a root, so its entries give no scale
    return max(np.abs(A1).max(), abs(zeta) * np.abs(A2).max())


def _cluster(roots: list[complex]) -> list[complex]:
    merged: list[complex] = []
    for z in roots:
        if all(abs(z - w) > ROOT_CLUSTER_RADIUS for w in merged):
            merged.append(z)
        else:
            logging.debug(f"Merged dispersion root {z:.12g}")
    return merged


def _symmetrize(roots: list[complex]) -> list[complex]:
    """Enforce closure under conjugation for real coefficient matrices."""
    result: list[complex] = []
    for z in roots:
        if abs(z.imag) <= ROOT_CLUSTER_RADIUS:
            z = complex(z.real, 0.0)
        else:
            partners = [w for w in roots if abs(w - np.conj(z)) < 1e-6]
            if partners:
                z = 0.5 * (z + np.conj(partners[0]))
        for w in (z, np.conj(z)):
            if all(abs(w - v) > ROOT_CLUSTER_RADIUS for v in result):
                result.append(complex(w))
    return result


def dispersion_roots_2d(
    sys: SystemSpec, u, x: Optional[Sequence[float]] = None
) -> list[complex]:
    """Roots zeta of the dispersion relation in the gauge lambda = (1, zeta).

    Every min(m, q)-minor of A^1 + zeta A^2 is recovered as a polynomial
    in zeta by interpolation at Chebyshev nodes; the common roots of all
    minors that do not vanish identically are kept if the pencil loses
    rank there.

    Parameters
    ----------
    sys : SystemSpec
        A system with p = 2.
    u : array_like
        Values of the unknowns.
    x : Sequence[float], optional
        Evaluation point, when entries depend on it.

    Returns
    -------
    list[complex]
        Sorted roots zeta.

    Raises
    ------
    InputError
        If p is not 2.
    DegenerateSystemError
        If every minor vanishes identically.

    """
    if sys.p != 2:
        raise InputError(f"Dispersion roots need p = 2, got p = {sys.p}")
    A, _ = eval_system(sys, u, x)
    A1, A2 = A
    k = min(sys.m, sys.q)

    polys = _minor_polynomials(A1, A2)
    if not polys:
        raise DegenerateSystemError(
            f"All {k}-minors of {sys.name} vanish identically"
        )

    # roots of the lowest-degree minor, kept if every other minor vanishes
    polys.sort(key=len)
    candidates = []
    if len(polys[0]) > 1:
        candidates = list(polynomial.polyroots(polys[0]))
    common = [
        complex(z)
        for z in candidates
        if all(_vanishes(c, z) for c in polys[1:])
        and rank_with_tolerance(
            A1 + z * A2, ROOT_RANK_TOL, _pencil_scale(A1, A2, z)
        )
        < k
    ]
    roots = _cluster(common)
    if np.all(A1.imag == 0) and np.all(A2.imag == 0):
        roots = _symmetrize(roots)
    logging.info(f"{sys.name}: {len(roots)} dispersion root(s)")
    return sorted(roots, key=lambda z: (round(z.real, 9), round(z.imag, 9)))


def characteristic_pairs(
    sys: SystemSpec, u, x: Optional[Sequence[float]] = None
) -> list[tuple[WaveVector, list[np.ndarray]]]:
    """Wave vectors (1, zeta) with their polarization vectors."""
    A, _ = eval_system(sys, u, x)
    return [
        (
            WaveVector((1.0, zeta)),
            kernel_basis(
                A[0] + zeta * A[1],
                ROOT_RANK_TOL,
                _pencil_scale(A[0], A[1], zeta),
            ),
        )
        for zeta in dispersion_roots_2d(sys, u, x)
    ]


def orthogonal_complement(Lambda) -> list[np.ndarray]:
    """Vectors xi with Lambda xi = 0 for a set of wave vectors.

    Parameters
    ----------
    Lambda : array_like
        k' x p complex matrix whose rows are wave vectors.

    Returns
    -------
    list[np.ndarray]
        p - k' vectors spanning the right nullspace.

    Raises
    ------
    InputError
        If Lambda is not of full row rank.

    """
    Lambda = np.atleast_2d(np.asarray(Lambda, dtype=complex))
    rows, p = Lambda.shape
    if rows > p or rank_with_tolerance(Lambda) < rows:
        raise InputError("Wave vectors must be linearly independent")
    return kernel_basis(Lambda)
