"""Dense complex linear algebra with tolerance-based rank decisions."""

from typing import Optional

import numpy as np

from riemann.errors import InputError
from riemann.settings import setting


def as_complex_matrix(M) -> np.ndarray:
    """Validate and convert input to a 2D complex array.

    Parameters
    ----------
    M : array_like
        Matrix entries, row-major.

    Returns
    -------
    np.ndarray
        Complex array of shape (rows, cols).

    """
    M = np.atleast_2d(np.asarray(M, dtype=complex))
    if M.ndim != 2 or M.size == 0:
        raise InputError(f"Expected a non-empty matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise InputError("Matrix has non-finite entries")
    return M


def _resolve_tol(tol: Optional[float]) -> float:
    if tol is None:
        tol = setting("algebra", "tol")
    if not tol > 0:
        raise InputError(f"Tolerance must be positive, got {tol}")
    return float(tol)


def _svd_rank(
    M: np.ndarray, tol: float, scale: Optional[float] = None
) -> tuple[int, np.ndarray]:
    # singular values are compared against tol x largest entry magnitude
    if scale is None:
        scale = np.abs(M).max()
    _, s, vh = np.linalg.svd(M, full_matrices=True)
    if scale == 0:
        return 0, vh
    return int(np.sum(s > tol * scale)), vh


def rank_with_tolerance(
    M, tol: Optional[float] = None, scale: Optional[float] = None
) -> int:
    """Numerical rank of a complex matrix.

    Parameters
    ----------
    M : array_like
        Complex matrix.
    tol : float, optional
        Relative threshold on singular values, scaled by the largest
        entry magnitude. Defaults to the package tolerance (1e-10).
    scale : float, optional
        Magnitude the threshold is relative to. Defaults to ``max|M|``;
        pass the size of the operands when M is a sum that may cancel.

    Returns
    -------
    int
        Number of singular values above ``tol * max|M|``.

    """
    M = as_complex_matrix(M)
    rank, _ = _svd_rank(M, _resolve_tol(tol), scale)
    return rank


def kernel_basis(
    M, tol: Optional[float] = None, scale: Optional[float] = None
) -> list[np.ndarray]:
    """Orthonormal basis of the right nullspace of M.

    Parameters
    ----------
    M : array_like
        Complex matrix of shape (rows, cols).
    tol : float, optional
        Rank threshold, as in :func:`rank_with_tolerance`.
    scale : float, optional
        Threshold scale, as in :func:`rank_with_tolerance`.

    Returns
    -------
    list[np.ndarray]
        ``cols - rank`` unit vectors v with ``M @ v`` close to zero.

    """
    M = as_complex_matrix(M)
    rank, vh = _svd_rank(M, _resolve_tol(tol), scale)
    return [vh[k].conj() for k in range(rank, M.shape[1])]


def is_special_orthogonal(L, tol: Optional[float] = None) -> bool:
    """Check whether L belongs to SO(q, C).

    The plain transpose is used, so complex rotations qualify.

    Parameters
    ----------
    L : array_like
        Square complex matrix.
    tol : float, optional
        Absolute tolerance on ``L^T L - I`` and ``det L - 1``.

    Returns
    -------
    bool
        True if L is orthogonal with unit determinant within tolerance.

    """
    L = as_complex_matrix(L)
    if L.shape[0] != L.shape[1]:
        raise InputError(f"Expected a square matrix, got shape {L.shape}")
    tol = _resolve_tol(tol)
    gram_error = np.abs(L.T @ L - np.eye(L.shape[0])).max()
    det_error = abs(np.linalg.det(L) - 1)
    return bool(gram_error <= tol and det_error <= tol)


def solve_square(M, rhs) -> np.ndarray:
    """Solve ``M @ X = rhs`` for a nonsingular square M."""
    M = as_complex_matrix(M)
    if M.shape[0] != M.shape[1]:
        raise InputError(f"Expected a square matrix, got shape {M.shape}")
    if rank_with_tolerance(M) < M.shape[0]:
        raise InputError("Matrix is singular")
    return np.linalg.solve(M, np.asarray(rhs, dtype=complex))
