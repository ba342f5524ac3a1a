import numpy as np
import pytest

from riemann.algebra.linalg import (
    is_special_orthogonal,
    kernel_basis,
    rank_with_tolerance,
    solve_square,
)
from riemann.errors import InputError


@pytest.mark.parametrize(
    "matrix, expected_rank",
    [
        (np.eye(3), 3),
        ([[1, 2], [2, 4]], 1),
        ([[1, 1j], [1j, -1]], 1),
        (np.zeros((2, 3)), 0),
        ([[1, 0, 0], [0, 1e-14, 0]], 1),
    ],
)
def test_rank_with_tolerance(matrix, expected_rank):
    assert rank_with_tolerance(matrix) == expected_rank


def test_kernel_basis_is_orthonormal_nullspace():
    M = np.array([[1, 1j, 0], [0, 0, 1]])

    kernel = kernel_basis(M)

    assert len(kernel) == 1
    assert np.linalg.norm(M @ kernel[0]) < 1e-12
    assert np.linalg.norm(kernel[0]) == pytest.approx(1.0)


def test_kernel_basis_of_full_rank_matrix_is_empty():
    assert kernel_basis(np.eye(2)) == []


@pytest.mark.parametrize(
    "L, expected",
    [
        (
            [[np.cos(0.3), -np.sin(0.3)], [np.sin(0.3), np.cos(0.3)]],
            True,
        ),
        (
            [
                [np.cosh(0.7), 1j * np.sinh(0.7)],
                [-1j * np.sinh(0.7), np.cosh(0.7)],
            ],
            True,
        ),
        ([[1, 0], [0, -1]], False),
        ([[2, 0], [0, 0.5]], False),
    ],
)
def test_is_special_orthogonal(L, expected):
    assert is_special_orthogonal(L) is expected


def test_is_special_orthogonal_needs_square_matrix():
    with pytest.raises(InputError):
        is_special_orthogonal(np.ones((2, 3)))


def test_non_finite_matrix_is_rejected():
    with pytest.raises(InputError, match="non-finite"):
        rank_with_tolerance([[1, np.nan]])


def test_solve_square():
    M = np.array([[2, 1j], [0, 1]])
    rhs = np.array([1, 2])

    assert np.allclose(M @ solve_square(M, rhs), rhs)


def test_solve_square_rejects_singular_matrix():
    with pytest.raises(InputError, match="singular"):
        solve_square([[1, 2], [2, 4]], [1, 1])


def test_rank_scale_for_cancelled_sums():
    A1 = np.array([[0.1]])
    A2 = np.array([[0.3]])
    pencil = A1 + (-1 / 3) * A2

    assert rank_with_tolerance(pencil, 1e-8, scale=0.1) == 0
    assert len(kernel_basis(pencil, 1e-8, scale=0.1)) == 1


@pytest.mark.parametrize("seed", range(5))
def test_rank_invariant_under_permutation_and_scaling(seed):
    rng = np.random.default_rng(seed)
    rank = int(rng.integers(1, 4))
    M = (
        rng.normal(size=(4, rank)) + 1j * rng.normal(size=(4, rank))
    ) @ (rng.normal(size=(rank, 5)) + 1j * rng.normal(size=(rank, 5)))

    rows = rng.permutation(4)
    cols = rng.permutation(5)
    scales = rng.uniform(0.5, 2.0, size=4) * np.exp(
        1j * rng.uniform(0, 2 * np.pi, size=4)
    )
    N = (scales[:, None] * M)[rows][:, cols]

    assert rank_with_tolerance(M) == rank
    assert rank_with_tolerance(N) == rank


def rotation(angle: complex) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s], [s, c]], dtype=complex)


@pytest.mark.parametrize("seed", range(5))
def test_special_orthogonal_closed_under_products(seed):
    rng = np.random.default_rng(seed)
    a, b = rng.normal(size=2) + 1j * rng.normal(size=2)

    L, M = rotation(a), rotation(b)

    assert is_special_orthogonal(L, 1e-9)
    assert is_special_orthogonal(M, 1e-9)
    assert is_special_orthogonal(L @ M, 1e-9)
