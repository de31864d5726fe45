"""Gaussian elimination over the prime field F_p."""

import itertools

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from permpoly.exceptions import DivisionByZero


def to_fp(matrix, p: int) -> np.ndarray:
    return np.array(matrix, dtype=np.int64) % p


def inv_mod(a: int, p: int) -> int:
    a = int(a) % p
    if a == 0:
        raise DivisionByZero(f"No inverse modulo {p}. (a: {a})")
    return pow(a, p - 2, p)


@dataclass(frozen=True)
class RowReduceResult:
    matrix: np.ndarray
    rank: int
    pivots: Tuple[int, ...]


def row_reduce(matrix, p: int) -> RowReduceResult:
    """Reduced row echelon form over F_p."""
    mat = to_fp(matrix, p).copy()
    rows, cols = mat.shape
    pivots = []
    row = 0
    for col in range(cols):
        if row == rows:
            break

        pivot = None
        for r in range(row, rows):
            if mat[r, col] != 0:
                pivot = r
                break
        if pivot is None:
            continue

        if pivot != row:
            mat[[row, pivot]] = mat[[pivot, row]]

        mat[row] = (mat[row] * inv_mod(mat[row, col], p)) % p
        for r in range(rows):
            if r != row and mat[r, col] != 0:
                mat[r] = (mat[r] - mat[r, col] * mat[row]) % p

        pivots.append(col)
        row += 1

    return RowReduceResult(matrix=mat, rank=len(pivots), pivots=tuple(pivots))


def rank(matrix, p: int) -> int:
    return row_reduce(matrix, p).rank


def nullspace(matrix, p: int) -> np.ndarray:
    """
    A basis of {v : matrix @ v = 0 mod p}, one vector per row.

    Returns an array of shape (k, cols), k = cols - rank.
    """
    reduced = row_reduce(matrix, p)
    mat = reduced.matrix
    cols = mat.shape[1]
    pivots = set(reduced.pivots)

    basis = []
    for free in range(cols):
        if free in pivots:
            continue
        vec = np.zeros(cols, dtype=np.int64)
        vec[free] = 1
        for row, col in enumerate(reduced.pivots):
            vec[col] = (-mat[row, free]) % p
        basis.append(vec)

    if not basis:
        return np.zeros((0, cols), dtype=np.int64)

    return np.vstack(basis)


def inverse(matrix, p: int) -> Optional[np.ndarray]:
    """The inverse over F_p, or None when the matrix is singular."""
    mat = to_fp(matrix, p)
    size = mat.shape[0]
    if mat.shape != (size, size):
        raise ValueError(f"Matrix is not square. (shape: {mat.shape})")

    augmented = np.concatenate([mat, np.eye(size, dtype=np.int64)], axis=1)
    reduced = row_reduce(augmented, p)
    if reduced.pivots[:size] != tuple(range(size)):
        return None

    return reduced.matrix[:, size:] % p


def span(basis: np.ndarray, p: int) -> np.ndarray:
    """
    Every F_p combination of the rows of basis, one vector per row.

    Row order follows the coefficient tuples in lexicographic order.
    """
    k, cols = basis.shape
    if k == 0:
        return np.zeros((1, cols), dtype=np.int64)

    coeffs = np.array(list(itertools.product(range(p), repeat=k)), dtype=np.int64)
    return (coeffs @ basis) % p


def column_basis(matrix, p: int) -> np.ndarray:
    """Rows spanning the column space of matrix."""
    mat = to_fp(matrix, p)
    reduced = row_reduce(mat.T, p)
    return reduced.matrix[: reduced.rank]
