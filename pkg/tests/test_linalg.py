import numpy as np
import pytest

from permpoly import linalg
from permpoly.exceptions import DivisionByZero


def test_row_reduce():
    result = linalg.row_reduce([[1, 1, 0], [1, 1, 1], [0, 0, 1]], 2)
    assert result.rank == 2
    assert result.pivots == (0, 2)
    assert result.matrix.tolist() == [[1, 1, 0], [0, 0, 1], [0, 0, 0]]


def test_nullspace():
    basis = linalg.nullspace([[1, 1, 0], [0, 0, 1]], 2)
    assert basis.tolist() == [[1, 1, 0]]
    assert linalg.nullspace(np.eye(3, dtype=np.int64), 5).shape == (0, 3)


def test_nullspace_mod_3():
    matrix = np.array([[1, 2, 0], [0, 0, 1]])
    for vector in linalg.nullspace(matrix, 3):
        assert not ((matrix @ vector) % 3).any()


def test_inverse():
    matrix = np.array([[2, 1], [1, 1]])
    inverse = linalg.inverse(matrix, 5)
    assert ((matrix @ inverse) % 5).tolist() == [[1, 0], [0, 1]]
    assert linalg.inverse([[1, 1], [1, 1]], 2) is None


def test_span():
    assert linalg.span(np.array([[1, 0], [0, 1]]), 2).tolist() == [[0, 0], [0, 1], [1, 0], [1, 1]]
    assert linalg.span(np.zeros((0, 2), dtype=np.int64), 2).tolist() == [[0, 0]]


def test_column_basis():
    basis = linalg.column_basis([[1, 1], [0, 0]], 2)
    assert basis.tolist() == [[1, 0]]


def test_inv_mod():
    assert [linalg.inv_mod(a, 7) for a in range(1, 7)] == [1, 4, 5, 2, 3, 6]
    with pytest.raises(DivisionByZero, match=r"\(a: 0\)"):
        linalg.inv_mod(10, 5)
