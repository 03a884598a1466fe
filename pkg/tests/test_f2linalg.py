import numpy as np
import pytest

from f2linalg import BitMatrix, kernel_basis, rank, solve, span
from utils import ContractViolation

ONES = BitMatrix.from_rows([[1, 1], [1, 1]])


def test_rank():
    assert rank(BitMatrix.identity(2)) == 2
    assert rank(BitMatrix.zeros(3, 3)) == 0
    assert rank(ONES) == 1


def test_kernel_basis():
    assert kernel_basis(BitMatrix.identity(2)) == []
    assert [v.tolist() for v in kernel_basis(BitMatrix.from_rows([[1, 1]]))] == [[1, 1]]
    assert [v.tolist() for v in kernel_basis(ONES)] == [[1, 1]]


def test_kernel_vectors_are_annihilated():
    m = BitMatrix.from_rows([[1, 0, 1, 1], [0, 1, 1, 0], [1, 1, 0, 1]])
    basis = kernel_basis(m)
    assert len(basis) == m.cols - rank(m)
    for v in basis:
        assert not (m @ v).any()


def test_solve():
    assert solve(BitMatrix.identity(2), [1, 0]).tolist() == [1, 0]
    assert solve(BitMatrix.zeros(2, 2), [1, 0]) is None
    x = solve(ONES, [1, 1])
    assert (ONES @ x).tolist() == [1, 1]


def test_solve_rejects_wrong_length():
    with pytest.raises(ContractViolation):
        solve(ONES, [1, 0, 1])


def test_span_lists_every_combination():
    assert span([(1, 0), (0, 1)], 2) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert span([(1, 1), (1, 1)], 2) == [(0, 0), (1, 1)]


def test_block_and_empty_shapes():
    m = BitMatrix.block([[BitMatrix.identity(2), BitMatrix.zeros(2, 1)]])
    assert m.shape == (2, 3)
    assert BitMatrix.from_rows([[], []]).shape == (2, 0)
    assert rank(BitMatrix.zeros(0, 0)) == 0
    assert kernel_basis(BitMatrix.zeros(0, 0)) == []


def test_matmul_and_symmetry():
    a = BitMatrix.from_rows([[0, 1], [1, 1]])
    assert (a @ a) == BitMatrix.from_rows([[1, 1], [1, 0]])
    assert a.is_symmetric()
    assert not BitMatrix.from_rows([[0, 1], [0, 0]]).is_symmetric()
    assert (a @ np.array([1, 1])).tolist() == [1, 0]


def _random_matrices(count, seed=0):
    gen = np.random.default_rng(seed)
    for _ in range(count):
        rows, cols = gen.integers(1, 8, size=2)
        yield BitMatrix(gen.integers(0, 2, size=(rows, cols)), int(rows), int(cols)), gen


def test_rank_invariants_on_random_matrices():
    for m, _ in _random_matrices(300):
        assert rank(m) == rank(m.transpose())
        assert rank(m) + len(kernel_basis(m)) == m.cols


def test_solve_on_random_matrices():
    for m, gen in _random_matrices(300, seed=1):
        domain = span(np.eye(m.cols, dtype=np.uint8), m.cols)
        image = {tuple(int(b) for b in m @ np.array(v)) for v in domain}
        target = gen.integers(0, 2, size=m.rows)
        x = solve(m, target)
        if tuple(int(b) for b in target) in image:
            assert x is not None
            assert (m @ x).tolist() == target.tolist()
        else:
            assert x is None
