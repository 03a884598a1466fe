"""Linear algebra over GF(2) on dense numpy bit matrices."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from utils import require


def to_gf2(values) -> np.ndarray:
    return np.array(values, dtype=np.int64) % 2


class BitMatrix:
    """Dense matrix over GF(2); entries live in a uint8 array."""

    def __init__(self, data, rows: Optional[int] = None, cols: Optional[int] = None):
        arr = to_gf2(data).astype(np.uint8)
        if arr.size == 0:
            known = arr.shape if arr.ndim == 2 else (0, 0)
            shape = (known[0] if rows is None else rows, known[1] if cols is None else cols)
            arr = np.zeros(shape, dtype=np.uint8)
        require(arr.ndim == 2, "a BitMatrix needs two dimensions")
        self.data = arr

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(np.zeros((rows, cols), dtype=np.uint8), rows, cols)

    @classmethod
    def identity(cls, size: int) -> "BitMatrix":
        return cls(np.eye(size, dtype=np.uint8), size, size)

    @classmethod
    def diagonal(cls, bits: Sequence[int]) -> "BitMatrix":
        size = len(bits)
        return cls(np.diag(to_gf2(list(bits))), size, size)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "BitMatrix":
        rows = [list(r) for r in rows]
        if not rows:
            return cls.zeros(0, cols or 0)
        require(len({len(r) for r in rows}) == 1, "rows of unequal length")
        return cls(rows, len(rows), len(rows[0]))

    @classmethod
    def block(cls, blocks: Sequence[Sequence["BitMatrix"]]) -> "BitMatrix":
        """Assemble from a grid of blocks; each block row shares a height, each block column a width"""
        heights = [row[0].rows for row in blocks]
        widths = [b.cols for b in blocks[0]] if blocks else []
        for i, row in enumerate(blocks):
            require(len(row) == len(widths), "ragged block grid")
            for j, b in enumerate(row):
                require(b.rows == heights[i] and b.cols == widths[j],
                        f"block ({i},{j}) is {b.shape}, expected {(heights[i], widths[j])}")
        out = np.zeros((sum(heights), sum(widths)), dtype=np.uint8)
        r0 = 0
        for i, row in enumerate(blocks):
            c0 = 0
            for j, b in enumerate(row):
                out[r0:r0 + heights[i], c0:c0 + widths[j]] = b.data
                c0 += widths[j]
            r0 += heights[i]
        return cls(out, sum(heights), sum(widths))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.data.shape

    def __getitem__(self, index):
        return int(self.data[index])

    def transpose(self) -> "BitMatrix":
        return BitMatrix(self.data.T.copy(), self.cols, self.rows)

    T = property(transpose)

    def hstack(self, other: "BitMatrix") -> "BitMatrix":
        require(self.rows == other.rows, "hstack needs equal row counts")
        return BitMatrix(np.hstack([self.data, other.data]), self.rows, self.cols + other.cols)

    def vstack(self, other: "BitMatrix") -> "BitMatrix":
        require(self.cols == other.cols, "vstack needs equal column counts")
        return BitMatrix(np.vstack([self.data, other.data]), self.rows + other.rows, self.cols)

    def __add__(self, other: "BitMatrix") -> "BitMatrix":
        require(self.shape == other.shape, f"shape mismatch {self.shape} + {other.shape}")
        return BitMatrix(self.data ^ other.data, *self.shape)

    def __matmul__(self, other):
        if isinstance(other, BitMatrix):
            require(self.cols == other.rows, f"shape mismatch {self.shape} @ {other.shape}")
            prod = self.data.astype(np.int64) @ other.data.astype(np.int64)
            return BitMatrix(prod % 2, self.rows, other.cols)
        vec = to_gf2(list(other))
        require(vec.shape == (self.cols,), f"vector of length {vec.shape[0]} against {self.cols} columns")
        return (self.data.astype(np.int64) @ vec) % 2

    def __eq__(self, other) -> bool:
        return isinstance(other, BitMatrix) and np.array_equal(self.data, other.data)

    def __hash__(self):
        return hash((self.shape, self.data.tobytes()))

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and np.array_equal(self.data, self.data.T)

    def to_rows(self) -> List[List[int]]:
        return self.data.astype(int).tolist()

    def __repr__(self) -> str:
        return f"BitMatrix({self.to_rows()})"


@dataclass(frozen=True)
class RowReduceResult:
    matrix: np.ndarray
    rank: int
    pivots: Tuple[int, ...]


def row_reduce(m: BitMatrix, limit_cols: Optional[int] = None) -> RowReduceResult:
    """Reduced row echelon form; pivots are taken only among the first limit_cols columns."""
    mat = m.data.copy()
    rows, cols = mat.shape
    pivot_cols = cols if limit_cols is None else limit_cols
    pivots = []
    row = 0
    for col in range(pivot_cols):
        if row == rows:
            break
        candidates = np.nonzero(mat[row:, col])[0]
        if candidates.size == 0:
            continue
        pivot = row + int(candidates[0])
        if pivot != row:
            mat[[row, pivot]] = mat[[pivot, row]]
        hits = np.nonzero(mat[:, col])[0]
        for r in hits:
            if r != row:
                mat[r, :] ^= mat[row, :]
        pivots.append(col)
        row += 1
    return RowReduceResult(matrix=mat, rank=len(pivots), pivots=tuple(pivots))


def rank(m: BitMatrix) -> int:
    return row_reduce(m).rank


def kernel_basis(m: BitMatrix) -> List[np.ndarray]:
    """Basis of {v : m v = 0}, one vector per free column in ascending order."""
    reduced = row_reduce(m)
    mat = reduced.matrix
    pivots = set(reduced.pivots)
    basis = []
    for free in range(m.cols):
        if free in pivots:
            continue
        vec = np.zeros(m.cols, dtype=np.uint8)
        vec[free] = 1
        for row, col in enumerate(reduced.pivots):
            if mat[row, free] == 1:
                vec[col] = 1
        basis.append(vec)
    return basis


def solve(m: BitMatrix, w: Iterable[int]) -> Optional[np.ndarray]:
    """Some v with m v = w, or None when w is not in the image.

    Free variables are set to zero, which gives the first solution under the
    elimination pivot order.
    """
    vec = to_gf2(list(w)).astype(np.uint8)
    require(vec.shape == (m.rows,), f"right-hand side has length {vec.shape[0]}, matrix has {m.rows} rows")
    augmented = BitMatrix(np.hstack([m.data, vec.reshape(-1, 1)]), m.rows, m.cols + 1)
    reduced = row_reduce(augmented, limit_cols=m.cols)
    mat = reduced.matrix
    if np.any(mat[reduced.rank:, m.cols]):
        return None
    solution = np.zeros(m.cols, dtype=np.uint8)
    for row, col in enumerate(reduced.pivots):
        solution[col] = mat[row, m.cols]
    return solution


def span(vectors: Sequence[Sequence[int]], length: int) -> List[Tuple[int, ...]]:
    """All GF(2) combinations of the given vectors, zero vector first."""
    elements = {tuple([0] * length)}
    for v in vectors:
        v = tuple(int(x) % 2 for x in v)
        elements |= {tuple(a ^ b for a, b in zip(e, v)) for e in elements}
    return sorted(elements)
