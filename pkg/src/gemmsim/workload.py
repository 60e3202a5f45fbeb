"""GEMM problem instances, exact integer matrices, and the reference oracle.

Every simulator in this package consumes the same operand containers and is
checked bit-exactly against :func:`reference_matmul`, which is deliberately
implemented with plain Python integers (no numpy) so it stays an independent
route from the numpy-backed simulator internals.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

import numpy as np

# Operands are signed 8-bit-equivalent integers; accumulators are 64-bit
# equivalent.  With |a*b| <= 128*128, an int64 accumulator cannot overflow
# for any problem size this workbench can hold in memory.
OPERAND_MIN = -128
OPERAND_MAX = 127


@dataclass(frozen=True)
class GemmShape:
    """Dimensions of C (m x n) = A (m x k) . B (k x n)."""

    m: int
    n: int
    k: int

    def __post_init__(self) -> None:
        for name in ("m", "n", "k"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise ValueError(f"shape field {name} must be a positive integer, got {value!r}")

    @property
    def macs(self) -> int:
        """Total multiply-accumulates a full GEMM of this shape performs."""
        return self.m * self.n * self.k


@dataclass(frozen=True)
class Matrix:
    """Immutable row-major matrix of exact Python integers."""

    rows: int
    cols: int
    data: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise ValueError(f"matrix must be at least 1x1, got {self.rows}x{self.cols}")
        if not isinstance(self.data, tuple):
            object.__setattr__(self, "data", tuple(self.data))
        if len(self.data) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} elements for a "
                f"{self.rows}x{self.cols} matrix, got {len(self.data)}"
            )
        if any(not isinstance(e, int) for e in self.data):
            raise ValueError("matrix elements must be Python integers")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "Matrix":
        r = len(rows)
        c = len(rows[0])
        if any(len(row) != c for row in rows):
            raise ValueError("ragged row lengths")
        return cls(r, c, tuple(int(e) for row in rows for e in row))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def from_numpy(cls, arr: np.ndarray) -> "Matrix":
        if arr.ndim != 2:
            raise ValueError("expected a 2-D array")
        return cls(arr.shape[0], arr.shape[1], tuple(int(x) for x in arr.ravel()))

    def at(self, i: int, j: int) -> int:
        return self.data[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.data[i * self.cols : (i + 1) * self.cols]

    def col(self, j: int) -> tuple[int, ...]:
        return self.data[j :: self.cols]

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def to_numpy(self) -> np.ndarray:
        return np.array(self.data, dtype=np.int64).reshape(self.rows, self.cols)

    def slice_rows(self, lo: int, hi: int) -> "Matrix":
        if not (0 <= lo < hi <= self.rows):
            raise ValueError(f"bad row slice [{lo}, {hi}) for {self.rows} rows")
        return Matrix(hi - lo, self.cols, self.data[lo * self.cols : hi * self.cols])

    def slice_cols(self, lo: int, hi: int) -> "Matrix":
        if not (0 <= lo < hi <= self.cols):
            raise ValueError(f"bad column slice [{lo}, {hi}) for {self.cols} columns")
        data = tuple(
            self.data[i * self.cols + j] for i in range(self.rows) for j in range(lo, hi)
        )
        return Matrix(self.rows, hi - lo, data)

    def max_abs(self) -> int:
        return max(abs(e) for e in self.data)


def require_operand_range(*matrices: Matrix) -> None:
    """Reject matrices whose elements fall outside the operand width."""
    for mat in matrices:
        for e in mat.data:
            if e < OPERAND_MIN or e > OPERAND_MAX:
                raise ValueError(
                    f"operand element {e} outside [{OPERAND_MIN}, {OPERAND_MAX}]"
                )


def resolve_vector_operands(
    n: int, operands: tuple[Sequence[int], Sequence[int]] | None, seed: int
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Explicit operand vectors, range-checked, or generated ones."""
    if n < 1:
        raise ValueError(f"inner product length must be >= 1, got {n}")
    if operands is None:
        return make_vectors(n, seed)
    a, b = (tuple(int(x) for x in v) for v in operands)
    if len(a) != n or len(b) != n:
        raise ValueError(f"operand vectors must have length {n}")
    for v in a + b:
        if v < OPERAND_MIN or v > OPERAND_MAX:
            raise ValueError(f"operand element {v} outside [{OPERAND_MIN}, {OPERAND_MAX}]")
    return a, b


@dataclass(frozen=True)
class OuterProductStep:
    """One rank-b update: C += col_block (m x b) . row_block (b x n)."""

    index: int
    col_block: Matrix
    row_block: Matrix

    @property
    def width(self) -> int:
        return self.col_block.cols


def make_gemm(shape: GemmShape, seed: int) -> tuple[Matrix, Matrix]:
    """Build a reproducible (A, B) operand pair for the given shape.

    Generator: ``random.Random(seed)`` (Mersenne Twister), drawing A in
    row-major order first and then B, each element uniform in
    [OPERAND_MIN, OPERAND_MAX].  The generator identity is part of the
    reproducibility contract; traces regenerated from the same (shape, seed)
    are bitwise identical.
    """
    rng = random.Random(seed)
    a = Matrix(
        shape.m, shape.k, tuple(rng.randint(OPERAND_MIN, OPERAND_MAX) for _ in range(shape.m * shape.k))
    )
    b = Matrix(
        shape.k, shape.n, tuple(rng.randint(OPERAND_MIN, OPERAND_MAX) for _ in range(shape.k * shape.n))
    )
    return a, b


def make_vectors(n: int, seed: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Reproducible operand vectors for the inner-product simulators."""
    if n < 1:
        raise ValueError(f"vector length must be >= 1, got {n}")
    rng = random.Random(seed)
    a = tuple(rng.randint(OPERAND_MIN, OPERAND_MAX) for _ in range(n))
    b = tuple(rng.randint(OPERAND_MIN, OPERAND_MAX) for _ in range(n))
    return a, b


def reference_matmul(a: Matrix, b: Matrix) -> Matrix:
    """Ground-truth GEMM in exact integer arithmetic.

    Pure Python on purpose: this is the oracle every simulator is compared
    against, so it must not share the simulators' numpy code paths.
    """
    if a.cols != b.rows:
        raise ValueError(f"dimension mismatch: {a.rows}x{a.cols} . {b.rows}x{b.cols}")
    m, k, n = a.rows, a.cols, b.cols
    bcols = [b.col(j) for j in range(n)]
    out: list[int] = []
    for i in range(m):
        arow = a.row(i)
        for j in range(n):
            bcol = bcols[j]
            out.append(sum(x * y for x, y in zip(arow, bcol)))
    return Matrix(m, n, tuple(out))


def outer_product_schedule(a: Matrix, b: Matrix, block_width: int) -> list[OuterProductStep]:
    """Split A into block columns and B into block rows of the given width.

    Returns ceil(k / block_width) steps; the final step may be narrower when
    the inner dimension is not a multiple of the width.  Summing the steps'
    outer products reconstructs the full product exactly.
    """
    if a.cols != b.rows:
        raise ValueError(f"dimension mismatch: {a.rows}x{a.cols} . {b.rows}x{b.cols}")
    k = a.cols
    if block_width < 1 or block_width > k:
        raise ValueError(f"block width must be in [1, {k}], got {block_width}")
    steps = []
    for t, lo in enumerate(range(0, k, block_width)):
        hi = min(k, lo + block_width)
        steps.append(OuterProductStep(t, a.slice_cols(lo, hi), b.slice_rows(lo, hi)))
    return steps
