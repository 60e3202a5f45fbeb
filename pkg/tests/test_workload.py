"""Workload types, the reference oracle, and the outer-product schedule."""

import random

import numpy as np
import pytest

from gemmsim import (
    GemmShape,
    Matrix,
    make_gemm,
    make_vectors,
    outer_product_schedule,
    reference_matmul,
)


def outer_product_sum(steps, m, n):
    """Independent accumulation of the schedule's rank updates."""
    acc = [[0] * n for _ in range(m)]
    for step in steps:
        cb, rb = step.col_block, step.row_block
        for i in range(m):
            for j in range(n):
                acc[i][j] += sum(cb.at(i, t) * rb.at(t, j) for t in range(cb.cols))
    return Matrix.from_rows(acc)


def test_shape_validation():
    GemmShape(1, 1, 1)
    with pytest.raises(ValueError):
        GemmShape(0, 1, 1)
    with pytest.raises(ValueError):
        GemmShape(1, 1, -3)


def test_matrix_validation():
    with pytest.raises(ValueError):
        Matrix(2, 2, (1, 2, 3))
    with pytest.raises(ValueError):
        Matrix(0, 1, ())
    with pytest.raises(ValueError):
        Matrix(1, 2, (1.5, 2))


def test_matrix_accessors():
    m = Matrix.from_rows([[1, 2, 3], [4, 5, 6]])
    assert m.at(1, 2) == 6
    assert m.row(0) == (1, 2, 3)
    assert m.col(1) == (2, 5)
    assert m.slice_cols(1, 3).to_rows() == [[2, 3], [5, 6]]
    assert m.slice_rows(1, 2).to_rows() == [[4, 5, 6]]
    assert Matrix.from_numpy(m.to_numpy()) == m


def test_make_gemm_deterministic():
    a1, b1 = make_gemm(GemmShape(1, 1, 1), 0)
    a2, b2 = make_gemm(GemmShape(1, 1, 1), 0)
    assert (a1, b1) == (a2, b2)

    first = make_gemm(GemmShape(4, 4, 4), 7)
    second = make_gemm(GemmShape(4, 4, 4), 7)
    assert first == second


def test_make_gemm_seed_sensitivity():
    a1, b1 = make_gemm(GemmShape(8, 8, 8), 1)
    a2, b2 = make_gemm(GemmShape(8, 8, 8), 2)
    assert a1.data != a2.data or b1.data != b2.data


def test_make_gemm_operand_range():
    a, b = make_gemm(GemmShape(16, 16, 16), 3)
    assert all(-128 <= e <= 127 for e in a.data + b.data)


def test_make_vectors():
    assert make_vectors(5, 1) == make_vectors(5, 1)
    assert make_vectors(5, 1) != make_vectors(5, 2)
    with pytest.raises(ValueError):
        make_vectors(0, 1)


def test_reference_matmul_identity():
    b = Matrix.from_rows([[5, -3, 2], [0, 7, 1], [9, 9, -8]])
    assert reference_matmul(Matrix.identity(3), b) == b


def test_reference_matmul_zero():
    z = Matrix.zeros(2, 3)
    b = Matrix.from_rows([[1, 2], [3, 4], [5, 6]])
    assert reference_matmul(z, b) == Matrix.zeros(2, 2)


def test_reference_matmul_known_product():
    a = Matrix.from_rows([[1, 2], [3, 4]])
    b = Matrix.from_rows([[5, 6], [7, 8]])
    assert reference_matmul(a, b) == Matrix.from_rows([[19, 22], [43, 50]])


def test_reference_matmul_dimension_mismatch():
    with pytest.raises(ValueError):
        reference_matmul(Matrix.zeros(2, 3), Matrix.zeros(2, 2))


def test_reference_matmul_against_numpy():
    rng = random.Random(42)
    for _ in range(20):
        shape = GemmShape(rng.randint(1, 20), rng.randint(1, 20), rng.randint(1, 20))
        a, b = make_gemm(shape, rng.randrange(1 << 20))
        ours = reference_matmul(a, b).to_numpy()
        theirs = a.to_numpy() @ b.to_numpy()
        assert np.array_equal(ours, theirs)


def test_schedule_single_block():
    a, b = make_gemm(GemmShape(3, 4, 8), 5)
    steps = outer_product_schedule(a, b, 8)
    assert len(steps) == 1
    assert steps[0].col_block == a and steps[0].row_block == b


def test_schedule_reconstruction():
    a, b = make_gemm(GemmShape(5, 6, 8), 11)
    steps = outer_product_schedule(a, b, 2)
    assert len(steps) == 4
    assert outer_product_sum(steps, 5, 6) == reference_matmul(a, b)


def test_schedule_ragged_widths():
    a, b = make_gemm(GemmShape(2, 3, 5), 1)
    steps = outer_product_schedule(a, b, 2)
    assert [s.width for s in steps] == [2, 2, 1]
    assert outer_product_sum(steps, 2, 3) == reference_matmul(a, b)


def test_schedule_block_concatenation():
    a, b = make_gemm(GemmShape(4, 4, 7), 2)
    steps = outer_product_schedule(a, b, 3)
    rebuilt_a = [
        sum((list(step.col_block.row(i)) for step in steps), []) for i in range(4)
    ]
    assert Matrix.from_rows(rebuilt_a) == a
    rebuilt_b = [row for step in steps for row in step.row_block.to_rows()]
    assert Matrix.from_rows(rebuilt_b) == b


def test_schedule_width_errors():
    a, b = make_gemm(GemmShape(2, 2, 4), 0)
    with pytest.raises(ValueError):
        outer_product_schedule(a, b, 0)
    with pytest.raises(ValueError):
        outer_product_schedule(a, b, 5)


def test_schedule_property_random():
    rng = random.Random(7)
    for _ in range(25):
        shape = GemmShape(rng.randint(1, 16), rng.randint(1, 16), rng.randint(1, 16))
        a, b = make_gemm(shape, rng.randrange(1 << 20))
        width = rng.randint(1, shape.k)
        steps = outer_product_schedule(a, b, width)
        assert len(steps) == -(-shape.k // width)
        assert outer_product_sum(steps, shape.m, shape.n) == reference_matmul(a, b)
