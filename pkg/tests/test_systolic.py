"""Weight-stationary systolic array: exactness, cycle formula, occupancy."""

import random

import pytest

from gemmsim import (
    GemmShape,
    Matrix,
    SystolicConfig,
    make_gemm,
    reference_matmul,
    simulate_systolic_gemm,
    systolic_cycle_formula,
)


def test_single_pe_pipeline():
    a, b = Matrix.from_rows([[3]]), Matrix.from_rows([[-5]])
    res = simulate_systolic_gemm(a, b, SystolicConfig(1, 1))
    assert res.result == Matrix.from_rows([[-15]])
    assert res.cycles == 2  # one load clock, one streaming clock
    assert res.mac_ops_issued == 1


def test_identity_passthrough_with_pipeline_slack():
    b = Matrix.from_rows([[4, -7], [2, 9]])
    res = simulate_systolic_gemm(Matrix.identity(2), b, SystolicConfig(2, 2))
    assert res.result == b
    assert res.utilization < 1.0


def test_cycle_examples():
    assert systolic_cycle_formula(GemmShape(1, 1, 1), SystolicConfig(1, 1)) == 2
    assert systolic_cycle_formula(GemmShape(4, 4, 4), SystolicConfig(4, 4)) == 14
    assert systolic_cycle_formula(GemmShape(4, 8, 8), SystolicConfig(4, 4)) == 56


def test_simulation_matches_formula_and_oracle():
    rng = random.Random(3)
    for _ in range(30):
        shape = GemmShape(rng.randint(1, 24), rng.randint(1, 24), rng.randint(1, 24))
        cfg = SystolicConfig(rng.randint(1, 6), rng.randint(1, 6))
        a, b = make_gemm(shape, rng.randrange(1 << 20))
        res = simulate_systolic_gemm(a, b, cfg)
        assert res.result == reference_matmul(a, b)
        assert res.cycles == systolic_cycle_formula(shape, cfg)
        assert res.mac_ops_issued == shape.macs


def test_ragged_tiles_stay_exact():
    shape = GemmShape(5, 7, 9)
    cfg = SystolicConfig(4, 3)
    a, b = make_gemm(shape, 13)
    res = simulate_systolic_gemm(a, b, cfg)
    assert res.result == reference_matmul(a, b)
    assert res.cycles == systolic_cycle_formula(shape, cfg)


def test_dimension_mismatch_rejected():
    a, _ = make_gemm(GemmShape(2, 2, 3), 0)
    _, b = make_gemm(GemmShape(2, 2, 4), 0)
    with pytest.raises(ValueError):
        simulate_systolic_gemm(a, b, SystolicConfig(2, 2))


def test_operand_range_enforced():
    a = Matrix.from_rows([[300]])
    b = Matrix.from_rows([[1]])
    with pytest.raises(ValueError):
        simulate_systolic_gemm(a, b, SystolicConfig(1, 1))


def test_low_inner_dimension_occupancy():
    # Single k-tile pass with k < R: utilization can never exceed k/R.
    for k in (1, 2, 4, 8):
        shape = GemmShape(8, 8, k)
        a, b = make_gemm(shape, k)
        res = simulate_systolic_gemm(a, b, SystolicConfig(8, 8))
        assert res.utilization <= k / 8 + 1e-12


def test_occupancy_ceiling_at_full_inner_dimension():
    # k a multiple of R and large m: utilization approaches, but stays below,
    # m / (m + R + C - 2).
    shape = GemmShape(64, 4, 4)
    cfg = SystolicConfig(4, 4)
    a, b = make_gemm(shape, 5)
    res = simulate_systolic_gemm(a, b, cfg)
    ceiling = shape.m / (shape.m + cfg.rows + cfg.cols - 2)
    assert res.utilization <= ceiling
    assert res.utilization >= 0.9 * ceiling


def test_utilization_accounting():
    shape = GemmShape(4, 8, 8)
    cfg = SystolicConfig(4, 4)
    a, b = make_gemm(shape, 1)
    res = simulate_systolic_gemm(a, b, cfg)
    assert res.utilization == res.mac_ops_issued / (cfg.num_pes * res.cycles)
    assert res.phases["load"] + res.phases["stream"] == res.cycles


def test_trace_is_consistent():
    shape = GemmShape(6, 5, 7)
    cfg = SystolicConfig(3, 2)
    a, b = make_gemm(shape, 21)
    res = simulate_systolic_gemm(a, b, cfg, with_trace=True)
    assert len(res.activity_trace) == res.cycles
    assert sum(res.activity_trace) == res.mac_ops_issued
    assert max(res.activity_trace) <= cfg.num_pes


def test_deterministic_runs():
    shape = GemmShape(9, 9, 9)
    cfg = SystolicConfig(4, 4)
    a, b = make_gemm(shape, 2)
    assert simulate_systolic_gemm(a, b, cfg, with_trace=True) == simulate_systolic_gemm(
        a, b, cfg, with_trace=True
    )
