"""Analytic SUMMA model: step structure, cost components, scaling."""

import pytest

from gemmsim import (
    ClusterModel,
    CollectiveKind,
    CommModel,
    GemmShape,
    collective_cost,
    simulate_summa,
    weak_scaling_overhead,
)


def test_single_node_has_no_communication():
    cluster = ClusterModel(1, 1, CommModel(1e-6, 1e-9), 1e9)
    res = simulate_summa(GemmShape(128, 128, 128), 16, cluster)
    assert res.comm_time == 0.0
    assert res.total_time == res.comp_time
    assert res.comp_time == 128**3 / 1e9


def test_reference_workload_step_structure():
    cluster = ClusterModel(4, 4, CommModel(1e-6, 1e-9), 1e9)
    res = simulate_summa(GemmShape(256, 256, 256), 32, cluster)
    assert res.steps == 8
    assert res.row_broadcasts == 8
    assert res.col_broadcasts == 8
    # Per step: one broadcast of a 64x32 panel along each process row and one
    # of a 32x64 panel along each process column, four participants each.
    per_step = collective_cost(
        CollectiveKind.BROADCAST, 4, 64 * 32 * 4, cluster.comm
    ) + collective_cost(CollectiveKind.BROADCAST, 4, 32 * 64 * 4, cluster.comm)
    assert res.comm_time == pytest.approx(8 * per_step, rel=1e-12)


def test_latency_only_cost_is_exact():
    alpha = 1e-6
    cluster = ClusterModel(4, 4, CommModel(alpha, 0.0), 1e9)
    res = simulate_summa(GemmShape(256, 256, 256), 32, cluster)
    assert res.comm_time == 8 * (2 + 2) * alpha
    assert res.comm_latency_time == res.comm_time
    assert res.comm_bandwidth_time == 0.0


def test_latency_only_cost_dyadic_alpha():
    cluster = ClusterModel(8, 2, CommModel(0.5, 0.0), 1e9)
    res = simulate_summa(GemmShape(64, 64, 64), 16, cluster)
    # ceil(log2 p_cols) = 1 and ceil(log2 p_rows) = 3 rounds per step.
    assert res.comm_time == 4 * (1 + 3) * 0.5


def test_block_width_free_choice():
    cluster = ClusterModel(4, 4, CommModel(1e-6, 1e-9), 1e9)
    shape = GemmShape(256, 256, 256)
    for width in (1, 7, 32, 256):
        res = simulate_summa(shape, width, cluster)
        assert res.steps == -(-256 // width)
        assert res.mac_ops == shape.macs
    with pytest.raises(ValueError):
        simulate_summa(shape, 0, cluster)


def test_alpha_dominated_regime_prefers_wide_blocks():
    cluster = ClusterModel(4, 4, CommModel(1e-3, 0.0), 1e9)
    shape = GemmShape(256, 256, 256)
    wide = simulate_summa(shape, 32, cluster)
    narrow = simulate_summa(shape, 16, cluster)
    assert narrow.steps == 2 * wide.steps
    assert narrow.comm_time == pytest.approx(2 * wide.comm_time, rel=1e-12)


def test_beta_dominated_regime_is_volume_insensitive():
    cluster = ClusterModel(4, 4, CommModel(0.0, 1e-9), 1e9)
    shape = GemmShape(256, 256, 256)
    wide = simulate_summa(shape, 32, cluster)
    narrow = simulate_summa(shape, 16, cluster)
    assert narrow.comm_time == pytest.approx(wide.comm_time, rel=1e-12)


def test_ragged_blocks_use_actual_bytes():
    cluster = ClusterModel(3, 2, CommModel(2e-6, 3e-9), 1e9, element_bytes=4)
    shape = GemmShape(10, 6, 5)
    res = simulate_summa(shape, 2, cluster)
    assert res.steps == 3  # widths 2, 2, 1
    expected = 0.0
    for width in (2, 2, 1):
        expected += collective_cost(CollectiveKind.BROADCAST, 2, 4 * width * 4, cluster.comm)
        expected += collective_cost(CollectiveKind.BROADCAST, 3, width * 3 * 4, cluster.comm)
    assert res.comm_time == pytest.approx(expected, rel=1e-12)


def test_monotonicity():
    shape = GemmShape(128, 128, 128)
    slow = simulate_summa(shape, 16, ClusterModel(4, 4, CommModel(1e-6, 1e-9), 1e8))
    fast = simulate_summa(shape, 16, ClusterModel(4, 4, CommModel(1e-6, 1e-9), 1e10))
    assert fast.total_time < slow.total_time

    base = simulate_summa(shape, 16, ClusterModel(4, 4, CommModel(1e-6, 1e-9), 1e9))
    more_alpha = simulate_summa(shape, 16, ClusterModel(4, 4, CommModel(2e-6, 1e-9), 1e9))
    more_beta = simulate_summa(shape, 16, ClusterModel(4, 4, CommModel(1e-6, 2e-9), 1e9))
    assert more_alpha.comm_time > base.comm_time
    assert more_beta.comm_time > base.comm_time


def test_weak_scaling_single_node():
    points = weak_scaling_overhead(GemmShape(64, 64, 64), [1], CommModel(1e-6, 1e-9), 1e9)
    assert points[0].overhead_fraction == 0.0


def test_weak_scaling_latency_ratios():
    alpha = 1e-6
    points = weak_scaling_overhead(
        GemmShape(64, 64, 64), [2, 4, 8], CommModel(alpha, 0.0), 1e9, block_width=16
    )
    latencies = [p.comm_latency_time for p in points]
    assert latencies[1] / latencies[0] == pytest.approx(2.0, rel=1e-12)
    assert latencies[2] / latencies[0] == pytest.approx(3.0, rel=1e-12)
    # Fixed per-node work: comp_time identical across grids.
    comps = {p.comp_time for p in points}
    assert len(comps) == 1


def test_weak_scaling_latency_closed_form():
    alpha = 0.5
    steps = 4  # k = 64, block 16
    points = weak_scaling_overhead(
        GemmShape(64, 64, 64), [2, 4, 8], CommModel(alpha, 0.0), 1e9, block_width=16
    )
    for point, q, rounds in zip(points, (2, 4, 8), (1, 2, 3)):
        assert point.num_nodes == q * q
        assert point.comm_time == steps * (2 * rounds) * alpha


def test_weak_scaling_validation():
    with pytest.raises(ValueError):
        weak_scaling_overhead(GemmShape(8, 8, 8), [4, 2], CommModel(0, 0), 1e9)
    with pytest.raises(ValueError):
        weak_scaling_overhead(GemmShape(8, 8, 8), [0, 2], CommModel(0, 0), 1e9)


def test_cluster_validation():
    with pytest.raises(ValueError):
        ClusterModel(0, 4, CommModel(0, 0), 1e9)
    with pytest.raises(ValueError):
        ClusterModel(4, 4, CommModel(0, 0), 0.0)
    with pytest.raises(ValueError):
        ClusterModel(4, 4, CommModel(0, 0), 1e9, element_bytes=0)
