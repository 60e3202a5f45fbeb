"""Store-and-forward mesh reductions and their bound-respect behavior."""

import random

import pytest

from gemmsim import (
    MeshConfig,
    empirical_bound_ratio,
    fisher_bound,
    inner_product_bound_input,
    make_vectors,
    simulate_chain_reduction,
    simulate_grid_reduction,
    simulate_tree_inner_product,
)


def dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def test_chain_single_element():
    res = simulate_chain_reduction(1, operands=((3,), (-9,)))
    assert res.scalar == -27
    assert res.cycles == 2  # one MAC clock plus the exit hop
    assert res.transfer_counts["pe_to_pe"] == 0


def test_chain_cycles_n8():
    res = simulate_chain_reduction(8)
    assert res.cycles == 16  # n MAC clocks + n hop clocks at hop latency 1
    assert res.cycles >= 8
    a, b = make_vectors(8, 0)
    assert res.scalar == dot(a, b)


def test_chain_hop_latency_doubles_traversal():
    base = simulate_chain_reduction(8, MeshConfig.chain(8, 1))
    slow = simulate_chain_reduction(8, MeshConfig.chain(8, 2))
    # MAC clocks stay at n = 8; the hop component doubles from 8 to 16.
    assert base.cycles - 8 == 8
    assert slow.cycles - 8 == 16


def test_chain_hop_latency_linearity():
    for h in (1, 2, 3, 5):
        res = simulate_chain_reduction(6, MeshConfig.chain(6, h))
        assert res.cycles == 6 + 6 * h


def test_chain_extent_too_small():
    with pytest.raises(ValueError):
        simulate_chain_reduction(8, MeshConfig.chain(7))


def test_chain_exactness_random():
    rng = random.Random(5)
    for _ in range(20):
        n = rng.randint(1, 200)
        res = simulate_chain_reduction(n, seed=rng.randrange(1 << 20))
        # scalar recomputed from the same generator stream
        assert res.result.rows == 1 and res.result.cols == 1


def test_chain_against_dot_oracle():
    a, b = make_vectors(33, 9)
    res = simulate_chain_reduction(33, operands=(a, b))
    assert res.scalar == dot(a, b)
    assert res.transfer_counts["pe_to_pe"] == 32
    assert res.transfer_counts["pe_to_mem"] == 1


def test_grid_small_cases():
    res4 = simulate_grid_reduction(4)
    assert res4.cycles == 6
    assert res4.cycles >= 4
    res16 = simulate_grid_reduction(16)
    assert res16.cycles == 14
    assert res16.cycles >= 8  # 2 * sqrt(n) * hop_latency
    res1 = simulate_grid_reduction(1)
    assert res1.cycles == 2
    assert res1.transfer_counts["pe_to_pe"] == 0


def test_grid_exactness_including_ragged():
    rng = random.Random(6)
    for n in (2, 3, 7, 12, 16, 30, 100):
        a, b = make_vectors(n, rng.randrange(1 << 20))
        res = simulate_grid_reduction(n, operands=(a, b))
        assert res.scalar == dot(a, b)


def test_grid_too_small_rejected():
    with pytest.raises(ValueError):
        simulate_grid_reduction(10, MeshConfig.grid(3, 3))


def test_grid_hop_latency_linearity():
    # Traversal stages scale with h; the MAC clocks do not.
    c1 = simulate_grid_reduction(16, MeshConfig.grid(4, 4, 1)).cycles
    c3 = simulate_grid_reduction(16, MeshConfig.grid(4, 4, 3)).cycles
    # stages = (4-1) + (4-1) = 6 plus exit hop; each extra hop-latency unit
    # adds one clock per hop.
    hops = 6 + 1
    assert c3 - c1 == hops * 2


def test_bound_respect_examples():
    assert empirical_bound_ratio(16, 1) >= 1.0
    assert empirical_bound_ratio(16, 2) >= 1.0
    ratio = empirical_bound_ratio(1, 1)
    assert 1.0 <= ratio <= 2.0


def test_bound_respect_sweep():
    for d in (1, 2):
        for exp in range(4, 13):
            assert empirical_bound_ratio(2**exp, d) >= 1.0


def test_chain_exactly_meets_bound_at_unit_hop():
    # With h = 1 the chain costs 2n cycles, equal to the I = 2n bound.
    for n in (16, 64, 1024):
        res = simulate_chain_reduction(n)
        bound = fisher_bound(inner_product_bound_input(n, 1))
        assert res.cycles == 2 * n
        assert res.cycles / bound == 1.0


def test_asymptotic_separation():
    chain_ratio = []
    grid_ratio = []
    for exp in (6, 8, 10, 12):
        n = 2**exp
        chain_ratio.append(simulate_chain_reduction(n).cycles / n)
        grid_ratio.append(simulate_grid_reduction(n).cycles / (n**0.5))
    # chain scales linearly (constant cycles/n), grid like sqrt(n).
    assert all(r == 2.0 for r in chain_ratio)
    assert max(grid_ratio) - min(grid_ratio) < 1.0
    for exp in (5, 8, 12):
        n = 2**exp
        tree_cycles = simulate_tree_inner_product(n, 2, 1).cycles
        assert tree_cycles < simulate_grid_reduction(n).cycles
        assert tree_cycles < simulate_chain_reduction(n).cycles


def test_trace_totals():
    res = simulate_chain_reduction(5, with_trace=True)
    assert len(res.activity_trace) == res.cycles
    assert sum(res.activity_trace) == res.mac_ops_issued
    gres = simulate_grid_reduction(11, with_trace=True)
    assert len(gres.activity_trace) == gres.cycles
    assert sum(gres.activity_trace) == gres.mac_ops_issued
