"""Store-and-forward mesh simulator for inner products.

The mesh obeys two rules: data advances one neighbor hop per hop_latency
clocks, and partial results reach memory only by traversing PEs in spatial
order.  Operand pairs are preloaded into the PEs at no modeled cost; the
cycles counted are the MAC-and-forward sweep plus the final hop that
delivers the scalar into memory on the far side.  Each reduction stage costs
one MAC clock at the receiving PE plus hop_latency transfer clocks, so a
length-n chain takes n * (1 + hop_latency) cycles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .bounds import fisher_bound, inner_product_bound_input
from .results import SimResult, build_result
from .workload import Matrix, resolve_vector_operands


@dataclass(frozen=True)
class MeshConfig:
    """A 1-D chain or 2-D grid of PEs with a fixed per-hop transfer latency."""

    dimension: int
    extents: tuple[int, ...]
    hop_latency: int = 1

    def __post_init__(self) -> None:
        if self.dimension not in (1, 2):
            raise ValueError(f"mesh dimension must be 1 or 2, got {self.dimension}")
        if not isinstance(self.extents, tuple):
            object.__setattr__(self, "extents", tuple(self.extents))
        if len(self.extents) != self.dimension:
            raise ValueError(f"expected {self.dimension} extents, got {self.extents}")
        if any(e < 1 for e in self.extents):
            raise ValueError(f"extents must be >= 1, got {self.extents}")
        if self.hop_latency < 1:
            raise ValueError(f"hop latency must be >= 1, got {self.hop_latency}")

    @classmethod
    def chain(cls, extent: int, hop_latency: int = 1) -> "MeshConfig":
        return cls(1, (extent,), hop_latency)

    @classmethod
    def grid(cls, rows: int, cols: int, hop_latency: int = 1) -> "MeshConfig":
        return cls(2, (rows, cols), hop_latency)

    @property
    def num_pes(self) -> int:
        total = 1
        for e in self.extents:
            total *= e
        return total


def simulate_chain_reduction(
    n: int,
    cfg: MeshConfig | None = None,
    *,
    operands: tuple[Sequence[int], Sequence[int]] | None = None,
    seed: int = 0,
    with_trace: bool = False,
) -> SimResult:
    """Inner product on a 1-D chain.

    The running sum starts at the memory-side PE and visits every PE in
    order; each visit is one MAC clock (a_i * b_i + incoming) after
    hop_latency transfer clocks, and the final scalar pays one more hop into
    the collecting memory at the far end.
    """
    if cfg is None:
        cfg = MeshConfig.chain(n)
    if cfg.dimension != 1:
        raise ValueError("chain reduction needs a 1-D mesh config")
    if cfg.extents[0] < n:
        raise ValueError(f"chain extent {cfg.extents[0]} too small for n={n}")
    a, b = resolve_vector_operands(n, operands, seed)
    h = cfg.hop_latency

    trace: list[int] = []
    cycle = 0
    acc = 0
    hops = 0
    for i in range(n):
        if i > 0:
            cycle += h  # partial sum hops to the next PE
            hops += 1
            if with_trace:
                trace.extend([0] * h)
        acc = a[i] * b[i] + acc
        cycle += 1
        if with_trace:
            trace.append(1)
    cycle += h  # scalar exits into memory on the far side
    if with_trace:
        trace.extend([0] * h)

    transfers = {"pe_to_pe": hops, "pe_to_mem": 1}
    phases = {"reduce": cycle - h, "drain": h}
    return build_result(
        cycle,
        Matrix(1, 1, (acc,)),
        n,
        cfg.num_pes,
        phases=phases,
        transfer_counts=transfers,
        activity_trace=tuple(trace) if with_trace else None,
    )


def simulate_grid_reduction(
    n: int,
    cfg: MeshConfig | None = None,
    *,
    operands: tuple[Sequence[int], Sequence[int]] | None = None,
    seed: int = 0,
    with_trace: bool = False,
) -> SimResult:
    """Inner product on a 2-D grid: rows reduce in parallel, then the result column.

    Operand pairs sit row-major in the grid.  Every row runs a chain-style
    MAC sweep toward column 0 simultaneously; the column phase then combines
    the row sums southward (each combine is one MAC-unit clock plus a hop),
    and the scalar exits the grid with one final hop.  The row phase waits
    for the longest row, keeping the schedule deterministic.
    """
    if cfg is None:
        side = math.isqrt(n)
        if side * side < n:
            side += 1
        cfg = MeshConfig.grid(side, side)
    if cfg.dimension != 2:
        raise ValueError("grid reduction needs a 2-D mesh config")
    rows, cols = cfg.extents
    if rows * cols < n:
        raise ValueError(f"grid {rows}x{cols} too small for n={n}")
    a, b = resolve_vector_operands(n, operands, seed)
    h = cfg.hop_latency

    # Row-major occupancy: full rows of `cols` pairs, one possibly partial row.
    row_lengths = [min(cols, n - r * cols) for r in range(rows) if n - r * cols > 0]
    occupied_rows = len(row_lengths)
    max_len = max(row_lengths)

    row_sums = []
    pos = 0
    for length in row_lengths:
        s = 0
        for i in range(pos, pos + length):
            s = a[i] * b[i] + s
        row_sums.append(s)
        pos += length
    total = 0
    for s in row_sums:
        total += s

    stage = h + 1  # hop + MAC clock per reduction stage
    row_phase = 1 + (max_len - 1) * stage  # first MAC clock, then stages
    col_phase = (occupied_rows - 1) * stage
    cycles = row_phase + col_phase + h

    hops = sum(length - 1 for length in row_lengths) + (occupied_rows - 1)
    mac_ops = n + (occupied_rows - 1)  # column combines occupy MAC units too

    trace: tuple[int, ...] | None = None
    if with_trace:
        t = [0] * cycles
        for r, length in enumerate(row_lengths):
            for j in range(length):
                t[j * stage] += 1  # MAC clock of stage j in row r
        for step in range(1, occupied_rows):
            t[row_phase + step * stage - 1] += 1
        trace = tuple(t)

    transfers = {"pe_to_pe": hops, "pe_to_mem": 1}
    phases = {"row_reduce": row_phase, "col_reduce": col_phase, "drain": h}
    return build_result(
        cycles,
        Matrix(1, 1, (total,)),
        mac_ops,
        cfg.num_pes,
        phases=phases,
        transfer_counts=transfers,
        activity_trace=trace,
    )


def empirical_bound_ratio(n: int, dimension: int, hop_latency: int = 1) -> float:
    """Simulated cycles over the analytic mesh bound for a length-n inner product.

    Uses the documented I = 2n, K = 1, T = n accounting.  With hop_latency 1
    the ratio is >= 1 for every n: the mesh never beats its own bound.
    """
    if dimension == 1:
        sim = simulate_chain_reduction(n, MeshConfig.chain(n, hop_latency))
    elif dimension == 2:
        side = math.isqrt(n)
        if side * side < n:
            side += 1
        sim = simulate_grid_reduction(n, MeshConfig.grid(side, side, hop_latency))
    else:
        raise ValueError(f"mesh dimension must be 1 or 2, got {dimension}")
    return sim.cycles / fisher_bound(inner_product_bound_input(n, dimension))
