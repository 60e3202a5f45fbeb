"""Cycle-level weight-stationary systolic array running GEMM.

The array has R rows (inner-dimension axis) and C columns (output-column
axis).  For each (k-tile, n-tile) pass, a B tile is loaded so PE(r, c) holds
B[r, c] of the tile; A rows then stream in from the west edge, skewed one
cycle per array row, moving one PE east per clock, while partial sums move
one PE south per clock and accumulate on the way.  Finished output values
leave the bottom row.  Weight load and streaming never overlap, and ragged
edge tiles leave zero-weight PEs that still burn clocks, which is exactly
what depresses utilization at low inner dimension.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .results import SimResult, build_result
from .workload import GemmShape, Matrix, require_operand_range


@dataclass(frozen=True)
class SystolicConfig:
    """Array extents: rows along the inner dimension, cols along output columns."""

    rows: int
    cols: int

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise ValueError(f"array must be at least 1x1, got {self.rows}x{self.cols}")

    @property
    def num_pes(self) -> int:
        return self.rows * self.cols


def systolic_cycle_formula(shape: GemmShape, cfg: SystolicConfig) -> int:
    """Closed-form cycle count the event simulation must reproduce.

    Per tile pass: R cycles of weight load plus the skewed streaming span
    m + R + C - 2; there are ceil(k/R) * ceil(n/C) passes.
    """
    r, c = cfg.rows, cfg.cols
    passes = math.ceil(shape.k / r) * math.ceil(shape.n / c)
    return passes * (r + (shape.m + r + c - 2))


def simulate_systolic_gemm(
    a: Matrix, b: Matrix, cfg: SystolicConfig, *, with_trace: bool = False
) -> SimResult:
    """Run GEMM on the array, clock by clock, and return exact results.

    Counts every cycle of every pass (load, fill, steady streaming, drain).
    mac_ops_issued counts only useful MACs, i.e. positions where a real A
    element meets a real B element, so it totals m*n*k.
    """
    if a.cols != b.rows:
        raise ValueError(f"dimension mismatch: {a.rows}x{a.cols} . {b.rows}x{b.cols}")
    require_operand_range(a, b)
    m, k, n = a.rows, a.cols, b.cols
    r_ext, c_ext = cfg.rows, cfg.cols

    a_np = a.to_numpy()
    b_np = b.to_numpy()
    c_acc = np.zeros((m, n), dtype=np.int64)

    stream_span = m + r_ext + c_ext - 2
    cycles = 0
    mac_ops = 0
    collect_trace = with_trace
    trace: list[int] = []

    for k0 in range(0, k, r_ext):
        ke = min(r_ext, k - k0)
        # Injection schedule for this k-tile: at stream cycle s, array row r
        # receives A[s - r, k0 + r] (skewed wavefront), zero outside range.
        inject = np.zeros((stream_span, r_ext), dtype=np.int64)
        for r in range(ke):
            inject[r : r + m, r] = a_np[:, k0 + r]
        for n0 in range(0, n, c_ext):
            ne = min(c_ext, n - n0)
            weights = np.zeros((r_ext, c_ext), dtype=np.int64)
            weights[:ke, :ne] = b_np[k0 : k0 + ke, n0 : n0 + ne]

            # Weight load: one tile row per clock, no streaming overlap.
            cycles += r_ext
            if collect_trace:
                trace.extend([0] * r_ext)

            a_reg = np.zeros((r_ext, c_ext), dtype=np.int64)
            psum = np.zeros((r_ext, c_ext), dtype=np.int64)
            rs = np.arange(ke)
            for s in range(stream_span):
                new_a = np.empty_like(a_reg)
                new_a[:, 0] = inject[s]
                new_a[:, 1:] = a_reg[:, :-1]
                prod = new_a * weights
                new_psum = np.empty_like(psum)
                new_psum[0, :] = prod[0, :]
                new_psum[1:, :] = psum[:-1, :] + prod[1:, :]

                # Useful MACs this clock: PEs (r, c) with r < ke, c < ne and a
                # real A row in flight (0 <= s - r - c < m).
                lo = np.maximum(0, s - rs - m + 1)
                hi = np.minimum(ne - 1, s - rs)
                active = int(np.maximum(0, hi - lo + 1).sum())
                mac_ops += active
                if collect_trace:
                    trace.append(active)

                # Completed outputs leave the bottom row: column c finishes
                # logical row i = s - (R - 1) - c this clock.
                c_hi = min(ne - 1, s - (r_ext - 1))
                c_lo = max(0, s - (r_ext - 1) - (m - 1))
                if c_hi >= c_lo:
                    cs = np.arange(c_lo, c_hi + 1)
                    c_acc[s - (r_ext - 1) - cs, n0 + cs] += new_psum[r_ext - 1, cs]

                a_reg = new_a
                psum = new_psum
            cycles += stream_span

    passes = math.ceil(k / r_ext) * math.ceil(n / c_ext)
    phases = {"load": passes * r_ext, "stream": passes * stream_span}
    return build_result(
        cycles,
        Matrix.from_numpy(c_acc),
        mac_ops,
        cfg.num_pes,
        phases=phases,
        activity_trace=tuple(trace) if with_trace else None,
    )
