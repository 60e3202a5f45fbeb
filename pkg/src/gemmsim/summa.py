"""Analytic SUMMA on a process grid with the alpha-beta collective model.

Closed-form evaluation, not an event loop: per outer-product step, the owner
of the current block column broadcasts an (m/p_rows) x b panel along each
process row and the owner of the block row broadcasts a b x (n/p_cols)
panel along each process column; reduction is in place at every node, so no
step pays a reduce or gather.  Block width is a free parameter: nothing
couples it to the grid shape.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .bounds import CollectiveKind, CommModel, collective_cost
from .workload import GemmShape


@dataclass(frozen=True)
class ClusterModel:
    """Process grid, link cost model, and per-node compute rate."""

    p_rows: int
    p_cols: int
    comm: CommModel
    node_mac_rate: float
    element_bytes: int = 4

    def __post_init__(self) -> None:
        if self.p_rows < 1 or self.p_cols < 1:
            raise ValueError(f"grid must be at least 1x1, got {self.p_rows}x{self.p_cols}")
        if self.node_mac_rate <= 0:
            raise ValueError(f"node MAC rate must be positive, got {self.node_mac_rate}")
        if self.element_bytes < 1:
            raise ValueError(f"element width must be >= 1 byte, got {self.element_bytes}")

    @property
    def num_nodes(self) -> int:
        return self.p_rows * self.p_cols


@dataclass(frozen=True)
class SummaResult:
    total_time: float
    comm_time: float
    comp_time: float
    steps: int
    row_broadcasts: int
    col_broadcasts: int
    comm_latency_time: float  # alpha-only part; equals comm_time when beta = 0
    comm_bandwidth_time: float  # beta-only part; equals comm_time when alpha = 0
    mac_ops: int


def simulate_summa(shape: GemmShape, block_width: int, cluster: ClusterModel) -> SummaResult:
    """Cost one SUMMA run: ceil(k/b) steps of two broadcasts each.

    Block heights/widths use ceiling partitioning when the matrix does not
    divide the grid, and each step's cost uses the actual bytes of its
    (possibly ragged) blocks.  Computation and communication do not overlap:
    total_time = comp_time + comm_time.
    """
    if block_width < 1:
        raise ValueError(f"block width must be >= 1, got {block_width}")
    m, n, k = shape.m, shape.n, shape.k
    b = min(block_width, k)
    rows_per_node = math.ceil(m / cluster.p_rows)
    cols_per_node = math.ceil(n / cluster.p_cols)
    eb = cluster.element_bytes

    alpha_only = CommModel(cluster.comm.alpha, 0.0)
    beta_only = CommModel(0.0, cluster.comm.beta)

    step_costs: list[float] = []
    latency_parts: list[float] = []
    bandwidth_parts: list[float] = []
    steps = 0
    for lo in range(0, k, b):
        width = min(b, k - lo)
        steps += 1
        a_bytes = rows_per_node * width * eb
        b_bytes = width * cols_per_node * eb
        for participants, nbytes in ((cluster.p_cols, a_bytes), (cluster.p_rows, b_bytes)):
            step_costs.append(
                collective_cost(CollectiveKind.BROADCAST, participants, nbytes, cluster.comm)
            )
            latency_parts.append(
                collective_cost(CollectiveKind.BROADCAST, participants, nbytes, alpha_only)
            )
            bandwidth_parts.append(
                collective_cost(CollectiveKind.BROADCAST, participants, nbytes, beta_only)
            )

    comm_time = math.fsum(step_costs)
    comp_time = shape.macs / (cluster.num_nodes * cluster.node_mac_rate)
    return SummaResult(
        total_time=comp_time + comm_time,
        comm_time=comm_time,
        comp_time=comp_time,
        steps=steps,
        row_broadcasts=steps,
        col_broadcasts=steps,
        comm_latency_time=math.fsum(latency_parts),
        comm_bandwidth_time=math.fsum(bandwidth_parts),
        mac_ops=shape.macs,
    )


@dataclass(frozen=True)
class WeakScalingPoint:
    num_nodes: int
    comm_time: float
    comp_time: float
    total_time: float
    overhead_fraction: float
    comm_latency_time: float


def weak_scaling_overhead(
    shape_per_node: GemmShape,
    grids: Sequence[int],
    comm: CommModel,
    node_mac_rate: float,
    block_width: int | None = None,
    element_bytes: int = 4,
) -> list[WeakScalingPoint]:
    """Communication overhead across square grids at fixed per-node work.

    Each grid side q runs a (q*m0) x (q*n0) x k0 problem on q x q nodes, so
    per-node MACs stay constant while the latency part of comm_time grows
    with ceil(log2(q)) = ceil(log2(sqrt(p))).
    """
    sides = list(grids)
    if any(q < 1 for q in sides):
        raise ValueError(f"grid sides must be >= 1, got {sides}")
    if any(b >= a for a, b in zip(sides[1:], sides)):
        raise ValueError(f"grid sides must be strictly increasing, got {sides}")
    if block_width is None:
        block_width = shape_per_node.k

    points = []
    for q in sides:
        shape = GemmShape(q * shape_per_node.m, q * shape_per_node.n, shape_per_node.k)
        cluster = ClusterModel(q, q, comm, node_mac_rate, element_bytes)
        res = simulate_summa(shape, block_width, cluster)
        points.append(
            WeakScalingPoint(
                num_nodes=q * q,
                comm_time=res.comm_time,
                comp_time=res.comp_time,
                total_time=res.total_time,
                overhead_fraction=res.comm_time / res.total_time,
                comm_latency_time=res.comm_latency_time,
            )
        )
    return points
