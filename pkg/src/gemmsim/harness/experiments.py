"""Turn resolved experiment configs into report rows."""

from __future__ import annotations

from typing import Any

from .. import bounds as bounds_mod
from .. import meshflow, streamer, summa, systolic
from ..workload import GemmShape, make_gemm
from .config import ConfigError, iter_sweep_points

REPORT_COLUMNS = [
    "schema_version",
    "experiment",
    "architecture",
    "arch_params",
    "workload",
    "m",
    "n",
    "k",
    "vector_n",
    "seed",
    "block_width",
    "cycles",
    "mac_ops",
    "num_units",
    "utilization",
    "steady_state_utilization",
    "load_cycles",
    "fill_cycles",
    "stream_cycles",
    "drain_cycles",
    "bound_value",
    "bound_ratio",
    "total_seconds",
    "comm_seconds",
    "comp_seconds",
    "comm_latency_seconds",
    "comm_bandwidth_seconds",
    "steps",
    "row_broadcasts",
    "col_broadcasts",
    "generation",
    "core_multiplier",
    "powered_fraction",
    "effective_multiplier",
    "checks",
    "failures",
]


def _arch_params(arch: dict) -> str:
    return " ".join(f"{key}={value}" for key, value in arch.items() if key != "type")


def _phase_columns(res) -> dict[str, int]:
    """Map a simulator's phase breakdown onto the stable report columns."""
    out: dict[str, int] = {}
    if not res.phases:
        return out
    named = {"load": "load_cycles", "fill": "fill_cycles", "drain": "drain_cycles"}
    stream = 0
    for phase, cyc in res.phases.items():
        if phase in named:
            out[named[phase]] = cyc
        else:
            stream += cyc
    if stream:
        out["stream_cycles"] = stream
    return out


def _base_row(kind: str, arch_name: str, arch_params: str, workload_name: str) -> dict[str, Any]:
    return {
        "schema_version": 1,
        "experiment": kind,
        "architecture": arch_name,
        "arch_params": arch_params,
        "workload": workload_name,
    }


def _gemm_row(kind: str, arch: dict, workload: dict) -> dict[str, Any]:
    shape = GemmShape(workload["m"], workload["n"], workload["k"])
    row = _base_row(kind, arch["type"], _arch_params(arch), "gemm")
    row.update(
        m=shape.m, n=shape.n, k=shape.k, seed=workload["seed"], block_width=workload["block_width"]
    )

    if arch["type"] == "summa":
        cluster = summa.ClusterModel(
            arch["p_rows"],
            arch["p_cols"],
            bounds_mod.CommModel(arch["alpha"], arch["beta"]),
            arch["node_mac_rate"],
            arch["element_bytes"],
        )
        res = summa.simulate_summa(shape, workload["block_width"], cluster)
        row.update(
            mac_ops=res.mac_ops,
            total_seconds=res.total_time,
            comm_seconds=res.comm_time,
            comp_seconds=res.comp_time,
            comm_latency_seconds=res.comm_latency_time,
            comm_bandwidth_seconds=res.comm_bandwidth_time,
            steps=res.steps,
            row_broadcasts=res.row_broadcasts,
            col_broadcasts=res.col_broadcasts,
        )
        return row

    a, b = make_gemm(shape, workload["seed"])
    if arch["type"] == "systolic":
        res = systolic.simulate_systolic_gemm(a, b, systolic.SystolicConfig(arch["rows"], arch["cols"]))
    elif arch["type"] == "streamer":
        tree = streamer.build_ce_tree(
            arch["pes"], arch["fanout"], arch["level_latency"], arch["port_width"]
        )
        res = streamer.simulate_cs_gemm(a, b, tree, workload["block_width"])
    else:
        raise ConfigError(f"arch '{arch['type']}' cannot run a gemm workload")
    row.update(
        cycles=res.cycles,
        mac_ops=res.mac_ops_issued,
        num_units=res.num_units,
        utilization=res.utilization,
        steady_state_utilization=res.steady_state_utilization,
        **_phase_columns(res),
    )
    return row


def _inner_product_row(kind: str, arch: dict, workload: dict) -> dict[str, Any]:
    n, seed = workload["n"], workload["seed"]
    row = _base_row(kind, arch["type"], _arch_params(arch), "inner_product")
    row.update(vector_n=n, seed=seed)

    if arch["type"] == "chain":
        cfg = meshflow.MeshConfig.chain(arch["extent"], arch["hop_latency"])
        res = meshflow.simulate_chain_reduction(n, cfg, seed=seed)
        dimension = 1
    elif arch["type"] == "grid":
        cfg = meshflow.MeshConfig.grid(arch["rows"], arch["cols"], arch["hop_latency"])
        res = meshflow.simulate_grid_reduction(n, cfg, seed=seed)
        dimension = 2
    elif arch["type"] == "tree":
        res = streamer.simulate_tree_inner_product(
            n, arch["fanout"], arch["level_latency"], seed=seed
        )
        dimension = None
    else:
        raise ConfigError(f"arch '{arch['type']}' cannot run an inner_product workload")

    row.update(
        cycles=res.cycles,
        mac_ops=res.mac_ops_issued,
        num_units=res.num_units,
        utilization=res.utilization,
        **_phase_columns(res),
    )
    if dimension is not None:
        bound = bounds_mod.fisher_bound(bounds_mod.inner_product_bound_input(n, dimension))
        row.update(bound_value=bound, bound_ratio=res.cycles / bound)
    return row


def _point_row(kind: str, arch: dict, workload: dict) -> dict[str, Any]:
    if workload["kind"] == "gemm":
        return _gemm_row(kind, arch, workload)
    return _inner_product_row(kind, arch, workload)


def run_experiment(resolved: dict) -> list[dict[str, Any]]:
    """Execute a resolved config and return report rows in deterministic order.

    Simulator precondition violations surface as ValueError, which the CLI
    maps to its own exit code; anything config-shaped raises ConfigError.
    """
    kind = resolved["kind"]
    if kind == "simulate":
        return [_point_row(kind, resolved["arch"], resolved["workload"])]
    if kind == "compare":
        return [_point_row(kind, arch, resolved["workload"]) for arch in resolved["archs"]]
    if kind == "sweep":
        return [
            _point_row(kind, point["arch"], point["workload"])
            for point, _ in iter_sweep_points(resolved)
        ]
    if kind == "bounds":
        rows = []
        for entry in resolved["entries"]:
            problem = bounds_mod.MeshBoundInput(
                entry["inputs"], entry["outputs"], entry["computations"], entry["dimension"]
            )
            params = " ".join(f"{key}={value}" for key, value in entry.items())
            row = _base_row(kind, "fisher_bound", params, "")
            row["bound_value"] = bounds_mod.fisher_bound(problem)
            rows.append(row)
        return rows
    if kind == "darksilicon":
        rows = []
        for generation in resolved["generations"]:
            point = bounds_mod.dark_silicon(generation)
            row = _base_row(kind, "dark_silicon", "", "")
            row.update(
                generation=generation,
                core_multiplier=point.core_multiplier,
                powered_fraction=point.powered_fraction,
                effective_multiplier=point.effective_multiplier,
            )
            rows.append(row)
        return rows
    if kind == "validate":
        from .validation import run_validation

        report = run_validation(resolved["seed"], resolved["corpus_size"])
        rows = []
        for prop in report.properties:
            row = _base_row(kind, prop.name, "", "")
            row.update(checks=prop.checks, failures=len(prop.failures))
            rows.append(row)
        return rows
    raise ConfigError(f"unhandled experiment kind {kind!r}")


def validation_failed(rows: list[dict[str, Any]]) -> bool:
    return any(row.get("failures") for row in rows)
