"""End-to-end optimization flow: route, partition, synthesize blocks
(optionally in parallel), compose, report.

Per-block synthesis seeds are derived from (global seed, block index), so
serial and worker-pool runs produce identical results.
"""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .circuit_ir import Circuit
from .composer import cnot_reduction, compose, use_synthesized
from .partitioner import Partition, partition
from .router import Layout, check_mapped, lower_swaps, route
from .simcore import block_unitary, simulate, state_infidelity, zero_state
from .synthesis import SynthesisResult, SynthesisStatus, derive_seed, synthesize
from .topology import Topology


@dataclass
class PipelineResult:
    circuit: Circuit            # optimized, on physical qubits
    mapped: Circuit             # partitioner input (routed or pass-through)
    partition: Partition
    results: list[SynthesisResult | None]
    layout: Layout
    report: dict


def _synth_task(args):
    target, group, topo, threshold, budget, time_budget, block_seed = args
    return synthesize(
        target,
        group,
        topo,
        threshold=threshold,
        cnot_budget=budget,
        time_budget=time_budget,
        seed=block_seed,
    )


def run_optimize(
    circuit: Circuit,
    topo: Topology,
    *,
    k: int = 3,
    threshold: float = 1e-10,
    time_budget: float = 60.0,
    jobs: int = 1,
    seed: int = 0,
    assume_mapped: bool = False,
) -> PipelineResult:
    """Full optimization pass. With assume_mapped, the input must already be
    hardware-compliant (SWAPs, if any, are lowered to CNOTs); otherwise the
    router runs first."""
    t_route0 = time.perf_counter()
    if assume_mapped:
        if circuit.num_qubits > topo.num_qubits:
            raise ValueError("circuit does not fit the topology")
        if not check_mapped(circuit, topo):
            raise ValueError("circuit is not mapped to the topology (--assume-mapped)")
        mapped = lower_swaps(
            Circuit(topo.num_qubits, list(circuit.gates), list(circuit.measurements))
        )
        identity = tuple(range(topo.num_qubits))
        layout = Layout(identity, identity)
    else:
        mapped, layout = route(circuit, topo, seed)
    t_route = time.perf_counter() - t_route0

    t_part0 = time.perf_counter()
    part = partition(mapped, topo, k)
    t_part = time.perf_counter() - t_part0

    t_syn0 = time.perf_counter()
    tasks = []
    for i, block in enumerate(part.blocks):
        if block.cnot_count == 0:
            tasks.append(None)  # nothing to gain; keep original gates
            continue
        target = block_unitary(block, mapped)
        tasks.append(
            (target, block.group, topo, threshold, block.cnot_count - 1,
             time_budget, derive_seed(seed, i))
        )
    live = [(i, t) for i, t in enumerate(tasks) if t is not None]
    results: list[SynthesisResult | None] = [None] * len(part.blocks)
    if jobs > 1 and len(live) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for (i, _), res in zip(live, pool.map(_synth_task, [t for _, t in live])):
                results[i] = res
    else:
        for i, t in live:
            results[i] = _synth_task(t)
    t_syn = time.perf_counter() - t_syn0

    t_comp0 = time.perf_counter()
    optimized = compose(part, results, mapped)
    t_comp = time.perf_counter() - t_comp0

    report = _build_report(
        mapped, optimized, part, results, layout, topo,
        k=k, seed=seed, threshold=threshold,
        wall_times={
            "route": round(t_route, 6),
            "partition": round(t_part, 6),
            "synthesis": round(t_syn, 6),
            "compose": round(t_comp, 6),
        },
    )
    return PipelineResult(optimized, mapped, part, results, layout, report)


def _build_report(mapped, optimized, part, results, layout, topo, *, k, seed, threshold, wall_times):
    blocks = []
    for block, res in zip(part.blocks, results):
        used = use_synthesized(block, res)
        if used:
            status = SynthesisStatus.SOLVED.value
            after = res.cnot_count
        elif res is not None and res.status is SynthesisStatus.BUDGET_EXCEEDED:
            status = SynthesisStatus.BUDGET_EXCEEDED.value
            after = block.cnot_count
        else:
            status = SynthesisStatus.FELL_BACK_TO_ORIGINAL.value
            after = block.cnot_count
        blocks.append({
            "group": list(block.group.qubits),
            "cnot_before": block.cnot_count,
            "cnot_after": after,
            "distance": None if res is None else res.achieved_distance,
            "status": status,
        })
    return {
        "schema": 1,
        "k": k,
        "seed": seed,
        "threshold": threshold,
        "num_qubits": mapped.num_qubits,
        "cnot_before": mapped.cnot_count(),
        "cnot_after": optimized.cnot_count(),
        "reduction_rate": cnot_reduction(mapped, optimized),
        "layout": {
            "initial": list(layout.logical_to_physical),
            "final": list(layout.final_logical_to_physical),
        },
        "blocks": blocks,
        "wall_times": wall_times,
    }


# --- layout-aware verification -------------------------------------------

def _spread_indices(n_logical: int, positions, n_phys: int) -> np.ndarray:
    """Physical basis index for each logical basis index, other wires |0>."""
    j = np.arange(1 << n_logical)
    phys = np.zeros(1 << n_logical, dtype=np.int64)
    for i in range(n_logical):
        phys |= ((j >> i) & 1) << int(positions[i])
    return phys


def embed_state(state: np.ndarray, positions, n_phys: int) -> np.ndarray:
    """Lift a logical state onto physical wires, remaining wires in |0>."""
    n_logical = int(np.log2(len(state)))
    out = np.zeros(1 << n_phys, dtype=complex)
    out[_spread_indices(n_logical, positions, n_phys)] = state
    return out


def extract_state(state: np.ndarray, positions, n_logical: int) -> np.ndarray:
    """Read a logical state back from physical wires (no renormalization, so
    any amplitude leaked onto other wires shows up as infidelity)."""
    n_phys = int(np.log2(len(state)))
    return state[_spread_indices(n_logical, positions, n_phys)]


def logical_infidelity(
    original: Circuit,
    physical: Circuit,
    layout: Layout,
    state: np.ndarray | None = None,
) -> float:
    """State infidelity between the original circuit and a routed/optimized
    physical circuit, for one logical input state (default all-zeros)."""
    n = original.num_qubits
    if state is None:
        state = zero_state(n)
    reference = simulate(original, state)
    phys_in = embed_state(state, layout.logical_to_physical[:n], physical.num_qubits)
    phys_out = simulate(physical, phys_in)
    recovered = extract_state(phys_out, layout.final_logical_to_physical[:n], n)
    return state_infidelity(reference, recovered)
