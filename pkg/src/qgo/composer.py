"""Re-assembly of the optimized circuit from synthesized blocks.

A synthesized block is used only when it solved and strictly reduces the
block's CNOT count; otherwise the original gates are kept (so the composed
circuit is never worse, and a block with equal CNOT count does not pick up
gratuitous synthesis distance). Finishes with a single-qubit merge pass and
re-appends the measurement layer verbatim.
"""
from __future__ import annotations

from .circuit_ir import Circuit, Gate, merge_single_qubit_runs
from .partitioner import Block, Partition
from .synthesis import SynthesisResult, SynthesisStatus


def use_synthesized(block: Block, result: SynthesisResult | None) -> bool:
    """Composition rule: take the synthesized block iff it solved with
    strictly fewer CNOTs than the original."""
    return (
        result is not None
        and result.status is SynthesisStatus.SOLVED
        and result.cnot_count < block.cnot_count
    )


def _relabel(gates: list[Gate], group: tuple[int, ...]) -> list[Gate]:
    return [Gate(g.kind, tuple(group[q] for q in g.qubits), g.params) for g in gates]


def compose(p: Partition, results: list[SynthesisResult | None], source: Circuit) -> Circuit:
    """Stitch blocks back together in partition order.

    `results[i]` is the synthesis outcome for `p.blocks[i]` (None when the
    block skipped synthesis). Local block qubits are relabeled through the
    block's sorted qubit group.
    """
    if len(results) != len(p.blocks):
        raise ValueError(f"{len(results)} results for {len(p.blocks)} blocks")
    gates: list[Gate] = []
    for block, result in zip(p.blocks, results):
        if use_synthesized(block, result):
            gates.extend(_relabel(result.circuit.gates, block.group.qubits))
        else:
            gates.extend(source.gates[i] for i in block.gates)
    merged = merge_single_qubit_runs(Circuit(source.num_qubits, gates))
    merged.measurements = list(source.measurements)
    return merged


def cnot_reduction(before: Circuit, after: Circuit) -> float:
    """(cnot(before) - cnot(after)) / cnot(before); 0 for CNOT-free input."""
    nb = before.cnot_count()
    if nb == 0:
        return 0.0
    return (nb - after.cnot_count()) / nb
