"""Greedy partitioning of a mapped circuit into connected k-qubit blocks.

Each step scores every valid qubit group by the number of CNOTs in its
executable gate set and removes the best block. Executable-set computation
scans only the per-qubit gate chains of the group and stops as soon as every
group qubit is blocked, and group scores are cached between steps (a removed
block can only change the scores of groups sharing one of its qubits), which
keeps the loop close to linear in gate count.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .circuit_ir import Circuit, DependencyDag, Gate, GateKind, build_dag
from .router import check_mapped
from .topology import QubitGroup, Topology, enumerate_valid_groups


@dataclass(frozen=True)
class Block:
    """An executable gate set bound to one qubit group. `gates` holds indices
    into the source circuit, in source order."""

    group: QubitGroup
    gates: tuple[int, ...]
    cnot_count: int


@dataclass
class Partition:
    blocks: list[Block]
    mapping: list[QubitGroup]


def score(block_gates: Iterable[Gate]) -> int:
    """Number of CNOTs in a gate list (single-qubit gates contribute 0)."""
    return sum(1 for g in block_gates if g.kind is GateKind.CNOT)


def _executable_scan(chains, heads, gate_qubits, group_set, is_cnot):
    """Forward scan of the group's per-qubit chains.

    A gate joins the set iff all its qubits are in the group and, per qubit,
    the previous remaining gate on that qubit joined too. Returns (gate
    indices in source order, cnot count, per-qubit consumed counts).
    """
    pos = {q: heads.get(q, 0) for q in group_set}
    blocked = {q: False for q in group_set}
    taken: list[int] = []
    cnots = 0
    consumed = {q: 0 for q in group_set}
    while True:
        best_q = -1
        best_idx = -1
        for q in group_set:
            if blocked[q]:
                continue
            chain = chains.get(q)
            if chain is None or pos[q] >= len(chain):
                continue
            idx = chain[pos[q]]
            if best_idx < 0 or idx < best_idx:
                best_idx = idx
                best_q = q
        if best_idx < 0:
            break
        qs = gate_qubits[best_idx]
        if len(qs) == 1:
            taken.append(best_idx)
            pos[best_q] += 1
            consumed[best_q] += 1
            continue
        a, b = qs
        if a in group_set and b in group_set and not blocked[a] and not blocked[b]:
            # best_idx is minimal over heads, so it heads both chains
            taken.append(best_idx)
            if is_cnot[best_idx]:
                cnots += 1
            pos[a] += 1
            pos[b] += 1
            consumed[a] += 1
            consumed[b] += 1
        else:
            blocked[best_q] = True
    return taken, cnots, consumed


def executable_gates(dag: DependencyDag, group: QubitGroup) -> list[int]:
    """Largest dependency-closed gate set of the remainder acting only on the
    group, in source order. `dag` represents the not-yet-partitioned gates."""
    no_counts = [False] * dag.num_gates
    taken, _, _ = _executable_scan(
        dag.qubit_chains, {}, dag.gate_qubits, set(group.qubits), no_counts
    )
    return taken


def partition(c: Circuit, t: Topology, k: int) -> Partition:
    """Greedy block partition of a mapped circuit: repeatedly take the valid
    group whose executable set has the most CNOTs, remove it, repeat.

    Tie-breaking: executable CNOT count, then executable total gate count,
    then lexicographically smallest group.
    """
    if not 2 <= k <= 5:
        raise ValueError(f"block size {k} outside supported range 2..5")
    if not check_mapped(c, t):
        raise ValueError("circuit is not mapped to the topology (two-qubit gate off-edge)")

    used = sorted({q for g in c.gates for q in g.qubits})
    comp_of = {}
    for comp in t.components():
        for q in comp:
            comp_of[q] = comp
    for q in used:
        if len(comp_of[q]) < k:
            raise ValueError(
                f"block size {k} exceeds the connected component of qubit {q}"
            )

    dag = build_dag(c)
    chains = dag.qubit_chains
    gate_qubits = dag.gate_qubits
    is_cnot = [g.kind is GateKind.CNOT for g in c.gates]
    heads: dict[int, int] = {q: 0 for q in chains}
    remaining = len(c.gates)

    groups = enumerate_valid_groups(t, k)
    group_sets = [set(g.qubits) for g in groups]
    groups_of_qubit: dict[int, list[int]] = {}
    for gi, gs in enumerate(group_sets):
        for q in gs:
            groups_of_qubit.setdefault(q, []).append(gi)

    cache: list[tuple[list[int], int, dict[int, int]] | None] = [None] * len(groups)

    def entry(gi: int):
        if cache[gi] is None:
            cache[gi] = _executable_scan(chains, heads, gate_qubits, group_sets[gi], is_cnot)
        return cache[gi]

    blocks: list[Block] = []
    while remaining > 0:
        best_gi = -1
        best_key = (-1, -1)
        for gi in range(len(groups)):
            taken, cnots, _ = entry(gi)
            key = (cnots, len(taken))
            if key > best_key:
                best_key = key
                best_gi = gi
        taken, cnots, consumed = entry(best_gi)
        if not taken:
            raise RuntimeError("partition made no progress")  # unreachable for mapped input
        blocks.append(Block(groups[best_gi], tuple(taken), cnots))
        for q, cnt in consumed.items():
            heads[q] = heads.get(q, 0) + cnt
        remaining -= len(taken)
        for q in group_sets[best_gi]:
            for gi in groups_of_qubit.get(q, ()):
                cache[gi] = None

    return Partition(blocks=blocks, mapping=[b.group for b in blocks])
