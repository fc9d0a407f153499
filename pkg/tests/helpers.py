"""Shared test utilities: random circuit generators and independent oracles."""
from __future__ import annotations

import numpy as np

from qgo.circuit_ir import Circuit, Gate, GateKind
from qgo.topology import Topology


def random_mapped_circuit(
    rng: np.random.Generator,
    topo: Topology,
    n_gates: int,
    p_two_qubit: float = 0.5,
) -> Circuit:
    """Random circuit whose two-qubit gates all lie on topology edges."""
    edges = sorted(topo.edges)
    gates: list[Gate] = []
    for _ in range(n_gates):
        if edges and rng.random() < p_two_qubit:
            a, b = edges[rng.integers(len(edges))]
            if rng.random() < 0.5:
                a, b = b, a
            gates.append(Gate(GateKind.CNOT, (a, b)))
        else:
            q = int(rng.integers(topo.num_qubits))
            kind = [GateKind.H, GateKind.RX, GateKind.RZ][rng.integers(3)]
            params = () if kind is GateKind.H else (float(rng.uniform(-np.pi, np.pi)),)
            gates.append(Gate(kind, (q,), params))
    return Circuit(topo.num_qubits, gates)


def random_circuit(rng: np.random.Generator, n: int, n_gates: int, p_two_qubit: float = 0.4) -> Circuit:
    """Random all-to-all circuit (for IR round-trip and simulator tests)."""
    kinds_1q = [GateKind.H, GateKind.X, GateKind.RX, GateKind.RY, GateKind.RZ, GateKind.U3]
    gates: list[Gate] = []
    for _ in range(n_gates):
        if n >= 2 and rng.random() < p_two_qubit:
            a, b = rng.choice(n, size=2, replace=False)
            kind = GateKind.CNOT if rng.random() < 0.8 else GateKind.SWAP
            gates.append(Gate(kind, (int(a), int(b))))
        else:
            kind = kinds_1q[rng.integers(len(kinds_1q))]
            nparams = {GateKind.RX: 1, GateKind.RY: 1, GateKind.RZ: 1, GateKind.U3: 3}.get(kind, 0)
            params = tuple(float(x) for x in rng.uniform(-np.pi, np.pi, nparams))
            gates.append(Gate(kind, (int(rng.integers(n)),), params))
    return Circuit(n, gates)


def per_qubit_projection(gates: list[Gate], indices: list[int] | None = None) -> dict[int, list[int]]:
    """Ordered gate indices per qubit; `indices` relabels positions."""
    proj: dict[int, list[int]] = {}
    for pos, g in enumerate(gates):
        idx = pos if indices is None else indices[pos]
        for q in g.qubits:
            proj.setdefault(q, []).append(idx)
    return proj


def naive_executable(gates: list[Gate], remaining: list[int], group: set[int]) -> list[int]:
    """Reference executable-set computation: full forward scan of the
    remaining gate list with per-qubit blocked flags."""
    blocked = {q: False for q in group}
    taken = []
    for i in remaining:
        qs = gates[i].qubits
        if all(q in blocked for q in qs) and not any(blocked[q] for q in qs):
            taken.append(i)
        else:
            for q in qs:
                if q in blocked:
                    blocked[q] = True
        if all(blocked.values()):
            break
    return taken


def naive_greedy_partition(c: Circuit, topo: Topology, k: int):
    """Reference greedy partition with the same tie-breaking, built on the
    naive executable-set scan and a fresh rescan of every group each step."""
    from qgo.topology import enumerate_valid_groups

    groups = enumerate_valid_groups(topo, k)
    remaining = list(range(len(c.gates)))
    blocks = []
    while remaining:
        best = None
        for g in groups:
            taken = naive_executable(c.gates, remaining, set(g.qubits))
            cnots = sum(1 for i in taken if c.gates[i].kind is GateKind.CNOT)
            key = (cnots, len(taken))
            if best is None or key > best[0]:
                best = (key, g, taken)
        (cnots, _), g, taken = best
        blocks.append((g, tuple(taken), cnots))
        taken_set = set(taken)
        remaining = [i for i in remaining if i not in taken_set]
    return blocks
