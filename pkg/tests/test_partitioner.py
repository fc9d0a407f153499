import numpy as np
import pytest

from qgo.circuit_ir import Circuit, Gate, GateKind, build_dag
from qgo.partitioner import executable_gates, partition, score
from qgo.topology import QubitGroup, make_grid, make_line

from helpers import naive_executable, naive_greedy_partition, per_qubit_projection, random_mapped_circuit


def _cx(a, b):
    return Gate(GateKind.CNOT, (a, b))


def test_executable_gates_blocked_by_outside_dependency():
    c = Circuit(4, [_cx(0, 1), _cx(2, 3), _cx(0, 2)])
    dag = build_dag(c)
    got = executable_gates(dag, QubitGroup((0, 1, 2)))
    # CNOT(0,2) is blocked: its q2 predecessor CNOT(2,3) leaves the group
    assert got == [0]
    assert got == naive_executable(c.gates, [0, 1, 2], {0, 1, 2})


def test_executable_gates_full_group_takes_everything():
    c = Circuit(3, [_cx(0, 1), Gate(GateKind.H, (2,)), _cx(1, 2)])
    dag = build_dag(c)
    assert executable_gates(dag, QubitGroup((0, 1, 2))) == [0, 1, 2]


def test_executable_gates_dependency_chain_within_group():
    # gate on (q0,q1) whose predecessors on q0 and q1 are all in-group is
    # executable; a gate touching q3 outside the group is not
    c = Circuit(
        4,
        [
            Gate(GateKind.H, (0,)),
            _cx(0, 1),
            _cx(2, 3),
            _cx(0, 1),
        ],
    )
    dag = build_dag(c)
    got = executable_gates(dag, QubitGroup((0, 1, 2)))
    assert got == [0, 1, 3]


def test_score_counts_cnots():
    assert score([]) == 0
    gates = [Gate(GateKind.H, (0,)), _cx(0, 1), Gate(GateKind.RZ, (0,), (0.1,)), _cx(1, 0)]
    assert score(gates) == 2


def test_partition_single_group_circuit():
    t = make_line(3)
    c = Circuit(3, [_cx(0, 1), _cx(1, 2), Gate(GateKind.H, (0,)), _cx(0, 1)])
    p = partition(c, t, 3)
    assert len(p.blocks) == 1
    assert p.blocks[0].gates == (0, 1, 2, 3)
    assert p.mapping == [QubitGroup((0, 1, 2))]


def _check_partition_invariants(c, t, p, k):
    # coverage: every gate exactly once
    all_indices = [i for b in p.blocks for i in b.gates]
    assert sorted(all_indices) == list(range(len(c.gates)))
    # order: per-qubit projection preserved
    concat_gates = [c.gates[i] for i in all_indices]
    assert per_qubit_projection(concat_gates, all_indices) == per_qubit_projection(c.gates)
    # validity and block locality
    from qgo.topology import is_valid_group

    for b in p.blocks:
        assert is_valid_group(t, set(b.group.qubits))
        assert len(b.group) == k
        for i in b.gates:
            g = c.gates[i]
            assert set(g.qubits) <= set(b.group.qubits)
            if g.is_two_qubit:
                assert t.has_edge(*g.qubits)
        assert b.cnot_count == score(c.gates[i] for i in b.gates)


@pytest.mark.parametrize("seed", range(8))
@pytest.mark.parametrize("k", [3, 4])
def test_partition_matches_reference_greedy(seed, k):
    rng = np.random.default_rng(seed)
    topo = make_grid(2, 3) if seed % 2 == 0 else make_line(6)
    c = random_mapped_circuit(rng, topo, int(rng.integers(8, 25)))
    p = partition(c, topo, k)
    _check_partition_invariants(c, topo, p, k)
    ref = naive_greedy_partition(c, topo, k)
    assert [(b.group.qubits, b.gates, b.cnot_count) for b in p.blocks] == [
        (g.qubits, taken, cnots) for g, taken, cnots in ref
    ]


def test_five_qubit_circuit_three_blocks():
    # three entangling clusters on distinct overlapping groups force one
    # block per cluster (verified against the reference greedy)
    t = make_line(5)
    gates = [
        _cx(0, 1), _cx(1, 2), _cx(0, 1),          # cluster on {0,1,2}
        _cx(3, 4), _cx(2, 3), _cx(3, 4),          # cluster on {2,3,4}
        _cx(1, 2), _cx(0, 1), _cx(1, 0),          # back on {0,1,2}
    ]
    c = Circuit(5, gates)
    p = partition(c, t, 3)
    _check_partition_invariants(c, t, p, 3)
    ref = naive_greedy_partition(c, t, 3)
    assert len(p.blocks) == len(ref) == 3


def test_partition_progress_on_single_qubit_tail():
    # a block of only single-qubit gates must still be consumed
    t = make_line(3)
    c = Circuit(3, [Gate(GateKind.H, (0,)), Gate(GateKind.RZ, (2,), (0.5,))])
    p = partition(c, t, 3)
    assert len(p.blocks) == 1
    assert p.blocks[0].cnot_count == 0


def test_partition_rejects_unmapped():
    t = make_line(3)
    c = Circuit(3, [_cx(0, 2)])
    with pytest.raises(ValueError, match="not mapped"):
        partition(c, t, 3)


def test_partition_rejects_oversized_k():
    t = make_line(2)
    c = Circuit(2, [_cx(0, 1)])
    with pytest.raises(ValueError, match="component"):
        partition(c, t, 3)
    with pytest.raises(ValueError, match="range"):
        partition(c, t, 6)


def test_partition_selected_score_is_stepwise_max():
    rng = np.random.default_rng(42)
    topo = make_line(5)
    c = random_mapped_circuit(rng, topo, 30)
    p = partition(c, topo, 3)
    from qgo.topology import enumerate_valid_groups

    remaining = list(range(len(c.gates)))
    for b in p.blocks:
        best = max(
            score(c.gates[i] for i in naive_executable(c.gates, remaining, set(g.qubits)))
            for g in enumerate_valid_groups(topo, 3)
        )
        assert b.cnot_count == best
        taken = set(b.gates)
        remaining = [i for i in remaining if i not in taken]
