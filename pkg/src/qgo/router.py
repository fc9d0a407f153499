"""Physical qubit mapping: initial layout plus greedy lookahead SWAP insertion.

Routing runs before partitioning so that inserted SWAPs (lowered to CNOTs)
become part of the synthesis input. Any externally mapped circuit can bypass
this stage entirely.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .circuit_ir import Circuit, Gate, GateKind
from .topology import Topology

LOOKAHEAD_WINDOW = 20


@dataclass(frozen=True)
class Layout:
    """Logical-to-physical assignment at circuit start and end.

    logical_to_physical[i] is the physical qubit holding logical qubit i when
    the circuit begins; final_logical_to_physical tracks where each logical
    qubit ends up after all inserted SWAPs.
    """

    logical_to_physical: tuple[int, ...]
    final_logical_to_physical: tuple[int, ...]


def check_mapped(c: Circuit, t: Topology) -> bool:
    """True iff every two-qubit gate acts on a topology edge."""
    return all(t.has_edge(*g.qubits) for g in c.gates if g.is_two_qubit)


def lower_swaps(c: Circuit) -> Circuit:
    """Rewrite every SWAP as 3 CNOTs (a,b),(b,a),(a,b)."""
    out = []
    for g in c.gates:
        if g.kind is GateKind.SWAP:
            a, b = g.qubits
            out += _swap_cnots(a, b)
        else:
            out.append(g)
    return Circuit(c.num_qubits, out, list(c.measurements))


def _swap_cnots(a: int, b: int) -> list[Gate]:
    return [Gate(GateKind.CNOT, (a, b)), Gate(GateKind.CNOT, (b, a)),
            Gate(GateKind.CNOT, (a, b))]


def _all_pairs_distances(t: Topology) -> list[list[float]]:
    inf = float("inf")
    n = t.num_qubits
    adj = t.adjacency
    dist = [[inf] * n for _ in range(n)]
    for s in range(n):
        dist[s][s] = 0
        dq = deque([s])
        while dq:
            v = dq.popleft()
            for w in adj[v]:
                if dist[s][w] == inf:
                    dist[s][w] = dist[s][v] + 1
                    dq.append(w)
    return dist


def _route_pass(c: Circuit, t: Topology, dist, initial: list[int]) -> tuple[list[Gate], list[int]]:
    """One routing sweep from the given initial layout. Returns the physical
    gate list (SWAPs already lowered) and the final logical->physical map."""
    n_phys = t.num_qubits
    l2p = list(initial)
    p2l = [-1] * n_phys
    for lq, pq in enumerate(l2p):
        p2l[pq] = lq

    # upcoming two-qubit endpoints (logical), for lookahead scoring
    pending = [g.qubits for g in c.gates if g.is_two_qubit]
    pending_pos = 0
    sorted_edges = sorted(t.edges)
    out: list[Gate] = []

    def insert_swap(u: int, v: int):
        # routing swap: moves states, so the logical tracking follows
        out.extend(_swap_cnots(u, v))
        lu, lv = p2l[u], p2l[v]
        p2l[u], p2l[v] = lv, lu
        if lu != -1:
            l2p[lu] = v
        if lv != -1:
            l2p[lv] = u

    for g in c.gates:
        if not g.is_two_qubit:
            out.append(Gate(g.kind, (l2p[g.qubits[0]],), g.params))
            continue
        la, lb = g.qubits
        if dist[l2p[la]][l2p[lb]] == float("inf"):
            raise ValueError(f"qubits {la} and {lb} lie in disconnected topology regions")
        window = pending[pending_pos:pending_pos + LOOKAHEAD_WINDOW]
        while dist[l2p[la]][l2p[lb]] > 1:
            pa, pb = l2p[la], l2p[lb]
            d_now = dist[pa][pb]
            best = None
            for u, v in sorted_edges:
                if u not in (pa, pb) and v not in (pa, pb):
                    continue
                # only consider swaps that make progress on the blocked pair
                qa = v if u == pa else (u if v == pa else pa)
                qb = v if u == pb else (u if v == pb else pb)
                if dist[qa][qb] >= d_now:
                    continue
                score = 0.0
                for wa, wb in window:
                    xa, xb = l2p[wa], l2p[wb]
                    xa = v if u == xa else (u if v == xa else xa)
                    xb = v if u == xb else (u if v == xb else xb)
                    score += dist[xa][xb]
                if best is None or score < best[0]:
                    best = (score, u, v)
            assert best is not None, "no progress-making swap on a connected region"
            insert_swap(best[1], best[2])
        pa, pb = l2p[la], l2p[lb]
        if g.kind is GateKind.SWAP:
            # program swap: executes on the wires, tracking unchanged
            out.extend(_swap_cnots(pa, pb))
        else:
            out.append(Gate(g.kind, (pa, pb), g.params))
        pending_pos += 1

    return out, l2p


def route(c: Circuit, t: Topology, seed: int = 0) -> tuple[Circuit, Layout]:
    """Map a circuit onto the topology, inserting SWAPs (lowered to 3 CNOTs).

    Starts from the identity layout with one reverse-pass refinement: route
    once, reuse the final permutation as the initial layout, route again.
    The algorithm is deterministic; `seed` is accepted for interface
    stability and currently unused.
    """
    if c.num_qubits > t.num_qubits:
        raise ValueError(
            f"circuit needs {c.num_qubits} qubits but topology has {t.num_qubits}"
        )
    del seed
    dist = _all_pairs_distances(t)
    identity = list(range(t.num_qubits))
    _, refined = _route_pass(c, t, dist, identity)
    gates, final = _route_pass(c, t, dist, refined)
    measurements = [(final[q], b) for q, b in c.measurements]
    routed = Circuit(t.num_qubits, gates, measurements)
    return routed, Layout(tuple(refined), tuple(final))
