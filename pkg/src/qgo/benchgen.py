"""Deterministic benchmark circuit generators.

Four families: QFT, first-order-Trotter transverse-field Ising evolution,
QAOA MaxCut ansatz on a seeded near-3-regular graph, and an in-place
ripple-carry adder. Controlled-phase and Toffoli lowerings are fixed so CNOT
counts are reproducible constants.
"""
from __future__ import annotations

import math

import numpy as np

from .circuit_ir import Circuit, Gate, GateKind


def _cp(ctl: int, tgt: int, theta: float) -> list[Gate]:
    """Controlled-phase diag(1,1,1,e^{i theta}) up to global phase: 2 CNOTs."""
    return [
        Gate(GateKind.RZ, (ctl,), (theta / 2,)),
        Gate(GateKind.RZ, (tgt,), (theta / 2,)),
        Gate(GateKind.CNOT, (ctl, tgt)),
        Gate(GateKind.RZ, (tgt,), (-theta / 2,)),
        Gate(GateKind.CNOT, (ctl, tgt)),
    ]


def _swap3(a: int, b: int) -> list[Gate]:
    return [Gate(GateKind.CNOT, (a, b)), Gate(GateKind.CNOT, (b, a)),
            Gate(GateKind.CNOT, (a, b))]


def _rzz(a: int, b: int, theta: float) -> list[Gate]:
    """exp(-i theta/2 Z.Z): CNOT - RZ - CNOT."""
    return [
        Gate(GateKind.CNOT, (a, b)),
        Gate(GateKind.RZ, (b,), (theta,)),
        Gate(GateKind.CNOT, (a, b)),
    ]


# standard 6-CNOT Toffoli, with T/Tdg realized as RZ(+-pi/4)
def _toffoli(a: int, b: int, c: int) -> list[Gate]:
    t = math.pi / 4
    rz = lambda q, s: Gate(GateKind.RZ, (q,), (s * t,))
    cx = lambda x, y: Gate(GateKind.CNOT, (x, y))
    h = lambda q: Gate(GateKind.H, (q,))
    return [
        h(c), cx(b, c), rz(c, -1), cx(a, c), rz(c, +1), cx(b, c), rz(c, -1),
        cx(a, c), rz(b, +1), rz(c, +1), h(c), cx(a, b), rz(a, +1), rz(b, -1),
        cx(a, b),
    ]


def gen_qft(n: int) -> Circuit:
    """Quantum Fourier transform: H + controlled-phase ladder + final swaps.

    CNOT count: 2*C(n,2) + 3*floor(n/2).
    """
    if n < 1:
        raise ValueError("qft needs at least 1 qubit")
    gates: list[Gate] = []
    for i in range(n - 1, -1, -1):
        gates.append(Gate(GateKind.H, (i,)))
        for m in range(1, i + 1):
            gates.extend(_cp(i - m, i, math.pi / (1 << m)))
    for i in range(n // 2):
        gates.extend(_swap3(i, n - 1 - i))
    return Circuit(n, gates)


def gen_tfim(n: int, steps: int, dt: float = 0.1) -> Circuit:
    """First-order Trotter evolution of the transverse-field Ising chain:
    per step, ZZ coupling on each nearest-neighbor pair then a transverse RX
    on every qubit (unit couplings)."""
    if n < 2:
        raise ValueError("tfim needs at least 2 qubits")
    gates: list[Gate] = []
    for _ in range(steps):
        for i in range(n - 1):
            gates.extend(_rzz(i, i + 1, 2.0 * dt))
        for q in range(n):
            gates.append(Gate(GateKind.RX, (q,), (2.0 * dt,)))
    return Circuit(n, gates)


def _qaoa_graph(n: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    """Connected near-3-regular graph: a ring plus random chords between
    degree-deficient vertices."""
    edges = {(i, (i + 1) % n) if i < (i + 1) % n else ((i + 1) % n, i) for i in range(n)}
    if n <= 3:
        return sorted(edges)
    deg = {q: 2 for q in range(n)}
    order = list(range(n))
    rng.shuffle(order)
    for i, a in enumerate(order):
        if deg[a] >= 3:
            continue
        for b in order[i + 1:]:
            key = (min(a, b), max(a, b))
            if b != a and deg[b] < 3 and key not in edges:
                edges.add(key)
                deg[a] += 1
                deg[b] += 1
                break
    return sorted(edges)


def gen_qaoa_maxcut(n: int, layers: int, graph_seed: int = 0) -> Circuit:
    """QAOA MaxCut ansatz: H layer, then per layer a ZZ phase per graph edge
    and an RX mixer on every qubit. Graph and angles are drawn from the seed."""
    if n < 2:
        raise ValueError("qaoa needs at least 2 qubits")
    rng = np.random.default_rng(graph_seed)
    edges = _qaoa_graph(n, rng)
    gates: list[Gate] = [Gate(GateKind.H, (q,)) for q in range(n)]
    for _ in range(layers):
        gamma = float(rng.uniform(0, 2 * math.pi))
        beta = float(rng.uniform(0, math.pi))
        for a, b in edges:
            gates.extend(_rzz(a, b, gamma))
        for q in range(n):
            gates.append(Gate(GateKind.RX, (q,), (2.0 * beta,)))
    return Circuit(n, gates)


def gen_adder(bits: int) -> Circuit:
    """In-place ripple-carry adder on 2*bits + 2 qubits.

    Register layout: qubit 0 is the carry-in, qubits 1..bits hold a, qubits
    bits+1..2*bits hold b, and the last qubit receives the carry-out. After
    the circuit, b holds (a + b + carry_in) mod 2^bits.
    """
    if bits < 1:
        raise ValueError("adder needs at least 1 bit")
    a = [1 + i for i in range(bits)]
    b = [1 + bits + i for i in range(bits)]
    cin = 0
    z = 2 * bits + 1
    carries = [cin] + a[:-1]

    gates: list[Gate] = []

    def maj(c, y, x):
        gates.append(Gate(GateKind.CNOT, (x, y)))
        gates.append(Gate(GateKind.CNOT, (x, c)))
        gates.extend(_toffoli(c, y, x))

    def uma(c, y, x):
        gates.extend(_toffoli(c, y, x))
        gates.append(Gate(GateKind.CNOT, (x, c)))
        gates.append(Gate(GateKind.CNOT, (c, y)))

    for i in range(bits):
        maj(carries[i], b[i], a[i])
    gates.append(Gate(GateKind.CNOT, (a[-1], z)))
    for i in range(bits - 1, -1, -1):
        uma(carries[i], b[i], a[i])
    return Circuit(2 * bits + 2, gates)
