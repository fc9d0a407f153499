"""Evaluation metrics: total variation distance, Monte-Carlo depolarizing
noise sampling, and the multiplicative success-rate model.

The two-qubit depolarizing channel is realized by stochastic Pauli insertion:
after each CNOT, with the configured probability, one of the 15 non-identity
two-qubit Paulis is applied uniformly at random. This unravels the channel
exactly while keeping the simulator pure-state.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit_ir import Circuit, GateKind
from .simcore import _apply_gate, _apply_on_axes, simulate

_PAULI_1Q = [
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
]
_I2 = np.eye(2, dtype=complex)
# 15 non-identity two-qubit Paulis, (first qubit, second qubit) factors
_PAULI_2Q = [
    (p, q)
    for p in [_I2] + _PAULI_1Q
    for q in [_I2] + _PAULI_1Q
][1:]


@dataclass(frozen=True)
class NoiseSpec:
    """Per-gate depolarizing error probabilities."""

    two_qubit_error_p: float
    single_qubit_error_p: float = 0.0

    def __post_init__(self):
        for p in (self.two_qubit_error_p, self.single_qubit_error_p):
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"error probability {p} outside [0, 1]")


def tvd(p: dict[str, float], q: dict[str, float]) -> float:
    """Total variation distance: half the L1 distance over the union support."""
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)


def success_rate(c: Circuit, noise: NoiseSpec) -> float:
    """Product of per-gate success probabilities (worst-case fidelity model)."""
    rate = 1.0
    for g in c.gates:
        rate *= (1.0 - noise.two_qubit_error_p) if g.is_two_qubit else (
            1.0 - noise.single_qubit_error_p
        )
    return rate


def ideal_distribution(c: Circuit) -> dict[str, float]:
    """Exact Born probabilities of measuring all qubits, zero-state input."""
    probs = np.abs(simulate(c)) ** 2
    n = c.num_qubits
    return {
        format(i, f"0{n}b"): float(p)
        for i, p in enumerate(probs)
        if p > 1e-18
    }


def sample_noisy(c: Circuit, noise: NoiseSpec, shots: int, seed: int = 0) -> dict[str, float]:
    """Monte-Carlo sampling under stochastic Pauli noise.

    Per shot: run the circuit, inserting a random non-identity two-qubit
    Pauli after each CNOT with probability two_qubit_error_p (and a random
    single-qubit Pauli after single-qubit gates when single_qubit_error_p is
    nonzero); measure all qubits in the computational basis. Per-shot RNG is
    seeded from (seed, shot index), so aggregation is order-independent.
    """
    if shots <= 0:
        raise ValueError("shots must be positive")
    n = c.num_qubits
    p2 = noise.two_qubit_error_p
    p1 = noise.single_qubit_error_p

    clean = simulate(c)
    clean_cum = np.cumsum(np.abs(clean) ** 2)
    pos = {q: q for q in range(n)}

    counts: dict[str, int] = {}
    for shot in range(shots):
        rng = np.random.default_rng(np.random.SeedSequence((seed, shot)))
        # decide error insertions up front; error-free shots reuse the
        # cached noiseless state
        insertions: dict[int, int] = {}
        for i, g in enumerate(c.gates):
            if g.kind is GateKind.CNOT:
                if p2 > 0.0 and rng.random() < p2:
                    insertions[i] = int(rng.integers(15))
            elif g.is_single_qubit_unitary:
                if p1 > 0.0 and rng.random() < p1:
                    insertions[i] = int(rng.integers(3))
        if insertions:
            t = np.zeros(1 << n, dtype=complex)
            t[0] = 1.0
            t = t.reshape((2,) * n)
            for i, g in enumerate(c.gates):
                t = _apply_gate(t, g, pos, n)
                if i in insertions:
                    if g.kind is GateKind.CNOT:
                        pa, pb = _PAULI_2Q[insertions[i]]
                        a, b = g.qubits
                        t = _apply_on_axes(t, pa, (n - 1 - a,))
                        t = _apply_on_axes(t, pb, (n - 1 - b,))
                    else:
                        pm = _PAULI_1Q[insertions[i]]
                        t = _apply_on_axes(t, pm, (n - 1 - g.qubits[0],))
            cum = np.cumsum(np.abs(t.reshape(-1)) ** 2)
        else:
            cum = clean_cum
        idx = int(np.searchsorted(cum, rng.random() * cum[-1], side="right"))
        idx = min(idx, (1 << n) - 1)
        key = format(idx, f"0{n}b")
        counts[key] = counts.get(key, 0) + 1

    return {k: v / shots for k, v in sorted(counts.items())}
