"""Dense unitary and statevector kernel.

Axis convention (fixed globally): within a block, the qubit at sorted
position 0 of the qubit group is the least-significant bit of the basis
index. gate_matrix(CNOT) is control-major: basis index = 2*control + target.
"""
from __future__ import annotations

import math

import numpy as np

from .circuit_ir import Circuit, Gate, GateKind

_H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)
_SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
)

MAX_SIM_QUBITS = 20


def u3_matrix(theta: float, phi: float, lam: float) -> np.ndarray:
    ct, st = math.cos(theta / 2), math.sin(theta / 2)
    return np.array(
        [
            [ct, -np.exp(1j * lam) * st],
            [np.exp(1j * phi) * st, np.exp(1j * (phi + lam)) * ct],
        ],
        dtype=complex,
    )


def gate_matrix(g: Gate) -> np.ndarray:
    """Dense matrix of a unitary gate (2x2, or 4x4 control-major)."""
    k = g.kind
    if k is GateKind.RX:
        (t,) = g.params
        c, s = math.cos(t / 2), math.sin(t / 2)
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
    if k is GateKind.RY:
        (t,) = g.params
        c, s = math.cos(t / 2), math.sin(t / 2)
        return np.array([[c, -s], [s, c]], dtype=complex)
    if k is GateKind.RZ:
        (t,) = g.params
        return np.array([[np.exp(-1j * t / 2), 0], [0, np.exp(1j * t / 2)]], dtype=complex)
    if k is GateKind.U3:
        return u3_matrix(*g.params)
    if k is GateKind.H:
        return _H.copy()
    if k is GateKind.X:
        return _X.copy()
    if k is GateKind.CNOT:
        return _CNOT.copy()
    if k is GateKind.SWAP:
        return _SWAP.copy()
    raise ValueError(f"{k.value} has no unitary matrix")


def _apply_on_axes(tensor: np.ndarray, mat: np.ndarray, axes: tuple[int, ...]) -> np.ndarray:
    """Apply mat (2^m x 2^m) on the given tensor axes (each of size 2)."""
    m = len(axes)
    matr = mat.reshape((2,) * (2 * m))
    moved = np.tensordot(matr, tensor, axes=(tuple(range(m, 2 * m)), axes))
    return np.moveaxis(moved, tuple(range(m)), axes)


def _apply_gate(tensor: np.ndarray, g: Gate, positions: dict[int, int], num_axes: int) -> np.ndarray:
    axes = tuple(num_axes - 1 - positions[q] for q in g.qubits)
    return _apply_on_axes(tensor, gate_matrix(g), axes)


def block_unitary(block, source: Circuit) -> np.ndarray:
    """Unitary of a partitioned block, embedded on its (sorted) qubit group."""
    group = tuple(block.group.qubits)
    gates = [source.gates[i] for i in block.gates]
    return gates_unitary(gates, group)


def gates_unitary(gates: list[Gate], qubits: tuple[int, ...]) -> np.ndarray:
    """Product of gate matrices over the given sorted qubit tuple, circuit order."""
    k = len(qubits)
    pos = {q: i for i, q in enumerate(qubits)}
    dim = 1 << k
    u = np.eye(dim, dtype=complex).reshape((2,) * k + (dim,))
    for g in gates:
        u = _apply_gate(u, g, pos, k)
    return u.reshape(dim, dim)


def circuit_unitary(c: Circuit) -> np.ndarray:
    """Full-circuit unitary (intended for small n; dim = 2^num_qubits)."""
    return gates_unitary(c.gates, tuple(range(c.num_qubits)))


def distance(u: np.ndarray, v: np.ndarray) -> float:
    """Phase-invariant process-infidelity-style distance: 1 - |Tr(U^dag V)| / dim."""
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    dim = u.shape[0]
    return max(0.0, 1.0 - abs(np.vdot(u, v)) / dim)


def zero_state(n: int) -> np.ndarray:
    s = np.zeros(1 << n, dtype=complex)
    s[0] = 1.0
    return s


def random_state(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(1 << n) + 1j * rng.standard_normal(1 << n)
    return v / np.linalg.norm(v)


def simulate(c: Circuit, state: np.ndarray | None = None) -> np.ndarray:
    """Apply every unitary gate of c to a statevector (measurements ignored)."""
    if c.num_qubits > MAX_SIM_QUBITS:
        raise ValueError(f"{c.num_qubits} qubits exceeds simulation guard ({MAX_SIM_QUBITS})")
    n = c.num_qubits
    if state is None:
        state = zero_state(n)
    if state.shape != (1 << n,):
        raise ValueError(f"state length {state.shape} does not match {n} qubits")
    pos = {q: q for q in range(n)}
    t = np.asarray(state, dtype=complex).reshape((2,) * n)
    for g in c.gates:
        t = _apply_gate(t, g, pos, n)
    return t.reshape(-1)


def state_infidelity(a: np.ndarray, b: np.ndarray) -> float:
    """1 - |<a|b>|^2 for normalized statevectors."""
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape} vs {b.shape}")
    return max(0.0, 1.0 - abs(np.vdot(a, b)) ** 2)
