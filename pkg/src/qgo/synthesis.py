"""Search-based numerical synthesis of block unitaries.

Best-first search over CNOT placement templates: the root template has no
CNOTs, successors append one CNOT on an allowed directed edge of the group's
induced subgraph, and every template is scored by numerically optimizing its
parameterized single-qubit gates against the target. The first template whose
optimized distance reaches the threshold wins; budgets bound CNOT count and
compute time.
"""
from __future__ import annotations

import hashlib
import heapq
import math
import time
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.optimize import minimize

from .circuit_ir import Circuit, Gate, GateKind
from .simcore import circuit_unitary, distance, gates_unitary
from .topology import QubitGroup, Topology

FD_STEP = 1e-7
GRAD_TOL = 1e-10
MAX_ITER = 400
RESTARTS = 8


def derive_seed(*parts: int) -> int:
    """Stable seed derivation (independent of PYTHONHASHSEED and platform)."""
    digest = hashlib.blake2b(",".join(str(p) for p in parts).encode(), digest_size=8)
    return int.from_bytes(digest.digest(), "big")


class SynthesisStatus(Enum):
    SOLVED = "Solved"
    FELL_BACK_TO_ORIGINAL = "FellBackToOriginal"
    BUDGET_EXCEEDED = "BudgetExceeded"


@dataclass(frozen=True)
class Template:
    """CNOT placement sequence on k local qubits, with one 3-parameter
    single-qubit gate per qubit up front and two more (one per endpoint)
    after each CNOT. Parameter count: 3k + 6 * len(cnot_sequence)."""

    num_qubits: int
    cnot_sequence: tuple[tuple[int, int], ...]

    @property
    def param_count(self) -> int:
        return 3 * self.num_qubits + 6 * len(self.cnot_sequence)


@dataclass
class SynthesisResult:
    circuit: Circuit
    achieved_distance: float
    cnot_count: int
    status: SynthesisStatus


def instantiate(tpl: Template, params: np.ndarray) -> Circuit:
    """Realize a template: parameter slots become U3 gates, CNOTs at the
    template positions."""
    params = np.asarray(params, dtype=float)
    if params.shape != (tpl.param_count,):
        raise ValueError(f"expected {tpl.param_count} parameters, got {params.shape}")
    k = tpl.num_qubits
    gates: list[Gate] = []
    p = 0
    for q in range(k):
        gates.append(Gate(GateKind.U3, (q,), tuple(params[p:p + 3])))
        p += 3
    for ctl, tgt in tpl.cnot_sequence:
        gates.append(Gate(GateKind.CNOT, (ctl, tgt)))
        gates.append(Gate(GateKind.U3, (ctl,), tuple(params[p:p + 3])))
        gates.append(Gate(GateKind.U3, (tgt,), tuple(params[p + 3:p + 6])))
        p += 6
    return Circuit(num_qubits=k, gates=gates)


_CNOT_EMBED_CACHE: dict[tuple[int, int, int], np.ndarray] = {}


def _embedded_cnot(k: int, ctl: int, tgt: int) -> np.ndarray:
    key = (k, ctl, tgt)
    if key not in _CNOT_EMBED_CACHE:
        gate = Gate(GateKind.CNOT, (ctl, tgt))
        _CNOT_EMBED_CACHE[key] = gates_unitary([gate], tuple(range(k)))
    return _CNOT_EMBED_CACHE[key]


class _TemplateEvaluator:
    """Batched circuit-unitary builder and distance objective for one
    template/target pair. Batching makes finite-difference gradients cheap."""

    def __init__(self, tpl: Template, target: np.ndarray):
        self.k = tpl.num_qubits
        self.dim = 1 << self.k
        self.tpl = tpl
        self.target = np.asarray(target, dtype=complex)
        self.cnots = [_embedded_cnot(self.k, c, t) for c, t in tpl.cnot_sequence]

    def _u3_batch(self, params: np.ndarray) -> np.ndarray:
        b = params.shape[0]
        p3 = params.reshape(b, -1, 3)
        th, ph, lm = p3[..., 0], p3[..., 1], p3[..., 2]
        ct, st = np.cos(th / 2), np.sin(th / 2)
        u = np.empty(p3.shape[:2] + (2, 2), dtype=complex)
        u[..., 0, 0] = ct
        u[..., 0, 1] = -np.exp(1j * lm) * st
        u[..., 1, 0] = np.exp(1j * ph) * st
        u[..., 1, 1] = np.exp(1j * (ph + lm)) * ct
        return u

    def _apply_u3(self, u: np.ndarray, u2: np.ndarray, qubit: int) -> np.ndarray:
        """Left-multiply a batched 2x2 gate onto u (B,dim,dim) at a row axis."""
        b = u.shape[0]
        hi = 1 << (self.k - 1 - qubit)
        ur = u.reshape(b, hi, 2, -1)
        out = np.einsum("bij,bajc->baic", u2, ur)
        return out.reshape(b, self.dim, self.dim)

    def unitary_batch(self, params: np.ndarray) -> np.ndarray:
        params = np.atleast_2d(np.asarray(params, dtype=float))
        u3 = self._u3_batch(params)
        b = params.shape[0]
        # initial layer: kron over qubits, most significant first
        full = u3[:, self.k - 1]
        for q in range(self.k - 2, -1, -1):
            m = full.shape[1]
            full = np.einsum("bij,bkl->bikjl", full, u3[:, q]).reshape(b, 2 * m, 2 * m)
        s = self.k
        for i, (ctl, tgt) in enumerate(self.tpl.cnot_sequence):
            full = np.matmul(self.cnots[i], full)
            full = self._apply_u3(full, u3[:, s], ctl)
            full = self._apply_u3(full, u3[:, s + 1], tgt)
            s += 2
        return full

    def objective_batch(self, params: np.ndarray) -> np.ndarray:
        u = self.unitary_batch(params)
        tr = np.einsum("bij,ij->b", u.conj(), self.target)
        return 1.0 - np.abs(tr) / self.dim

    def objective(self, params: np.ndarray) -> float:
        return float(self.objective_batch(params[None, :])[0])

    def gradient(self, params: np.ndarray) -> np.ndarray:
        p = params.shape[0]
        x = np.repeat(params[None, :], 2 * p, axis=0)
        idx = np.arange(p)
        x[idx, idx] += FD_STEP
        x[p + idx, idx] -= FD_STEP
        f = self.objective_batch(x)
        return (f[:p] - f[p:]) / (2 * FD_STEP)


def optimize_params(
    tpl: Template,
    target: np.ndarray,
    seed: int,
    stop_below: float | None = None,
) -> tuple[np.ndarray, float]:
    """Fit template parameters to the target unitary.

    Multi-start quasi-Newton descent: the first start is all-zeros, the rest
    are drawn uniformly from [-pi, pi); gradients are central finite
    differences (step FD_STEP), stopping at gradient norm GRAD_TOL or
    MAX_ITER iterations. Returns the best (params, distance) over all starts;
    if `stop_below` is given, remaining starts are skipped once reached.
    """
    ev = _TemplateEvaluator(tpl, target)
    rng = np.random.default_rng(seed)
    best_x: np.ndarray | None = None
    best_d = math.inf
    for r in range(RESTARTS):
        x0 = np.zeros(tpl.param_count) if r == 0 else rng.uniform(-math.pi, math.pi, tpl.param_count)
        res = minimize(
            ev.objective,
            x0,
            jac=ev.gradient,
            method="BFGS",
            options={"gtol": GRAD_TOL, "maxiter": MAX_ITER},
        )
        if res.fun < best_d:
            best_d = float(res.fun)
            best_x = np.asarray(res.x, dtype=float)
        if stop_below is not None and best_d <= stop_below:
            break
    assert best_x is not None
    return best_x, best_d


def synthesize(
    target: np.ndarray,
    group: QubitGroup,
    t: Topology,
    *,
    threshold: float = 1e-10,
    cnot_budget: int | None = None,
    time_budget: float = 60.0,
    seed: int = 0,
) -> SynthesisResult:
    """Find a topology-respecting circuit for `target` on the group's qubits.

    Best-first over templates ordered by (optimized distance, CNOT count,
    insertion order). Returns the first template reaching the threshold;
    exhausting the CNOT or time budget yields status BUDGET_EXCEEDED with the
    best circuit found. The time budget is charged in CPU seconds of the
    calling process so that worker-pool contention does not change results.
    """
    k = len(group)
    dim = 1 << k
    target = np.asarray(target, dtype=complex)
    if target.shape != (dim, dim):
        raise ValueError(f"target shape {target.shape} does not match group size {k}")
    local = {q: i for i, q in enumerate(group.qubits)}
    edges: list[tuple[int, int]] = []
    for a, b in sorted(t.edges):
        if a in local and b in local:
            edges += [(local[a], local[b]), (local[b], local[a])]
    edges.sort()

    start = time.process_time()

    def over_time() -> bool:
        return time.process_time() - start > time_budget

    def make_result(tpl, params, dist_val, status):
        return SynthesisResult(
            circuit=instantiate(tpl, params),
            achieved_distance=dist_val,
            cnot_count=len(tpl.cnot_sequence),
            status=status,
        )

    root = Template(k, ())
    if cnot_budget is not None and cnot_budget < 0:
        zeros = np.zeros(root.param_count)
        d0 = distance(circuit_unitary(instantiate(root, zeros)), target)
        return make_result(root, zeros, d0, SynthesisStatus.BUDGET_EXCEEDED)

    counter = 0
    params0, d0 = optimize_params(root, target, derive_seed(seed, 0), stop_below=threshold)
    heap: list[tuple[float, int, int]] = [(d0, 0, 0)]
    payload: dict[int, tuple[Template, np.ndarray]] = {0: (root, params0)}
    visited: set[tuple[tuple[int, int], ...]] = {()}
    best_key = (d0, 0, 0)
    best_node = (root, params0)

    while heap:
        d, ncx, order = heapq.heappop(heap)
        tpl, params = payload.pop(order)
        if d <= threshold:
            result = make_result(tpl, params, d, SynthesisStatus.SOLVED)
            checked = distance(circuit_unitary(result.circuit), target)
            if checked > threshold:
                raise RuntimeError(f"synthesis verification failed: {checked} > {threshold}")
            result.achieved_distance = checked
            return result
        if over_time():
            break
        if cnot_budget is not None and ncx + 1 > cnot_budget:
            continue
        last = tpl.cnot_sequence[-1] if tpl.cnot_sequence else None
        for e in edges:
            if e == last:
                continue
            seq = tpl.cnot_sequence + (e,)
            if seq in visited:
                continue
            visited.add(seq)
            counter += 1
            child = Template(k, seq)
            cparams, cd = optimize_params(
                child, target, derive_seed(seed, counter), stop_below=threshold
            )
            key = (cd, len(seq), counter)
            heapq.heappush(heap, key)
            payload[counter] = (child, cparams)
            if key < best_key:
                best_key = key
                best_node = (child, cparams)
            if over_time():
                break  # next pop still returns a solved node if one exists

    tpl, params = best_node
    return make_result(tpl, params, best_key[0], SynthesisStatus.BUDGET_EXCEEDED)
