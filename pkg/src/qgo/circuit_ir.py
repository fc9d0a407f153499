"""Circuit representation and OpenQASM 2.0 subset I/O.

Contains:
    - GateKind / Gate: the fixed internal gate set (CNOT + continuous
      single-qubit rotations, H, X)
    - Circuit: gate list over one qubit register plus a terminal
      measurement layer
    - DependencyDag: per-qubit last-writer dependency graph
    - parse_qasm / write_qasm: round-trip text I/O
    - merge_single_qubit_runs: peephole fusion of adjacent single-qubit
      gates into U3 (near-identity products are deleted)
"""
from __future__ import annotations

import ast
import math
import re
from dataclasses import dataclass, field
from enum import Enum

import numpy as np


class QasmError(ValueError):
    """Raised on malformed or unsupported OpenQASM input."""


class GateKind(Enum):
    RX = "rx"
    RY = "ry"
    RZ = "rz"
    U3 = "u3"
    H = "h"
    X = "x"
    CNOT = "cx"
    SWAP = "swap"
    MEASURE = "measure"
    BARRIER = "barrier"


_PARAM_ARITY = {
    GateKind.RX: 1,
    GateKind.RY: 1,
    GateKind.RZ: 1,
    GateKind.U3: 3,
}

_TWO_QUBIT = frozenset({GateKind.CNOT, GateKind.SWAP})

_SINGLE_QUBIT_UNITARY = frozenset(
    {GateKind.RX, GateKind.RY, GateKind.RZ, GateKind.U3, GateKind.H, GateKind.X}
)


@dataclass(frozen=True)
class Gate:
    """One gate application. A gate's index is its position in Circuit.gates."""

    kind: GateKind
    qubits: tuple[int, ...]
    params: tuple[float, ...] = ()

    def __post_init__(self):
        arity = 2 if self.kind in _TWO_QUBIT else 1
        if self.kind is not GateKind.BARRIER and len(self.qubits) != arity:
            raise ValueError(f"{self.kind.value} expects {arity} qubit(s), got {self.qubits}")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"duplicate qubit in {self.kind.value} {self.qubits}")
        want = _PARAM_ARITY.get(self.kind, 0)
        if len(self.params) != want:
            raise ValueError(f"{self.kind.value} expects {want} parameter(s), got {len(self.params)}")

    @property
    def is_two_qubit(self) -> bool:
        return self.kind in _TWO_QUBIT

    @property
    def is_single_qubit_unitary(self) -> bool:
        return self.kind in _SINGLE_QUBIT_UNITARY


@dataclass
class Circuit:
    """Ordered gate list over `num_qubits` qubits.

    Measurements are stored separately as (qubit, classical bit) pairs and are
    semantically a terminal layer: no unitary gate may act on a measured qubit.
    """

    num_qubits: int
    gates: list[Gate] = field(default_factory=list)
    measurements: list[tuple[int, int]] = field(default_factory=list)

    def validate(self) -> None:
        for i, g in enumerate(self.gates):
            for q in g.qubits:
                if not 0 <= q < self.num_qubits:
                    raise ValueError(f"gate {i} ({g.kind.value}) qubit {q} out of range")
        seen = set()
        for q, c in self.measurements:
            if not 0 <= q < self.num_qubits:
                raise ValueError(f"measurement qubit {q} out of range")
            if q in seen:
                raise ValueError(f"qubit {q} measured twice")
            seen.add(q)

    def cnot_count(self) -> int:
        return sum(1 for g in self.gates if g.kind is GateKind.CNOT)

    def two_qubit_gates(self) -> list[Gate]:
        return [g for g in self.gates if g.is_two_qubit]


@dataclass
class DependencyDag:
    """Gate dependency DAG: edge (a -> b on qubit q) when b is the next gate
    after a acting on q. `qubit_chains[q]` is the ordered gate index chain
    on qubit q; `gate_qubits[i]` caches gates[i].qubits.
    """

    num_gates: int
    preds: list[list[tuple[int, int]]]
    succs: list[list[tuple[int, int]]]
    frontier: list[int]
    qubit_chains: dict[int, list[int]]
    gate_qubits: list[tuple[int, ...]]


def build_dag(c: Circuit) -> DependencyDag:
    """Build the dependency DAG of a circuit (measurements excluded)."""
    n = len(c.gates)
    preds: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    succs: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    chains: dict[int, list[int]] = {}
    last: dict[int, int] = {}
    for i, g in enumerate(c.gates):
        for q in g.qubits:
            chains.setdefault(q, []).append(i)
            if q in last:
                preds[i].append((last[q], q))
                succs[last[q]].append((i, q))
            last[q] = i
    frontier = [i for i in range(n) if not preds[i]]
    return DependencyDag(
        num_gates=n,
        preds=preds,
        succs=succs,
        frontier=frontier,
        qubit_chains=chains,
        gate_qubits=[g.qubits for g in c.gates],
    )


# --- OpenQASM 2.0 subset -------------------------------------------------

_ALLOWED_AST = (
    ast.Expression, ast.BinOp, ast.UnaryOp, ast.Constant, ast.Name, ast.Load,
    ast.Add, ast.Sub, ast.Mult, ast.Div, ast.USub, ast.UAdd,
)


def _eval_angle(text: str, line_no: int) -> float:
    """Evaluate a QASM angle expression (numbers, pi, + - * /, parentheses)."""
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError:
        raise QasmError(f"line {line_no}: bad angle expression '{text}'") from None
    for node in ast.walk(tree):
        if not isinstance(node, _ALLOWED_AST):
            raise QasmError(f"line {line_no}: bad angle expression '{text}'")
        if isinstance(node, ast.Name) and node.id != "pi":
            raise QasmError(f"line {line_no}: unknown symbol '{node.id}' in angle")
        if isinstance(node, ast.Constant) and not isinstance(node.value, (int, float)):
            raise QasmError(f"line {line_no}: bad angle expression '{text}'")
    return float(eval(compile(tree, "<angle>", "eval"), {"__builtins__": {}}, {"pi": math.pi}))


_QREG_RE = re.compile(r"^qreg\s+(\w+)\s*\[\s*(\d+)\s*\]$")
_CREG_RE = re.compile(r"^creg\s+(\w+)\s*\[\s*(\d+)\s*\]$")
_MEASURE_RE = re.compile(r"^measure\s+(\w+)\s*\[\s*(\d+)\s*\]\s*->\s*(\w+)\s*\[\s*(\d+)\s*\]$")
_GATE_RE = re.compile(r"^(\w+)\s*(\(([^)]*)\))?\s*(.*)$")
_OPERAND_RE = re.compile(r"^(\w+)\s*\[\s*(\d+)\s*\]$")


def parse_qasm(text: str) -> Circuit:
    """Parse the supported OpenQASM 2.0 subset into a Circuit.

    One qreg and at most one creg. Gate set: cx, swap, h, x, rx, ry, rz,
    u3/u, plus aliases rewritten on input (cz, z, s, sdg, t, tdg, u1, p, u2,
    id). Barriers are dropped. Unsupported statements raise QasmError naming
    the line and token.
    """
    qreg: tuple[str, int] | None = None
    creg: tuple[str, int] | None = None
    gates: list[Gate] = []
    measurements: list[tuple[int, int]] = []
    measured: set[int] = set()

    def qubit_of(operand: str, line_no: int) -> int:
        m = _OPERAND_RE.match(operand.strip())
        if qreg is None:
            raise QasmError(f"line {line_no}: gate before qreg declaration")
        if not m or m.group(1) != qreg[0]:
            raise QasmError(f"line {line_no}: bad qubit operand '{operand}'")
        idx = int(m.group(2))
        if idx >= qreg[1]:
            raise QasmError(f"line {line_no}: qubit index {idx} out of range")
        return idx

    def emit(kind: GateKind, qubits: tuple[int, ...], params: tuple[float, ...], line_no: int):
        for q in qubits:
            if q in measured:
                raise QasmError(f"line {line_no}: gate after measurement on qubit {q}")
        try:
            gates.append(Gate(kind, qubits, params))
        except ValueError as exc:
            raise QasmError(f"line {line_no}: {exc}") from None

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("//", 1)[0]
        for stmt in line.split(";"):
            stmt = stmt.strip()
            if not stmt:
                continue
            if stmt.startswith("OPENQASM") or stmt.startswith("include"):
                continue
            m = _QREG_RE.match(stmt)
            if m:
                if qreg is not None:
                    raise QasmError(f"line {line_no}: multiple qreg declarations")
                qreg = (m.group(1), int(m.group(2)))
                continue
            m = _CREG_RE.match(stmt)
            if m:
                if creg is not None:
                    raise QasmError(f"line {line_no}: multiple creg declarations")
                creg = (m.group(1), int(m.group(2)))
                continue
            m = _MEASURE_RE.match(stmt)
            if m:
                if qreg is None or m.group(1) != qreg[0]:
                    raise QasmError(f"line {line_no}: bad measure target")
                if creg is None or m.group(3) != creg[0]:
                    raise QasmError(f"line {line_no}: measure into undeclared creg")
                q, c = int(m.group(2)), int(m.group(4))
                if q >= qreg[1] or c >= creg[1]:
                    raise QasmError(f"line {line_no}: measure index out of range")
                if q in measured:
                    raise QasmError(f"line {line_no}: qubit {q} measured twice")
                measured.add(q)
                measurements.append((q, c))
                continue
            m = _GATE_RE.match(stmt)
            if not m:
                raise QasmError(f"line {line_no}: cannot parse statement '{stmt}'")
            name = m.group(1)
            params = tuple(
                _eval_angle(p, line_no) for p in m.group(3).split(",")
            ) if m.group(3) else ()
            operands = [o for o in m.group(4).split(",") if o.strip()]
            if name == "barrier":
                continue
            qubits = tuple(qubit_of(o, line_no) for o in operands)
            _emit_named_gate(name, qubits, params, line_no, emit)

    if qreg is None:
        raise QasmError("no qreg declaration found")
    return Circuit(num_qubits=qreg[1], gates=gates, measurements=measurements)


def _emit_named_gate(name, qubits, params, line_no, emit):
    def check(nq, np_):
        if len(qubits) != nq:
            raise QasmError(f"line {line_no}: {name} expects {nq} qubit(s)")
        if len(params) != np_:
            raise QasmError(f"line {line_no}: {name} expects {np_} parameter(s)")

    pi = math.pi
    if name in ("rx", "ry", "rz"):
        check(1, 1)
        emit(GateKind(name), qubits, params, line_no)
    elif name in ("u3", "u"):
        check(1, 3)
        emit(GateKind.U3, qubits, params, line_no)
    elif name == "u2":
        check(1, 2)
        emit(GateKind.U3, qubits, (pi / 2, params[0], params[1]), line_no)
    elif name in ("u1", "p"):
        check(1, 1)
        emit(GateKind.RZ, qubits, params, line_no)
    elif name == "h":
        check(1, 0)
        emit(GateKind.H, qubits, (), line_no)
    elif name == "x":
        check(1, 0)
        emit(GateKind.X, qubits, (), line_no)
    elif name == "z":
        check(1, 0)
        emit(GateKind.RZ, qubits, (pi,), line_no)
    elif name == "s":
        check(1, 0)
        emit(GateKind.RZ, qubits, (pi / 2,), line_no)
    elif name == "sdg":
        check(1, 0)
        emit(GateKind.RZ, qubits, (-pi / 2,), line_no)
    elif name == "t":
        check(1, 0)
        emit(GateKind.RZ, qubits, (pi / 4,), line_no)
    elif name == "tdg":
        check(1, 0)
        emit(GateKind.RZ, qubits, (-pi / 4,), line_no)
    elif name == "id":
        check(1, 0)
    elif name == "cx":
        check(2, 0)
        emit(GateKind.CNOT, qubits, (), line_no)
    elif name == "cz":
        check(2, 0)
        emit(GateKind.H, (qubits[1],), (), line_no)
        emit(GateKind.CNOT, qubits, (), line_no)
        emit(GateKind.H, (qubits[1],), (), line_no)
    elif name == "swap":
        check(2, 0)
        emit(GateKind.SWAP, qubits, (), line_no)
    else:
        raise QasmError(f"line {line_no}: unsupported gate '{name}'")


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def write_qasm(c: Circuit) -> str:
    """Serialize a Circuit; parse_qasm(write_qasm(c)) == c gate-for-gate."""
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{c.num_qubits}];"]
    if c.measurements:
        nbits = max(b for _, b in c.measurements) + 1
        lines.append(f"creg c[{nbits}];")
    for g in c.gates:
        name = g.kind.value
        args = f"({','.join(_fmt(p) for p in g.params)})" if g.params else ""
        operands = ",".join(f"q[{q}]" for q in g.qubits)
        lines.append(f"{name}{args} {operands};")
    for q, b in c.measurements:
        lines.append(f"measure q[{q}] -> c[{b}];")
    return "\n".join(lines) + "\n"


# --- single-qubit gate fusion --------------------------------------------

IDENTITY_TOLERANCE = 1e-12


def _u3_angles(u: np.ndarray) -> tuple[float, float, float]:
    """Extract (theta, phi, lam) with U3(theta, phi, lam) ~ u up to global phase."""
    a = abs(u[0, 0])
    b = abs(u[1, 0])
    theta = 2.0 * math.atan2(b, a)
    if b <= 1e-14:  # diagonal: only phi+lam matters
        phase = np.angle(u[1, 1]) - np.angle(u[0, 0])
        return 0.0, 0.0, float(phase)
    if a <= 1e-14:  # anti-diagonal
        return math.pi, float(np.angle(u[1, 0])), float(np.angle(-u[0, 1]))
    g = np.angle(u[0, 0])
    phi = float(np.angle(u[1, 0]) - g)
    lam = float(np.angle(-u[0, 1]) - g)
    return theta, phi, lam


def merge_single_qubit_runs(c: Circuit) -> Circuit:
    """Fuse each maximal run of single-qubit gates on one qubit into one U3.

    Runs whose product is the identity up to global phase (within
    IDENTITY_TOLERANCE of trace distance) are deleted. The circuit unitary is
    unchanged up to global phase; two-qubit gates are untouched.
    """
    from . import simcore

    pending: dict[int, tuple[np.ndarray, list[Gate]]] = {}
    out: list[Gate] = []

    def flush(q: int):
        entry = pending.pop(q, None)
        if entry is None:
            return
        u, run = entry
        if 1.0 - abs(np.trace(u)) / 2.0 <= IDENTITY_TOLERANCE:
            return
        if len(run) == 1:  # nothing to fuse; keep verbatim (exact idempotence)
            out.append(run[0])
            return
        theta, phi, lam = _u3_angles(u)
        out.append(Gate(GateKind.U3, (q,), (theta, phi, lam)))

    for g in c.gates:
        if g.is_single_qubit_unitary:
            q = g.qubits[0]
            m = simcore.gate_matrix(g)
            if q in pending:
                u, run = pending[q]
                pending[q] = (m @ u, run + [g])
            else:
                pending[q] = (m, [g])
        else:
            for q in sorted(g.qubits):
                flush(q)
            out.append(g)
    for q in sorted(pending.keys()):
        flush(q)
    return Circuit(num_qubits=c.num_qubits, gates=out, measurements=list(c.measurements))
