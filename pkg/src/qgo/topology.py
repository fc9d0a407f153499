"""Device connectivity representation and connected qubit-group enumeration."""
from __future__ import annotations

import json
import re
from dataclasses import dataclass


@dataclass(frozen=True)
class Topology:
    """Undirected connectivity graph over physical qubits."""

    num_qubits: int
    edges: frozenset[tuple[int, int]]  # each pair stored sorted

    def __post_init__(self):
        for a, b in self.edges:
            if a == b:
                raise ValueError(f"self-loop on qubit {a}")
            if not (0 <= a < self.num_qubits and 0 <= b < self.num_qubits):
                raise ValueError(f"edge ({a},{b}) out of range for {self.num_qubits} qubits")
            if a > b:
                raise ValueError(f"edge ({a},{b}) not stored sorted")

    @property
    def adjacency(self) -> dict[int, set[int]]:
        adj: dict[int, set[int]] = {q: set() for q in range(self.num_qubits)}
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def has_edge(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self.edges

    def components(self) -> list[set[int]]:
        adj = self.adjacency
        seen: set[int] = set()
        comps = []
        for start in range(self.num_qubits):
            if start in seen:
                continue
            comp = {start}
            stack = [start]
            while stack:
                v = stack.pop()
                for w in adj[v]:
                    if w not in comp:
                        comp.add(w)
                        stack.append(w)
            seen |= comp
            comps.append(comp)
        return comps


@dataclass(frozen=True)
class QubitGroup:
    """A sorted set of k qubits hosting one circuit block."""

    qubits: tuple[int, ...]

    def __post_init__(self):
        if tuple(sorted(set(self.qubits))) != self.qubits:
            raise ValueError(f"group {self.qubits} must be sorted and duplicate-free")

    def __len__(self) -> int:
        return len(self.qubits)

    def __contains__(self, q: int) -> bool:
        return q in self.qubits


def make_line(n: int) -> Topology:
    return Topology(n, frozenset((i, i + 1) for i in range(n - 1)))


def make_grid(rows: int, cols: int) -> Topology:
    """Row-major grid: qubit (r, c) has index r*cols + c."""
    edges = set()
    for r in range(rows):
        for c in range(cols):
            q = r * cols + c
            if c + 1 < cols:
                edges.add((q, q + 1))
            if r + 1 < rows:
                edges.add((q, q + cols))
    return Topology(rows * cols, frozenset(edges))


_LINE_RE = re.compile(r"^line-(\d+)$")
_GRID_RE = re.compile(r"^grid-(\d+)x(\d+)$")


def load_topology(spec: str) -> Topology:
    """Parse a topology spec: `line-N`, `grid-RxC`, or a JSON document
    {"num_qubits": n, "edges": [[a, b], ...]}.
    """
    spec = spec.strip()
    m = _LINE_RE.match(spec)
    if m:
        n = int(m.group(1))
        if n < 1:
            raise ValueError("line topology needs at least 1 qubit")
        return make_line(n)
    m = _GRID_RE.match(spec)
    if m:
        r, c = int(m.group(1)), int(m.group(2))
        if r < 1 or c < 1:
            raise ValueError("grid dimensions must be positive")
        return make_grid(r, c)
    if spec.startswith("{"):
        try:
            doc = json.loads(spec)
        except json.JSONDecodeError as exc:
            raise ValueError(f"malformed topology JSON: {exc}") from None
        if not isinstance(doc, dict) or "num_qubits" not in doc or "edges" not in doc:
            raise ValueError("topology JSON needs 'num_qubits' and 'edges'")
        n = int(doc["num_qubits"])
        edges = set()
        for pair in doc["edges"]:
            if len(pair) != 2:
                raise ValueError(f"bad edge {pair}")
            a, b = int(pair[0]), int(pair[1])
            key = (min(a, b), max(a, b))
            if key in edges:
                raise ValueError(f"duplicate edge {pair}")
            edges.add(key)
        return Topology(n, frozenset(edges))
    raise ValueError(f"unrecognized topology spec '{spec}'")


def is_valid_group(t: Topology, qubits) -> bool:
    """True iff the induced subgraph on `qubits` is connected."""
    qs = set(qubits)
    if not qs:
        return False
    for q in qs:
        if not 0 <= q < t.num_qubits:
            raise ValueError(f"qubit {q} out of range")
    adj = t.adjacency
    start = next(iter(qs))
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w in qs and w not in seen:
                seen.add(w)
                stack.append(w)
    return seen == qs


def enumerate_valid_groups(t: Topology, k: int) -> list[QubitGroup]:
    """All connected k-qubit groups, each exactly once, in lexicographic order.

    Uses anchored expansion (every subset is grown from its minimum vertex),
    so cost scales with the number of connected subsets rather than C(n, k).
    """
    if not 2 <= k <= 5:
        raise ValueError(f"group size {k} outside supported range 2..5")
    adj = t.adjacency
    found: list[tuple[int, ...]] = []

    def extend(sub: set[int], ext: list[int], anchor: int):
        if len(sub) == k:
            found.append(tuple(sorted(sub)))
            return
        ext = list(ext)
        while ext:
            w = ext.pop(0)
            closed = sub | {u for v in sub for u in adj[v]}
            new_ext = ext + [u for u in sorted(adj[w]) if u > anchor and u not in closed]
            extend(sub | {w}, new_ext, anchor)

    for v in range(t.num_qubits):
        extend({v}, sorted(u for u in adj[v] if u > v), v)
    return [QubitGroup(q) for q in sorted(found)]
