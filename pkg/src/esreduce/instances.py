"""Interaction graphs and Heisenberg / Hubbard problem instances.

Vertices are 1-indexed everywhere a user can see them (files, edge tuples);
code that needs array offsets subtracts one locally.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

from .errors import ParseError, ValidationError

REL_TOL = 1e-12

Edge = tuple[int, int, float]


@dataclass(frozen=True)
class WeightedGraph:
    n: int
    edges: tuple[Edge, ...]
    d: int

    def __post_init__(self):
        object.__setattr__(
            self, "edges", tuple((int(i), int(j), float(w)) for i, j, w in self.edges)
        )
        if self.n < 1:
            raise ValidationError(f"vertex count must be positive, got {self.n}")
        seen = set()
        for i, j, _ in self.edges:
            if not 1 <= i < j <= self.n:
                raise ValidationError(f"edge ({i}, {j}) violates 1 <= i < j <= n={self.n}")
            if (i, j) in seen:
                raise ValidationError(f"duplicate edge ({i}, {j})")
            seen.add((i, j))
        if self.d < 1:
            raise ValidationError(f"degree bound must be positive, got {self.d}")
        if self.d < self.max_degree():
            raise ValidationError(
                f"degree bound d={self.d} below max vertex degree {self.max_degree()}"
            )
        if self.n > 1 and self.d > self.n - 1:
            raise ValidationError(f"degree bound d={self.d} exceeds n-1={self.n - 1}")

    @property
    def m(self) -> int:
        return len(self.edges)

    def degrees(self) -> list[int]:
        deg = [0] * (self.n + 1)
        for i, j, _ in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg[1:]

    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    def neighbors(self, i: int) -> list[int]:
        """Sorted neighbour list of vertex ``i``."""
        out = [j for a, j, _ in self.edges if a == i] + [a for a, j, _ in self.edges if j == i]
        return sorted(out)

    def weight(self, i: int, j: int) -> float:
        if i > j:
            i, j = j, i
        for a, b, w in self.edges:
            if (a, b) == (i, j):
                return w
        return 0.0

    def edge_pairs(self) -> list[tuple[int, int]]:
        return [(i, j) for i, j, _ in self.edges]

    def with_weights(self, weights) -> "WeightedGraph":
        return WeightedGraph(
            self.n, tuple((i, j, float(w)) for (i, j, _), w in zip(self.edges, weights)), self.d
        )


def _default_d(n: int, edges) -> int:
    deg = [0] * (n + 1)
    for i, j, *_ in edges:
        deg[i] += 1
        deg[j] += 1
    return max(1, max(deg))


def path_graph(n: int, w: float = 1.0, d: int | None = None) -> WeightedGraph:
    edges = [(i, i + 1, w) for i in range(1, n)]
    return WeightedGraph(n, tuple(edges), d or _default_d(n, edges))


def cycle_graph(n: int, w: float = 1.0, d: int | None = None) -> WeightedGraph:
    edges = [(i, i + 1, w) for i in range(1, n)] + [(1, n, w)]
    return WeightedGraph(n, tuple(edges), d or _default_d(n, edges))


def complete_graph(n: int, w: float = 1.0) -> WeightedGraph:
    edges = [(i, j, w) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    return WeightedGraph(n, tuple(edges), max(1, n - 1))


def empty_graph(n: int, d: int = 1) -> WeightedGraph:
    return WeightedGraph(n, (), d)


@dataclass(frozen=True)
class HeisenbergInstance:
    graph: WeightedGraph
    p: float | None = None
    q: float | None = None

    def __post_init__(self):
        for i, j, k in self.graph.edges:
            if k < 0:
                raise ValidationError(f"negative coupling {k} on edge ({i}, {j})")
            if self.p is not None:
                cap = self.graph.n ** self.p
                if k > cap * (1 + REL_TOL):
                    raise ValidationError(f"coupling {k} on ({i}, {j}) exceeds n^p = {cap}")

    @property
    def n(self) -> int:
        return self.graph.n


@dataclass(frozen=True)
class HubbardInstance:
    graph: WeightedGraph
    u0: float
    eta: int
    p: float | None = None
    q: float | None = None

    def __post_init__(self):
        if not self.u0 > 0:
            raise ValidationError(f"onsite repulsion must be positive, got {self.u0}")
        if self.eta < 1:
            raise ValidationError(f"electron count must be >= 1, got {self.eta}")
        if self.eta > 2 * self.graph.n:
            raise ValidationError(f"eta={self.eta} exceeds 2n={2 * self.graph.n}")
        if self.p is not None:
            cap = math.sqrt(self.graph.n ** self.p * self.u0)
            for i, j, t in self.graph.edges:
                if abs(t) > cap * (1 + REL_TOL):
                    raise ValidationError(f"|t|={abs(t)} on ({i}, {j}) exceeds sqrt(n^p u0)={cap}")

    @property
    def n(self) -> int:
        return self.graph.n


Instance = HeisenbergInstance | HubbardInstance


def instance_to_dict(inst: Instance) -> dict:
    g = inst.graph
    out = {
        "kind": "heisenberg" if isinstance(inst, HeisenbergInstance) else "hubbard",
        "n": g.n,
        "d": g.d,
        "edges": [[i, j, w] for i, j, w in g.edges],
    }
    if isinstance(inst, HubbardInstance):
        out["u0"] = inst.u0
        out["eta"] = inst.eta
    if inst.p is not None:
        out["p"] = inst.p
    if inst.q is not None:
        out["q"] = inst.q
    return out


def _require(data: dict, key: str, typ):
    if key not in data:
        raise ParseError(f"missing field {key!r}")
    val = data[key]
    if typ is int and (isinstance(val, bool) or not isinstance(val, int)):
        raise ParseError(f"field {key!r} must be an integer")
    if typ is float and (isinstance(val, bool) or not isinstance(val, (int, float))):
        raise ParseError(f"field {key!r} must be a number")
    return val


def instance_from_dict(data: dict) -> Instance:
    if not isinstance(data, dict):
        raise ParseError("instance must be a JSON object")
    n = _require(data, "n", int)
    d = _require(data, "d", int)
    raw_edges = data.get("edges", [])
    if not isinstance(raw_edges, list):
        raise ParseError("'edges' must be a list")
    edges = []
    for e in raw_edges:
        if not (isinstance(e, list) and len(e) == 3):
            raise ParseError(f"edge entry {e!r} is not [i, j, w]")
        i, j, w = e
        if isinstance(i, bool) or isinstance(j, bool) or not isinstance(i, int) or not isinstance(j, int):
            raise ParseError(f"edge endpoints must be integers: {e!r}")
        if isinstance(w, bool) or not isinstance(w, (int, float)):
            raise ParseError(f"edge weight must be a number: {e!r}")
        edges.append((i, j, float(w)))
    p = float(_require(data, "p", float)) if "p" in data else None
    q = float(_require(data, "q", float)) if "q" in data else None
    graph = WeightedGraph(n, tuple(edges), d)
    kind = data.get("kind", "heisenberg")
    if kind == "heisenberg":
        return HeisenbergInstance(graph, p, q)
    if kind == "hubbard":
        u0 = float(_require(data, "u0", float))
        eta = _require(data, "eta", int)
        return HubbardInstance(graph, u0, eta, p, q)
    raise ParseError(f"unknown instance kind {kind!r}")


def load_instance(path) -> Instance:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    return instance_from_dict(data)


def save_instance(inst: Instance, path) -> None:
    Path(path).write_text(json.dumps(instance_to_dict(inst), indent=2) + "\n")
