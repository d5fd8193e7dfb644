"""Placement of primitive Gaussian centers for an interaction graph.

Every edge {i, j} gets one close pair of primitives (one from each endpoint)
at distance gamma_ij; every other pair of centers is at least Gamma apart.
Centers sit on the x-axis in cells of integral width ``L >= 2 Gamma + 2 gamma_max``.
A position is stored as (cell index, offset inside the cell) so that close-pair
separations are exact no matter how large the absolute coordinates get.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .errors import ParseError, ValidationError
from .instances import WeightedGraph

REL_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class OrbitalLayout:
    graph: WeightedGraph
    alpha: float
    beta: float
    Gamma: float
    gamma: dict  # (i, j) -> close-pair distance
    pair_map: dict  # (i, j) -> ((i, p), (j, q))
    cell: np.ndarray
    offset: np.ndarray
    cell_size: float
    labels: tuple = field(init=False)

    def __post_init__(self):
        n, d = self.graph.n, self.graph.d
        object.__setattr__(
            self, "labels", tuple((i, p) for i in range(1, n + 1) for p in range(d + 1))
        )
        object.__setattr__(self, "cell", np.asarray(self.cell, dtype=np.int64))
        object.__setattr__(self, "offset", np.asarray(self.offset, dtype=float))

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def d(self) -> int:
        return self.graph.d

    @property
    def N(self) -> int:
        return self.n * (self.d + 1)

    def index(self, i: int, p: int) -> int:
        return (i - 1) * (self.d + 1) + p

    @property
    def exponents(self) -> np.ndarray:
        return np.array([self.beta if p == 0 else self.alpha for _, p in self.labels])

    @property
    def amplitudes(self) -> np.ndarray:
        """psi_0 = 1/sqrt(2), psi_p = 1/sqrt(2d) for p >= 1."""
        psi = np.full(self.d + 1, 1.0 / math.sqrt(2 * self.d))
        psi[0] = 1.0 / math.sqrt(2)
        return psi

    def coefficient_matrix(self) -> np.ndarray:
        """N x n matrix mapping composite orbitals onto primitives."""
        C = np.zeros((self.N, self.n))
        psi = self.amplitudes
        for k, (i, p) in enumerate(self.labels):
            C[k, i - 1] = psi[p]
        return C

    @property
    def centers(self) -> np.ndarray:
        """Absolute coordinates in R^3 (y = z = 0); lossy when cells are huge."""
        out = np.zeros((self.N, 3))
        out[:, 0] = self.cell * self.cell_size + self.offset
        return out

    def displacement(self, a: int, b: int) -> float:
        """x_b - x_a computed from cell differences so close pairs stay exact."""
        return float((self.cell[b] - self.cell[a]) * self.cell_size + (self.offset[b] - self.offset[a]))

    def relative_positions(self, origin: int) -> np.ndarray:
        x = (self.cell - self.cell[origin]) * self.cell_size + (self.offset - self.offset[origin])
        out = np.zeros((self.N, 3))
        out[:, 0] = x
        return out

    def distance_matrix(self) -> np.ndarray:
        dc = (self.cell[:, None] - self.cell[None, :]) * self.cell_size
        do = self.offset[:, None] - self.offset[None, :]
        return np.abs(dc + do)

    @property
    def close_pairs(self) -> list[tuple[int, int]]:
        return [(self.index(*a), self.index(*b)) for a, b in self.pair_map.values()]

    @property
    def omega(self) -> dict:
        return {e: self.alpha * g * g for e, g in self.gamma.items()}

    @property
    def omega_min(self) -> float:
        return min(self.omega.values(), default=math.inf)

    def dummy_count(self) -> int:
        return self.N - 2 * len(self.pair_map)

    def moved(self, k: int, cell: int, offset: float) -> "OrbitalLayout":
        c, o = self.cell.copy(), self.offset.copy()
        c[k], o[k] = cell, offset
        return replace(self, cell=c, offset=o)

    # --- export -----------------------------------------------------------------

    def to_dict(self) -> dict:
        C = self.centers
        prims = []
        for k, (i, p) in enumerate(self.labels):
            prims.append(
                {
                    "vertex": i,
                    "p": p,
                    "exponent": float(self.exponents[k]),
                    "amplitude": float(self.amplitudes[p]),
                    "cell": int(self.cell[k]),
                    "offset": float(self.offset[k]),
                    "center": [float(x) for x in C[k]],
                }
            )
        return {
            "n": self.n,
            "d": self.d,
            "edges": [[i, j, w] for i, j, w in self.graph.edges],
            "alpha": self.alpha,
            "beta": self.beta,
            "Gamma": self.Gamma,
            "cell_size": self.cell_size,
            "gamma": [[i, j, g] for (i, j), g in self.gamma.items()],
            "pair_map": [[i, j, a[1], b[1]] for (i, j), (a, b) in self.pair_map.items()],
            "primitives": prims,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)

    def to_xyz(self) -> str:
        C = self.centers
        lines = [str(self.N), f"alpha={self.alpha!r} beta={self.beta!r} Gamma={self.Gamma!r}"]
        for k, (i, p) in enumerate(self.labels):
            x, y, z = C[k]
            lines.append(f"G{i}_{p} {x:.10g} {y:.10g} {z:.10g} {self.exponents[k]:.10g}")
        return "\n".join(lines) + "\n"


def layout_from_dict(data: dict) -> OrbitalLayout:
    try:
        graph = WeightedGraph(data["n"], tuple(tuple(e) for e in data["edges"]), data["d"])
        gamma = {(int(i), int(j)): float(g) for i, j, g in data["gamma"]}
        pair_map = {(int(i), int(j)): ((int(i), int(p)), (int(j), int(q))) for i, j, p, q in data["pair_map"]}
        prims = data["primitives"]
        cell = [int(x["cell"]) for x in prims]
        offset = [float(x["offset"]) for x in prims]
        return OrbitalLayout(
            graph, float(data["alpha"]), float(data["beta"]), float(data["Gamma"]),
            gamma, pair_map, cell, offset, float(data["cell_size"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed layout: {exc}") from exc


def load_layout(path) -> OrbitalLayout:
    try:
        return layout_from_dict(json.loads(Path(path).read_text()))
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read layout {path}: {exc}") from exc


def _gamma_map(graph: WeightedGraph, gamma) -> dict:
    if isinstance(gamma, dict):
        out = {}
        for i, j in graph.edge_pairs():
            g = gamma.get((i, j), gamma.get((j, i)))
            if g is None:
                raise ValidationError(f"no close-pair distance for edge ({i}, {j})")
            out[(i, j)] = float(g)
        return out
    if callable(gamma):
        return {(i, j): float(gamma(i, j)) for i, j in graph.edge_pairs()}
    return {(i, j): float(gamma) for i, j in graph.edge_pairs()}


def place_centers(graph: WeightedGraph, gamma, Gamma: float, alpha: float, beta: float) -> OrbitalLayout:
    """Deterministic line layout; ``gamma`` is a scalar, an edge dict, or a callable."""
    gam = _gamma_map(graph, gamma)
    if any(not g > 0 for g in gam.values()):
        raise ValidationError("close-pair distances must be positive")
    gmax = max(gam.values(), default=0.0)
    if not Gamma > gmax:
        raise ValidationError(f"Gamma={Gamma} must exceed the largest close-pair distance {gmax}")
    if not (alpha > 0 and beta > 0):
        raise ValidationError("Gaussian exponents must be positive")
    d = graph.d
    L = float(math.ceil(2 * Gamma + 2 * gmax))
    N = graph.n * (d + 1)
    cell = np.full(N, -1, dtype=np.int64)
    offset = np.zeros(N)

    def idx(i, p):
        return (i - 1) * (d + 1) + p

    pair_map = {}
    for c, (i, j) in enumerate(graph.edge_pairs()):
        p = graph.neighbors(i).index(j) + 1
        q = graph.neighbors(j).index(i) + 1
        g = gam[(i, j)]
        cell[idx(i, p)], offset[idx(i, p)] = c, -g / 2
        cell[idx(j, q)], offset[idx(j, q)] = c, g / 2
        pair_map[(i, j)] = ((i, p), (j, q))
    nxt = graph.m
    for i in range(1, graph.n + 1):
        deg = len(graph.neighbors(i))
        for p in [0] + list(range(deg + 1, d + 1)):
            cell[idx(i, p)] = nxt
            nxt += 1
    return OrbitalLayout(graph, float(alpha), float(beta), float(Gamma), gam, pair_map, cell, offset, L)


def verify_layout(layout: OrbitalLayout, rtol: float = REL_TOL) -> list[str]:
    """Every violated layout invariant, as a human-readable string."""
    out = []
    N = layout.N
    if len(layout.cell) != N or len(layout.offset) != N:
        return [f"expected {N} primitive centers, found {len(layout.cell)}"]
    close = {}
    seen = set()
    for e, ((i, p), (j, q)) in layout.pair_map.items():
        if e not in layout.gamma:
            out.append(f"edge {e} has no close-pair distance")
            continue
        a, b = layout.index(i, p), layout.index(j, q)
        for x in (a, b):
            if x in seen:
                out.append(f"primitive {layout.labels[x]} belongs to two close pairs")
            seen.add(x)
        close[frozenset((a, b))] = e
        dist = abs(layout.displacement(a, b))
        g = layout.gamma[e]
        if abs(dist - g) > rtol * g:
            out.append(f"edge {e}: close pair at distance {dist!r}, expected {g!r}")
    if set(layout.pair_map) != set(layout.graph.edge_pairs()):
        out.append("pair map is not a bijection onto the edge set")
    gmax = max(layout.gamma.values(), default=0.0)
    if not gmax < layout.Gamma:
        out.append(f"gamma_max={gmax} is not below Gamma={layout.Gamma}")
    D = layout.distance_matrix()
    far_min = layout.Gamma * (1 - rtol)
    ii, jj = np.nonzero(np.triu(D < far_min, 1))
    for a, b in zip(ii, jj):
        if frozenset((int(a), int(b))) in close:
            continue
        out.append(f"primitives {layout.labels[a]} and {layout.labels[b]} only {D[a, b]!r} apart")
    norm = float(np.sum(layout.amplitudes[0] ** 2 + layout.d * layout.amplitudes[1] ** 2))
    if abs(norm - 1.0) > 1e-12:
        out.append(f"composite amplitudes not normalized: {norm}")
    return out
