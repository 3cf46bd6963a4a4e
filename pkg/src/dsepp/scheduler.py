"""CZ-connectivity multigraph and minimal parallel-layer scheduling.

Two CZ gates can fire simultaneously when they touch disjoint atom pairs,
so packing a compiled circuit's CZ list into the fewest laser pulses is
edge coloring: the layer count equals the chromatic index of the CZ
multigraph.  Exact search is branch-and-bound (iterative deepening on the
color count with first-fit symmetry breaking); beyond ``exact_limit``
edges a bounded search is used whose layer count never exceeds

    min over v of { delta(G) + mu(G - v) },  floor(3 delta(G) / 2)

(Favrholdt, Stiebitz and Toft), where delta(G) denotes the maximum degree
(written Delta elsewhere; delta kept to match the protocol literature) and
mu the maximum edge multiplicity.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .compiler import CompiledCircuit

_HEURISTIC_NODE_CAP = 20000


class MultiGraph:
    """Loop-free multigraph with integer adjacency, multiplicities <= 2."""

    __slots__ = ("n", "adjacency")

    def __init__(self, n: int, adjacency):
        a = np.array(adjacency, dtype=np.int64)
        if a.shape != (n, n):
            raise ValueError(f"adjacency must be {n}x{n}")
        if not np.array_equal(a, a.T):
            raise ValueError("adjacency must be symmetric")
        if np.diag(a).any():
            raise ValueError("adjacency must have zero diagonal")
        if a.min() < 0 or a.max() > 2:
            raise ValueError("edge multiplicities must be in {0, 1, 2}")
        a.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "adjacency", a)

    def __setattr__(self, name, value):
        raise AttributeError("MultiGraph is immutable")

    def edges(self) -> list[tuple[int, int]]:
        """Edge list with multiplicity, lexicographically sorted."""
        out = []
        for i in range(self.n):
            for j in range(i + 1, self.n):
                out.extend([(i, j)] * int(self.adjacency[i, j]))
        return out

    def degree(self, v: int) -> int:
        return int(self.adjacency[v].sum())

    def max_degree(self) -> int:
        return int(self.adjacency.sum(axis=1).max()) if self.n else 0

    def max_multiplicity(self) -> int:
        return int(self.adjacency.max()) if self.n else 0

    def edge_count(self) -> int:
        return int(self.adjacency.sum()) // 2

    def to_dot(self) -> str:
        lines = ["graph G {"]
        for i, j in self.edges():
            lines.append(f"  {i} -- {j};")
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class LayerAssignment:
    layers: tuple[tuple[tuple[int, int], ...], ...]
    exact: bool

    @property
    def num_layers(self) -> int:
        return len(self.layers)

    def to_json(self) -> str:
        return json.dumps(
            {"layers": [[list(e) for e in layer] for layer in self.layers],
             "exact": self.exact},
            indent=2)


def build_multigraph(circ: CompiledCircuit) -> MultiGraph:
    """Integer adjacency of all CZ pairs; a pair used by both CZ stages
    gets multiplicity 2."""
    a = np.zeros((circ.n, circ.n), dtype=np.int64)
    for i, j in list(circ.u1_edges) + list(circ.u2_edges):
        a[i, j] += 1
        a[j, i] += 1
    return MultiGraph(circ.n, a)


def upper_bound(g: MultiGraph) -> int:
    """min_v {delta + mu(G-v)} and floor(3*delta/2), whichever is smaller."""
    delta = g.max_degree()
    if delta == 0:
        return 0
    best_mu = None
    a = g.adjacency
    for v in range(g.n):
        sub = np.delete(np.delete(a, v, axis=0), v, axis=1)
        mu = int(sub.max()) if sub.size else 0
        best_mu = mu if best_mu is None else min(best_mu, mu)
    return min(delta + (best_mu or 0), (3 * delta) // 2)


def _search_coloring(edges, degrees, n_colors, node_cap=None):
    """First solution of an n_colors edge coloring, or None.

    Edges are tried in decreasing degree-sum order; colors ascending with
    first-fit symmetry breaking (a new color index may only follow all
    smaller ones), so the first solution is deterministic.  With
    ``node_cap`` set the search may give up (returns None without proving
    unsatisfiability).
    """
    order = sorted(range(len(edges)),
                   key=lambda t: (-(degrees[edges[t][0]] + degrees[edges[t][1]]), edges[t]))
    used = [0] * (max(max(e) for e in edges) + 1)
    assignment = [-1] * len(edges)
    nodes = 0

    def rec(pos, max_used):
        nonlocal nodes
        if pos == len(order):
            return True
        nodes += 1
        if node_cap is not None and nodes > node_cap:
            return None
        t = order[pos]
        i, j = edges[t]
        free = ~(used[i] | used[j])
        limit = min(n_colors, max_used + 2)
        for c in range(limit):
            if free & (1 << c):
                bit = 1 << c
                used[i] |= bit
                used[j] |= bit
                assignment[t] = c
                sub = rec(pos + 1, max(max_used, c))
                if sub:
                    return True
                used[i] &= ~bit
                used[j] &= ~bit
                assignment[t] = -1
                if sub is None:
                    return None
        return False

    found = rec(0, -1)
    return list(assignment) if found else None


def chromatic_index(g: MultiGraph, exact_limit: int = 24) -> LayerAssignment:
    """Partition the multigraph edges into the fewest vertex-disjoint layers.

    Provably minimal (``exact=True``) when the edge count is within
    ``exact_limit`` or when the search meets the max-degree lower bound;
    otherwise a bounded search flagged ``exact=False`` whose result obeys
    the documented upper bound.
    """
    edges = g.edges()
    if not edges:
        return LayerAssignment((), True)
    degrees = [g.degree(v) for v in range(g.n)]
    lower = g.max_degree()
    bound = max(upper_bound(g), lower)
    exact_mode = len(edges) <= exact_limit

    n_colors = lower
    while True:
        cap = None if (exact_mode or n_colors >= bound) else _HEURISTIC_NODE_CAP
        assignment = _search_coloring(edges, degrees, n_colors, node_cap=cap)
        if assignment is not None:
            layers = [[] for _ in range(n_colors)]
            for t, c in enumerate(assignment):
                layers[c].append(edges[t])
            layers = [tuple(sorted(layer)) for layer in layers if layer]
            exact = exact_mode or n_colors == lower
            return LayerAssignment(tuple(layers), exact)
        n_colors += 1


def verify_layers(g: MultiGraph, la: LayerAssignment) -> bool:
    """Validity check: exact edge partition, per-layer disjointness, and the
    layer count sandwiched between max degree and the documented bound."""
    from collections import Counter

    want = Counter(g.edges())
    got: Counter = Counter()
    for layer in la.layers:
        seen = set()
        for i, j in layer:
            e = (min(i, j), max(i, j))
            if i == j or i in seen or j in seen:
                return False
            seen.update((i, j))
            got[e] += 1
    if got != want:
        return False
    lo = g.max_degree()
    hi = max(upper_bound(g), lo)
    return lo <= la.num_layers <= hi if want else la.num_layers == 0
