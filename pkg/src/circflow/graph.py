"""Immutable simple graphs and the structural predicates used around snarks."""

from __future__ import annotations

import math
import sys
from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

INFINITY = math.inf


class GraphError(ValueError):
    """Raised for malformed graphs or inputs violating a precondition."""


class Graph:
    """Undirected simple graph on vertices ``0..n-1``.

    Edge ids are positions in :attr:`edges`; every edge is stored as ``(u, v)``
    with ``u < v``.  Two graphs compare equal when they have the same order and
    the same edge set, regardless of edge order.
    """

    __slots__ = ("n", "edges", "adjacency", "_masks", "_edge_index")

    def __init__(self, n: int, edges: Iterable[Sequence[int]]):
        if n < 0:
            raise GraphError(f"negative vertex count {n}")
        norm: list[tuple[int, int]] = []
        seen: set[tuple[int, int]] = set()
        adjacency: list[list[int]] = [[] for _ in range(n)]
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise GraphError(f"parallel edge {key}")
            seen.add(key)
            norm.append(key)
            adjacency[u].append(v)
            adjacency[v].append(u)
        self.n = n
        self.edges: tuple[tuple[int, int], ...] = tuple(norm)
        self.adjacency: tuple[tuple[int, ...], ...] = tuple(tuple(a) for a in adjacency)
        masks = [0] * n
        for u, v in norm:
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        self._masks = tuple(masks)
        self._edge_index = {e: i for i, e in enumerate(norm)}

    # -- basic accessors -------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adjacency]

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def neighbor_mask(self, v: int) -> int:
        """Neighbors of ``v`` as a bitmask over vertex ids."""
        return self._masks[v]

    @property
    def neighbor_masks(self) -> tuple[int, ...]:
        return self._masks

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self._edge_index

    def edge_id(self, u: int, v: int) -> int:
        return self._edge_index[(min(u, v), max(u, v))]

    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.edges)

    def is_cubic(self) -> bool:
        return self.n > 0 and all(len(a) == 3 for a in self.adjacency)

    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)

    def min_degree(self) -> int:
        return min((len(a) for a in self.adjacency), default=0)

    # -- derived graphs ----------------------------------------------------

    def without_edges(self, removed: Iterable[int]) -> Graph:
        drop = set(removed)
        return Graph(self.n, [e for i, e in enumerate(self.edges) if i not in drop])

    def relabeled(self, perm: Sequence[int]) -> Graph:
        """Graph with vertex ``v`` renamed to ``perm[v]``."""
        return Graph(self.n, [(perm[u], perm[v]) for u, v in self.edges])

    def to_networkx(self):
        import networkx as nx

        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g

    # -- dunder ------------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.edge_set() == other.edge_set()

    def __hash__(self) -> int:
        return hash((self.n, self.edge_set()))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class StructureReport:
    is_connected: bool
    is_bridgeless: bool
    girth: float
    is_bipartite: bool
    is_cubic: bool


def components(g: Graph, allowed: int | None = None) -> list[int]:
    """Connected components as bitmasks, optionally inside the vertex mask ``allowed``."""
    remaining = (1 << g.n) - 1 if allowed is None else allowed
    masks = g.neighbor_masks
    out = []
    while remaining:
        seed = remaining & -remaining
        comp = seed
        frontier = seed
        while frontier:
            low = frontier & -frontier
            frontier ^= low
            new = masks[low.bit_length() - 1] & remaining & ~comp
            comp |= new
            frontier |= new
        remaining &= ~comp
        out.append(comp)
    return out


def is_connected(g: Graph) -> bool:
    return g.n <= 1 or len(components(g)) == 1


def is_connected_subset(g: Graph, subset: int) -> bool:
    return subset != 0 and len(components(g, subset)) == 1


def find_bridges(g: Graph) -> list[int]:
    """Ids of all cut edges, in increasing edge-id order."""
    n = g.n
    disc = [-1] * n
    low = [0] * n
    incident: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for i, (u, v) in enumerate(g.edges):
        incident[u].append((v, i))
        incident[v].append((u, i))
    bridges = []
    timer = 0
    for root in range(n):
        if disc[root] != -1:
            continue
        disc[root] = low[root] = timer
        timer += 1
        stack = [(root, -1, iter(incident[root]))]
        while stack:
            v, parent_edge, it = stack[-1]
            advanced = False
            for w, eid in it:
                if eid == parent_edge:
                    continue
                if disc[w] == -1:
                    disc[w] = low[w] = timer
                    timer += 1
                    stack.append((w, eid, iter(incident[w])))
                    advanced = True
                    break
                low[v] = min(low[v], disc[w])
            if advanced:
                continue
            stack.pop()
            if stack:
                p = stack[-1][0]
                low[p] = min(low[p], low[v])
                if low[v] > disc[p]:
                    bridges.append(parent_edge)
    return sorted(bridges)


def girth(g: Graph) -> float:
    """Length of a shortest cycle, or ``INFINITY`` for forests."""
    best = INFINITY
    for s in range(g.n):
        dist = {s: 0}
        parent = {s: -1}
        queue = deque([s])
        while queue:
            v = queue.popleft()
            if 2 * dist[v] + 1 >= best:
                break
            for w in g.adjacency[v]:
                if w not in dist:
                    dist[w] = dist[v] + 1
                    parent[w] = v
                    queue.append(w)
                elif parent[v] != w:
                    best = min(best, dist[v] + dist[w] + 1)
    return best


def is_bipartite(g: Graph) -> bool:
    side = [-1] * g.n
    for s in range(g.n):
        if side[s] != -1:
            continue
        side[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for w in g.adjacency[v]:
                if side[w] == -1:
                    side[w] = 1 - side[v]
                    queue.append(w)
                elif side[w] == side[v]:
                    return False
    return True


def structure_report(g: Graph) -> StructureReport:
    return StructureReport(
        is_connected=is_connected(g),
        is_bridgeless=not find_bridges(g),
        girth=girth(g),
        is_bipartite=is_bipartite(g),
        is_cubic=g.is_cubic(),
    )


def _require_cubic(g: Graph, what: str) -> None:
    if not g.is_cubic():
        raise GraphError(f"{what} requires a cubic graph")


def three_edge_coloring(g: Graph) -> list[int] | None:
    """A proper 3-edge-coloring (color per edge id) or ``None``.

    Backtracking over edges in BFS order; the three edges at the first vertex
    get fixed distinct colors, which removes the color permutation symmetry.
    """
    _require_cubic(g, "3-edge-coloring")
    n, m = g.n, g.m
    incident: list[list[int]] = [[] for _ in range(n)]
    for i, (u, v) in enumerate(g.edges):
        incident[u].append(i)
        incident[v].append(i)
    order: list[int] = []
    placed = [False] * m
    seen = [False] * n
    for root in range(n):
        if seen[root]:
            continue
        seen[root] = True
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for eid in incident[v]:
                if not placed[eid]:
                    placed[eid] = True
                    order.append(eid)
                u, w = g.edges[eid]
                other = w if u == v else u
                if not seen[other]:
                    seen[other] = True
                    queue.append(other)
    color = [-1] * m
    used = [0] * n
    if m == 0:
        return color
    first = g.edges[order[0]][0]
    fixed = set(incident[first])
    for c, eid in enumerate(incident[first]):
        u, v = g.edges[eid]
        color[eid] = c
        used[u] |= 1 << c
        used[v] |= 1 << c
    todo = [e for e in order if e not in fixed]

    def place(k: int) -> bool:
        if k == len(todo):
            return True
        eid = todo[k]
        u, v = g.edges[eid]
        free = 7 & ~(used[u] | used[v])
        while free:
            bit = free & -free
            free ^= bit
            color[eid] = bit.bit_length() - 1
            used[u] |= bit
            used[v] |= bit
            if place(k + 1):
                return True
            used[u] ^= bit
            used[v] ^= bit
        color[eid] = -1
        return False

    if len(todo) + 100 > sys.getrecursionlimit():
        sys.setrecursionlimit(len(todo) + 100)
    return color if place(0) else None


def is_3_edge_colorable(g: Graph) -> bool:
    return three_edge_coloring(g) is not None


def _cyclic_components(g: Graph, removed: set[int]) -> int:
    """Number of components of ``g - removed`` that contain a cycle."""
    edges = [e for i, e in enumerate(g.edges) if i not in removed]
    parent = list(range(g.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    cyclic_roots = set()
    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru == rv:
            cyclic_roots.add(ru)
        else:
            parent[ru] = rv
    return len({find(r) for r in cyclic_roots})


def is_cyclically_4_edge_connected(g: Graph) -> bool:
    """True iff no set of at most 3 edges separates two cyclic components.

    Every relevant 3-edge set is a pair plus a bridge of the graph left after
    deleting the pair, so it suffices to scan pairs and their bridges.
    """
    _require_cubic(g, "cyclic edge-connectivity")
    if not is_connected(g):
        raise GraphError("cyclic edge-connectivity requires a connected graph")
    m = g.m
    for i in range(m):
        for j in range(i, m):
            pair = {i, j}
            if _cyclic_components(g, pair) >= 2:
                return False
            rest = g.without_edges(pair)
            kept = [k for k in range(m) if k not in pair]
            for b in find_bridges(rest):
                if _cyclic_components(g, pair | {kept[b]}) >= 2:
                    return False
    return True


def cyclic_edge_cuts(g: Graph, max_size: int) -> list[frozenset[int]]:
    """All edge sets of size <= ``max_size`` whose removal leaves two cyclic components.

    Brute force over edge subsets; meant for small graphs and tests.
    """
    out = []
    for k in range(1, max_size + 1):
        for combo in combinations(range(g.m), k):
            if _cyclic_components(g, set(combo)) >= 2:
                out.append(frozenset(combo))
    return out


def is_snark(g: Graph) -> bool:
    """Cubic, cyclically 4-edge-connected, girth >= 5 and not 3-edge-colorable."""
    if not g.is_cubic() or not is_connected(g):
        return False
    if girth(g) < 5:
        return False
    if is_3_edge_colorable(g):
        return False
    return is_cyclically_4_edge_connected(g)
