"""Generators for the snark families and the named snarks shipped as data.

Labelings are fixed so that repeated calls return identical labeled graphs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from importlib import resources

from .graph import Graph, GraphError, components, is_snark
from .graph6 import parse_graph6


def petersen() -> Graph:
    """Outer 5-cycle 0..4, spokes i - i+5, inner pentagram on 5..9."""
    edges = []
    for i in range(5):
        edges.append((i, (i + 1) % 5))
        edges.append((i, i + 5))
        edges.append((i + 5, (i + 2) % 5 + 5))
    return Graph(10, edges)


def flower(t: int) -> Graph:
    """Flower snark J_t on 4t vertices.

    Block i holds a center ``4i`` joined to ``4i+1``, ``4i+2``, ``4i+3``.  The
    ``4i+1`` vertices form a t-cycle; the ``4i+2`` and ``4i+3`` vertices form
    one 2t-cycle that swaps the two tracks when it wraps around.
    """
    if t < 5 or t % 2 == 0:
        raise GraphError(f"flower snark needs odd t >= 5, got {t}")
    edges = []
    for i in range(t):
        a, b, c, d = 4 * i, 4 * i + 1, 4 * i + 2, 4 * i + 3
        edges += [(a, b), (a, c), (a, d)]
        edges.append((b, 4 * ((i + 1) % t) + 1))
        if i < t - 1:
            edges += [(c, c + 4), (d, d + 4)]
    edges += [(4 * (t - 1) + 2, 3), (4 * (t - 1) + 3, 2)]
    return Graph(4 * t, edges)


# Petersen minus the vertices 1 and 4, which share the neighbor 0.  In the
# block, 0 becomes a degree-1 vertex; 2 and 6 lost their edge to 1, 3 and 9
# lost theirs to 4.
_GOLDBERG_KEEP = (0, 2, 3, 5, 6, 7, 8, 9)


def goldberg(t: int) -> Graph:
    """Goldberg snark G_t on 8t vertices.

    Each of the t blocks is the Petersen graph minus two vertices at distance
    two.  The degree-1 vertex of every block joins a central t-cycle, and the
    two remaining open pairs link consecutive blocks so that the four link
    vertices of all blocks close into one cycle of length 4t.  G_3 has a
    triangle (its central cycle), so only t >= 5 yields a snark.
    """
    if t < 3 or t % 2 == 0:
        raise GraphError(f"Goldberg snark needs odd t >= 3, got {t}")
    local = {v: k for k, v in enumerate(_GOLDBERG_KEEP)}
    p = petersen()
    edges = []
    for i in range(t):
        base = 8 * i
        nxt = 8 * ((i + 1) % t)
        for u, v in p.edges:
            if u in local and v in local:
                edges.append((base + local[u], base + local[v]))
        edges.append((base + local[0], nxt + local[0]))
        edges.append((base + local[2], nxt + local[9]))
        edges.append((base + local[6], nxt + local[3]))
    return Graph(8 * t, edges)


# -- dot product -------------------------------------------------------------


@dataclass(frozen=True)
class DotProductSpec:
    """Gluing data for ``left . right``.

    ``left_edges`` are the independent edges ``(a, b)`` and ``(c, d)`` of the
    left graph; ``right_pair`` is the adjacent pair ``(x, y)`` of the right
    graph.  ``right_links`` orders the other neighbors ``(u, v)`` of x and
    ``(w, z)`` of y; the new edges are au, bv, cw and dz.  When omitted, the
    neighbors are taken in increasing order.
    """

    left: Graph
    left_edges: tuple[tuple[int, int], tuple[int, int]]
    right: Graph
    right_pair: tuple[int, int]
    right_links: tuple[tuple[int, int], tuple[int, int]] | None = None

    def links(self) -> tuple[tuple[int, int], tuple[int, int]]:
        x, y = self.right_pair
        if self.right_links is not None:
            return self.right_links
        ux = tuple(sorted(w for w in self.right.neighbors(x) if w != y))
        uy = tuple(sorted(w for w in self.right.neighbors(y) if w != x))
        return (ux, uy)  # type: ignore[return-value]


def dot_product(spec: DotProductSpec) -> Graph:
    """Left vertices keep their ids; right vertices other than x, y follow in order."""
    g, h = spec.left, spec.right
    if not g.is_cubic() or not h.is_cubic() or g.n < 6 or h.n < 6:
        raise GraphError("dot product needs two cubic graphs on at least 6 vertices")
    (a, b), (c, d) = spec.left_edges
    if len({a, b, c, d}) != 4:
        raise GraphError("dot product edges must be independent")
    if not g.has_edge(a, b) or not g.has_edge(c, d):
        raise GraphError("dot product edges must be edges of the left graph")
    x, y = spec.right_pair
    if not h.has_edge(x, y):
        raise GraphError("dot product vertices must be adjacent in the right graph")
    (u, v), (w, z) = spec.links()
    if set(h.neighbors(x)) != {u, v, y} or set(h.neighbors(y)) != {w, z, x}:
        raise GraphError("link vertices must be the other neighbors of x and y")
    if len({u, v, w, z}) != 4:
        raise GraphError("x and y must not share a neighbor")
    rest = [k for k in range(h.n) if k not in (x, y)]
    new_id = {k: g.n + i for i, k in enumerate(rest)}
    drop = {g.edge_id(a, b), g.edge_id(c, d)}
    edges = [e for i, e in enumerate(g.edges) if i not in drop]
    edges += [(new_id[p], new_id[q]) for p, q in h.edges if p in new_id and q in new_id]
    edges += [(a, new_id[u]), (b, new_id[v]), (c, new_id[w]), (d, new_id[z])]
    return Graph(g.n + h.n - 2, edges)


# -- the S_k family ----------------------------------------------------------

# S_2 glues two Petersen graphs along the edges 0-1 and 2-3 (distance one, with
# 1-2 between them) of the left copy and the spoke 0-5 of the right copy.
_S2_EDGES = ((0, 1), (2, 3))
_PETERSEN_PAIR = (0, 5)

# For k >= 3, S_k = S_{k-1} . Petersen with the left edges below, frozen from
# :func:`select_s_edges` (first certified pair in edge-id order).
S_EDGE_SELECTION: dict[int, tuple[tuple[int, int], tuple[int, int]]] = {
    3: ((0, 5), (14, 16)),
    4: ((1, 6), (23, 25)),
    5: ((15, 17), (28, 29)),
}


def s_snark(k: int) -> Graph:
    """S_k on 8k+2 vertices: Petersen, then repeated dot products with Petersen.

    Steps beyond the frozen selection fall back to :func:`select_s_edges`
    without the flow certificate, so only the 2-factor shape is guaranteed.
    """
    if k < 1:
        raise GraphError(f"s_snark needs k >= 1, got {k}")
    g = petersen()
    for j in range(2, k + 1):
        if j == 2:
            edges = _S2_EDGES
        elif j in S_EDGE_SELECTION:
            edges = S_EDGE_SELECTION[j]
        else:
            edges = select_s_edges(g, j, certify=False)
        g = dot_product(DotProductSpec(g, edges, petersen(), _PETERSEN_PAIR))
    return g


def two_chordless_cycles(g: Graph, length: int) -> int | None:
    """Vertex mask of a chordless ``length``-cycle through 0 whose complement is one too.

    Such a pair of cycles is a 2-factor, which is what permutation snarks have.
    """
    if g.n != 2 * length or g.n == 0:
        return None
    masks = g.neighbor_masks
    full = (1 << g.n) - 1

    def is_cycle(mask: int) -> bool:
        rest = mask
        while rest:
            low = rest & -rest
            rest ^= low
            if (masks[low.bit_length() - 1] & mask).bit_count() != 2:
                return False
        return len(components(g, mask)) == 1

    # induced paths from 0; an explicit stack keeps deep searches off the C stack
    stack = [(0, 1, 1, iter(g.neighbors(0)))]
    while stack:
        v, pmask, size, it = stack[-1]
        w = next(it, None)
        if w is None:
            stack.pop()
            continue
        if pmask >> w & 1:
            continue
        touch = masks[w] & pmask & ~(1 << v)
        closing = size + 1 == length
        if touch and not (closing and touch == 1):
            continue
        if closing:
            cyc = pmask | 1 << w
            if touch == 1 and is_cycle(full & ~cyc):
                return cyc
            continue
        stack.append((w, pmask | 1 << w, size + 1, iter(g.neighbors(w))))
    return None


def select_s_edges(
    g: Graph, k: int, certify: bool = True
) -> tuple[tuple[int, int], tuple[int, int]]:
    """First independent edge pair of S_{k-1} (edge-id order) that makes S_k.

    A pair qualifies when the dot product with Petersen has two chordless
    (4k+1)-cycles as a 2-factor and, with ``certify``, circular flow number
    exactly ``4 + 1/k``.  Certifying is expensive beyond k = 4.
    """
    from .solver import Exact, circular_flow_number, phi_at_least

    target = 4 + Fraction(1, k)
    for e, f in combinations(g.edges, 2):
        if len(set(e + f)) != 4:
            continue
        h = dot_product(DotProductSpec(g, (e, f), petersen(), _PETERSEN_PAIR))
        if two_chordless_cycles(h, 4 * k + 1) is None:
            continue
        if not certify:
            return (e, f)
        # cheap rejection first: a value >= 4 + 1/(k-1) is too large
        if phi_at_least(h, 4 + Fraction(1, k - 1)):
            continue
        result = circular_flow_number(h)
        if isinstance(result, Exact) and result.value == target:
            return (e, f)
    raise GraphError(f"no edge pair of S_{k - 1} yields S_{k}")


# -- named snarks ------------------------------------------------------------

NAMED_SNARKS = (
    "blanusa1",
    "blanusa2",
    "double_star",
    "szekeres",
    "watkins",
    "loupekine1",
    "loupekine2",
    "celmins_swart1",
    "celmins_swart2",
)


def named_snark_text(key: str) -> tuple[str, str]:
    """Provenance comment and graph6 line of a shipped snark."""
    if key not in NAMED_SNARKS:
        raise KeyError(f"unknown snark {key!r}; known: {', '.join(NAMED_SNARKS)}")
    path = resources.files("circflow") / "data" / f"{key}.g6"
    if not path.is_file():
        raise FileNotFoundError(f"no data shipped for {key!r}")
    lines = [ln.strip() for ln in path.read_text().splitlines() if ln.strip()]
    comment = " ".join(ln.lstrip("# ") for ln in lines if ln.startswith("#"))
    data = [ln for ln in lines if not ln.startswith("#")]
    if len(data) != 1:
        raise GraphError(f"{key}.g6 must hold exactly one graph")
    return comment, data[0]


@lru_cache(maxsize=None)
def named_snark(key: str) -> Graph:
    _, text = named_snark_text(key)
    g = parse_graph6(text)
    if not is_snark(g):
        raise GraphError(f"shipped graph {key!r} is not a snark")
    return g
