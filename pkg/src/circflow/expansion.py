"""Vertex expansions and the reduction of the ``>= 5`` question to cubic graphs.

Expanding a vertex v replaces it by a small graph and hands each edge of v to
one of the new vertices.  Expansions never lower the circular flow number, so
a cubic expansion with a flow below 5 refutes ``>= 5`` for the original graph.
Conversely, if every member of the families below has flow number at least 5,
so does the original graph; at degree-4 vertices this direction depends on
the gadget templates supplied, and the shipped ones are reconstructions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Sequence, TextIO

from .graph import Graph, GraphError, find_bridges, is_connected


def _incident_neighbors(g: Graph, v: int) -> tuple[int, ...]:
    return tuple(sorted(g.neighbors(v)))


def expand_into_k2(g: Graph, v: int, side: Iterable[int]) -> Graph:
    """Split v into adjacent vertices v (keeping ``side``) and a new vertex ``n``.

    ``side`` names v's edges by their other endpoints.
    """
    nbrs = set(g.neighbors(v))
    keep = set(side)
    if not keep <= nbrs:
        raise GraphError(f"side {sorted(keep)} is not a set of neighbors of {v}")
    d = len(nbrs)
    if d < 4:
        raise GraphError(f"vertex {v} has degree {d}; expansions need degree >= 4")
    if not 2 <= len(keep) <= d - 2:
        raise GraphError(f"side of size {len(keep)} leaves a vertex of degree < 3")
    new = g.n
    edges = []
    for a, b in g.edges:
        if v in (a, b):
            w = b if a == v else a
            edges.append((v, w) if w in keep else (new, w))
        else:
            edges.append((a, b))
    edges.append((v, new))
    return Graph(g.n + 1, edges)


def family_H(g: Graph, v: int) -> list[Graph]:
    """All K_2 expansions at v, one per unordered split with both sides >= 2.

    Fixing the lowest neighbor on v's side lists every split once, giving
    ``2^(d-1) - d - 1`` graphs for degree d.
    """
    nbrs = _incident_neighbors(g, v)
    d = len(nbrs)
    if d < 4:
        raise GraphError(f"vertex {v} has degree {d}; expansions need degree >= 4")
    first, rest = nbrs[0], nbrs[1:]
    out = []
    for size in range(1, d - 2):
        for combo in itertools.combinations(rest, size):
            out.append(expand_into_k2(g, v, (first,) + combo))
    return out


# -- gadgets -----------------------------------------------------------------


@dataclass(frozen=True)
class GadgetTemplate:
    """A graph on ``size`` internal vertices with four attachment points.

    ``attachments[i]`` is the internal vertex receiving the i-th edge of the
    expanded vertex; a vertex may appear more than once.
    """

    name: str
    size: int
    edges: tuple[tuple[int, int], ...]
    attachments: tuple[int, int, int, int]
    note: str = ""

    def __post_init__(self):
        if len(self.attachments) != 4:
            raise GraphError(f"gadget {self.name!r} needs 4 attachment points")
        Graph(self.size, self.edges)  # validates simplicity and ranges
        for a in self.attachments:
            if not 0 <= a < self.size:
                raise GraphError(f"gadget {self.name!r}: attachment {a} out of range")
        deg = [0] * self.size
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        for a in self.attachments:
            deg[a] += 1
        if min(deg, default=0) < 3:
            raise GraphError(f"gadget {self.name!r} leaves a vertex of degree < 3")

    def automorphisms(self) -> list[tuple[int, ...]]:
        """Internal relabelings preserving the edges and the attachment multiset."""
        edge_set = {tuple(sorted(e)) for e in self.edges}
        counts = [self.attachments.count(i) for i in range(self.size)]
        out = []
        for perm in itertools.permutations(range(self.size)):
            if any(counts[perm[i]] != counts[i] for i in range(self.size)):
                continue
            if all(tuple(sorted((perm[a], perm[b]))) in edge_set for a, b in self.edges):
                out.append(perm)
        return out


def parse_gadgets(stream: TextIO | Iterable[str]) -> list[GadgetTemplate]:
    """Read stanzas of the form::

        gadget NAME
        vertices K
        edges 0-1 1-2 ...
        attach A B C D

    separated by blank lines; ``#`` starts a comment and a comment directly
    above a stanza becomes its note.
    """
    out: list[GadgetTemplate] = []
    fields: dict[str, str] = {}
    notes: list[str] = []
    start = 0

    def flush(line_no: int) -> None:
        if not fields:
            return
        try:
            name = fields["gadget"]
            size = int(fields["vertices"])
            edges = tuple(
                tuple(int(x) for x in tok.split("-")) for tok in fields.get("edges", "").split()
            )
            attach = tuple(int(x) for x in fields["attach"].split())
        except (KeyError, ValueError) as exc:
            raise GraphError(f"malformed gadget stanza starting at line {start}: {exc}") from None
        out.append(GadgetTemplate(name, size, edges, attach, " ".join(notes)))  # type: ignore[arg-type]
        fields.clear()
        notes.clear()

    for line_no, raw in enumerate(stream, 1):
        line = raw.strip()
        if not line:
            flush(line_no)
            continue
        if line.startswith("#"):
            if not fields:
                notes.append(line.lstrip("# "))
            continue
        key, _, value = line.partition(" ")
        if key == "gadget":
            flush(line_no)
            start = line_no
        if key not in ("gadget", "vertices", "edges", "attach"):
            raise GraphError(f"line {line_no}: unknown key {key!r}")
        fields[key] = value.strip()
    flush(-1)
    return out


def format_gadgets(gadgets: Sequence[GadgetTemplate]) -> str:
    stanzas = []
    for t in gadgets:
        lines = [f"# {t.note}"] if t.note else []
        lines += [
            f"gadget {t.name}",
            f"vertices {t.size}",
            "edges " + " ".join(f"{a}-{b}" for a, b in t.edges),
            "attach " + " ".join(str(a) for a in t.attachments),
        ]
        stanzas.append("\n".join(lines))
    return "\n\n".join(stanzas) + "\n"


def default_gadgets() -> list[GadgetTemplate]:
    """The two shipped degree-4 gadgets (reconstructions; see their notes)."""
    text = (resources.files("circflow") / "data" / "gadgets.txt").read_text()
    return parse_gadgets(text.splitlines())


def expand_into_gadget(g: Graph, v: int, gadget: GadgetTemplate, order: Sequence[int]) -> Graph:
    """Replace v by the gadget; the edge to ``order[i]`` goes to attachment i.

    Internal vertex 0 takes the id v, the others get ids ``n, n+1, ...``.
    """
    nbrs = set(g.neighbors(v))
    if len(nbrs) != 4 or set(order) != nbrs or len(order) != 4:
        raise GraphError(f"gadget expansion needs the 4 neighbors of vertex {v}")
    ids = [v] + [g.n + i for i in range(gadget.size - 1)]
    edges = [e for e in g.edges if v not in e]
    edges += [(ids[a], ids[b]) for a, b in gadget.edges]
    edges += [(ids[gadget.attachments[i]], w) for i, w in enumerate(order)]
    return Graph(g.n + gadget.size - 1, edges)


def family_C(g: Graph, v: int, gadgets: Sequence[GadgetTemplate]) -> list[Graph]:
    """Every gadget expansion at v, over all ways to hand out v's four edges.

    Assignments that differ by a symmetry of the gadget give the same graph up
    to renaming internal vertices; only the first of each is kept, and exact
    labeled duplicates are dropped as well.
    """
    nbrs = _incident_neighbors(g, v)
    if len(nbrs) != 4:
        raise GraphError(f"vertex {v} has degree {len(nbrs)}; gadget expansions need degree 4")
    out: list[Graph] = []
    seen: set[Graph] = set()
    for t in gadgets:
        autos = t.automorphisms()
        classes: set[tuple] = set()
        for order in itertools.permutations(nbrs):
            # multiset of (internal vertex, neighbor) pairs, up to gadget symmetry
            key = min(tuple(sorted((p[t.attachments[i]], w) for i, w in enumerate(order))) for p in autos)
            if key in classes:
                continue
            classes.add(key)
            h = expand_into_gadget(g, v, t, order)
            if h not in seen:
                seen.add(h)
                out.append(h)
    return out


def family_G(g: Graph, v: int, gadgets: Sequence[GadgetTemplate]) -> list[Graph]:
    return family_C(g, v, gadgets) + family_H(g, v)


# -- reduction ---------------------------------------------------------------


@dataclass
class ReductionNode:
    graph: Graph
    vertex: int | None = None  # expanded vertex; None at leaves
    children: list[ReductionNode] = field(default_factory=list)
    bridged: bool = False

    @property
    def is_leaf(self) -> bool:
        return self.vertex is None


@dataclass
class ReductionTree:
    root: ReductionNode
    leaves: list[ReductionNode]
    nodes: int

    def cubic_leaves(self) -> list[Graph]:
        return [leaf.graph for leaf in self.leaves if not leaf.bridged]


def _pick_vertex(g: Graph) -> int | None:
    best, pick = 3, None
    for v in range(g.n):
        if g.degree(v) > best:
            best, pick = g.degree(v), v
    return pick


def reduce_to_cubic(g: Graph, gadgets: Sequence[GadgetTemplate]) -> ReductionTree:
    """Expand maximum-degree vertices (lowest id first) until every leaf is cubic.

    Degree-4 vertices branch into :func:`family_G`, higher degrees into
    :func:`family_H`.  Graphs met twice are expanded once and shared.  Graphs
    with a bridge are flagged; they are still expanded so that all leaves are
    cubic, and their leaves stay bridged.
    """
    if g.min_degree() < 3:
        raise GraphError("reduction needs minimum degree >= 3")
    if not is_connected(g):
        raise GraphError("reduction needs a connected graph")
    memo: dict[Graph, ReductionNode] = {}
    leaves: list[ReductionNode] = []
    root = ReductionNode(g, bridged=bool(find_bridges(g)))
    memo[g] = root
    stack = [root]
    while stack:
        node = stack.pop()
        v = _pick_vertex(node.graph)
        if v is None:
            leaves.append(node)
            continue
        node.vertex = v
        d = node.graph.degree(v)
        kids = family_G(node.graph, v, gadgets) if d == 4 else family_H(node.graph, v)
        for h in kids:
            child = memo.get(h)
            if child is None:
                child = ReductionNode(h, bridged=node.bridged or bool(find_bridges(h)))
                memo[h] = child
                stack.append(child)
            node.children.append(child)
    leaves.sort(key=lambda leaf: (leaf.graph.n, leaf.graph.edges))
    return ReductionTree(root, leaves, len(memo))


@dataclass(frozen=True)
class Decision:
    """Outcome of :func:`decide_phi_ge_5`; truthy iff the answer is ``>= 5``."""

    at_least_five: bool
    witness: Graph | None  # a cubic leaf with flow number below 5
    tree: ReductionTree

    def __bool__(self) -> bool:
        return self.at_least_five


def decide_phi_ge_5(g: Graph, gadgets: Sequence[GadgetTemplate], jobs: int = 1) -> Decision:
    from .solver import phi_at_least

    tree = reduce_to_cubic(g, gadgets)
    for leaf in tree.leaves:
        if leaf.bridged:
            continue
        if not phi_at_least(leaf.graph, 5, jobs=jobs):
            return Decision(False, leaf.graph, tree)
    return Decision(True, None, tree)


def contract_edge(g: Graph, u: int, v: int) -> Graph:
    """Merge v into u; ids above v shift down by one."""
    if not g.has_edge(u, v):
        raise GraphError(f"({u}, {v}) is not an edge")
    if set(g.neighbors(u)) & set(g.neighbors(v)):
        raise GraphError("contraction would create a parallel edge")

    def rename(x: int) -> int:
        x = u if x == v else x
        return x - 1 if x > v else x

    edges = [(rename(a), rename(b)) for a, b in g.edges if {a, b} != {u, v}]
    return Graph(g.n - 1, edges)
