"""2-bisections of cubic graphs and the subset ratios they induce.

A 2-bisection colors the vertices black and white in equal numbers so that
every monochromatic component has at most two vertices.  For a vertex set X
the ratio is ``|boundary(X)| / |b_X - w_X|``; the max over bisections of the
min over subsets determines the circular flow number.

Subsets are passed around as integer bitmasks (bit ``v`` set iff ``v`` is in
the set); public functions also accept any iterable of vertex ids.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Sequence

from .graph import INFINITY, Graph, GraphError, components

SINGLETON_FLOOR = Fraction(3)


class Color(enum.IntEnum):
    BLACK = 0
    WHITE = 1


def as_mask(vertices: int | Iterable[int]) -> int:
    if isinstance(vertices, int):
        return vertices
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def mask_vertices(mask: int) -> frozenset[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return frozenset(out)


@dataclass(frozen=True)
class Bisection:
    """Black/white vertex coloring; use :func:`is_valid_bisection` to check it."""

    colors: tuple[Color, ...]
    black_mask: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        colors = tuple(Color(c) for c in self.colors)
        object.__setattr__(self, "colors", colors)
        mask = 0
        for v, c in enumerate(colors):
            if c is Color.BLACK:
                mask |= 1 << v
        object.__setattr__(self, "black_mask", mask)

    @classmethod
    def from_black_mask(cls, n: int, black: int) -> Bisection:
        return cls(tuple(Color.BLACK if (black >> v) & 1 else Color.WHITE for v in range(n)))

    @classmethod
    def from_string(cls, text: str) -> Bisection:
        """``"BBWW"`` style constructor."""
        lookup = {"B": Color.BLACK, "W": Color.WHITE}
        return cls(tuple(lookup[ch] for ch in text.upper()))

    @property
    def n(self) -> int:
        return len(self.colors)

    @property
    def white_mask(self) -> int:
        return ((1 << self.n) - 1) & ~self.black_mask

    @property
    def black(self) -> frozenset[int]:
        return mask_vertices(self.black_mask)

    @property
    def white(self) -> frozenset[int]:
        return mask_vertices(self.white_mask)

    def swapped(self) -> Bisection:
        return Bisection.from_black_mask(self.n, self.white_mask)

    def __str__(self) -> str:
        return "".join("B" if c is Color.BLACK else "W" for c in self.colors)


def _black_mask_of(g: Graph, colors: Bisection | Sequence[Color | int]) -> int:
    if isinstance(colors, Bisection):
        if colors.n != g.n:
            raise GraphError(f"bisection has {colors.n} colors for a graph on {g.n} vertices")
        return colors.black_mask
    if len(colors) != g.n:
        raise GraphError(f"{len(colors)} colors given for a graph on {g.n} vertices")
    return as_mask(v for v, c in enumerate(colors) if Color(c) is Color.BLACK)


def is_valid_bisection(g: Graph, colors: Bisection | Sequence[Color | int]) -> bool:
    """Balanced, and every monochromatic component has at most two vertices."""
    black = _black_mask_of(g, colors)
    full = (1 << g.n) - 1
    white = full & ~black
    if black.bit_count() != white.bit_count():
        return False
    masks = g.neighbor_masks
    for v in range(g.n):
        same = black if (black >> v) & 1 else white
        nb = masks[v] & same
        if nb.bit_count() > 1:
            return False
        if nb and (masks[nb.bit_length() - 1] & same).bit_count() > 1:
            return False
    return True


def iter_bisection_masks(g: Graph, prefix: Sequence[int] = ()) -> Iterator[int]:
    """Black masks of all 2-bisections with vertex 0 black, in lexicographic order.

    Vertices are colored in id order; a branch dies as soon as a monochromatic
    component would reach three vertices or the balance can no longer be met.
    ``prefix`` fixes the colors (0 black, 1 white) of the first vertices and is
    how work gets split between processes.
    """
    n = g.n
    if n == 0 or n % 2:
        return
    half = n // 2
    masks = g.neighbor_masks
    color = [-1] * n
    # same[v]: number of already colored same-colored neighbors of v
    same = [0] * n
    counts = [0, 0]

    def can_take(v: int, c: int) -> bool:
        if counts[c] == half:
            return False
        k = 0
        m = masks[v]
        while m:
            low = m & -m
            m ^= low
            w = low.bit_length() - 1
            if color[w] == c:
                k += 1
                if k > 1 or same[w] > 0:
                    return False
        return True

    def assign(v: int, c: int, delta: int) -> None:
        color[v] = c if delta > 0 else -1
        counts[c] += delta
        m = masks[v]
        k = 0
        while m:
            low = m & -m
            m ^= low
            w = low.bit_length() - 1
            if color[w] == c and w != v:
                same[w] += delta
                k += 1
        same[v] = k if delta > 0 else 0

    forced = list(prefix)
    if forced and forced[0] != 0:
        return
    if not forced:
        forced = [0]

    for v, c in enumerate(forced):
        if not can_take(v, c):
            return
        assign(v, c, 1)

    start = len(forced)
    if start == n:
        yield as_mask(v for v in range(n) if color[v] == 0)
        return

    # explicit stack of (vertex, next color to try)
    stack = [[start, 0]]
    while stack:
        frame = stack[-1]
        v, c = frame
        if color[v] != -1:
            assign(v, color[v], -1)
        if c > 1:
            stack.pop()
            continue
        frame[1] = c + 1
        if not can_take(v, c):
            continue
        assign(v, c, 1)
        if v + 1 == n:
            black = 0
            for w in range(n):
                if color[w] == 0:
                    black |= 1 << w
            yield black
        else:
            stack.append([v + 1, 0])


def enumerate_bisections(g: Graph, visit: Callable[[Bisection], object] | None = None) -> int:
    """Visit every 2-bisection with vertex 0 black exactly once; return the count."""
    if not g.is_cubic():
        raise GraphError("bisection enumeration requires a cubic graph")
    count = 0
    for black in iter_bisection_masks(g):
        count += 1
        if visit is not None:
            visit(Bisection.from_black_mask(g.n, black))
    return count


# -- subset evaluation ------------------------------------------------------


@dataclass(frozen=True)
class SubsetEvaluation:
    subset: frozenset[int]
    boundary_size: int
    delta: int
    ratio: Fraction | float  # INFINITY when delta == 0


def boundary_size(g: Graph, subset: int) -> int:
    masks = g.neighbor_masks
    outside = ~subset
    total = 0
    m = subset
    while m:
        low = m & -m
        m ^= low
        total += (masks[low.bit_length() - 1] & outside).bit_count()
    return total


def vertex_boundary(g: Graph, subset: int | Iterable[int]) -> frozenset[int]:
    """Vertices of the subset having a neighbor outside it."""
    return mask_vertices(_vertex_boundary_mask(g, as_mask(subset)))


def _vertex_boundary_mask(g: Graph, subset: int) -> int:
    masks = g.neighbor_masks
    out = 0
    m = subset
    while m:
        low = m & -m
        m ^= low
        if masks[low.bit_length() - 1] & ~subset:
            out |= low
    return out


def _outer_neighbors(g: Graph, subset: int) -> int:
    masks = g.neighbor_masks
    out = 0
    m = subset
    while m:
        low = m & -m
        m ^= low
        out |= masks[low.bit_length() - 1]
    return out & ~subset


def subset_delta(black: int, subset: int) -> int:
    b = (subset & black).bit_count()
    return abs(2 * b - subset.bit_count())


def subset_ratio(g: Graph, black: int, subset: int) -> Fraction | float:
    d = subset_delta(black, subset)
    if d == 0:
        return INFINITY
    return Fraction(boundary_size(g, subset), d)


def evaluate_subset(g: Graph, b: Bisection, subset: int | Iterable[int]) -> SubsetEvaluation:
    mask = as_mask(subset)
    if mask >> g.n:
        raise GraphError("subset contains vertices outside the graph")
    d = subset_delta(b.black_mask, mask)
    size = boundary_size(g, mask)
    return SubsetEvaluation(
        subset=mask_vertices(mask),
        boundary_size=size,
        delta=d,
        ratio=INFINITY if d == 0 else Fraction(size, d),
    )


def is_restricted_subset(g: Graph, black: int, subset: int) -> bool:
    """Both vertex boundaries monochromatic, of opposite colors.

    Size and connectivity conditions are checked separately.
    """
    full = (1 << g.n) - 1
    inner = _vertex_boundary_mask(g, subset)
    outer = _outer_neighbors(g, subset)
    if not inner or not outer:
        return False
    white = full & ~black
    return (inner & white == 0 and outer & black == 0) or (inner & black == 0 and outer & white == 0)


# -- connected subsets -------------------------------------------------------


def iter_connected_subsets(g: Graph, max_size: int, min_size: int = 2) -> Iterator[int]:
    """Every vertex set inducing a connected subgraph with size in range, exactly once.

    Sets are grown from their smallest vertex ``r`` using only vertices above
    ``r``; a vertex dropped from the extension set is excluded for the rest of
    that branch, which makes every set reachable along a single path.
    """
    n = g.n
    max_size = min(max_size, n)
    if max_size < 1:
        return
    masks = g.neighbor_masks
    for r in range(n):
        below = (1 << (r + 1)) - 1
        root = 1 << r
        if min_size <= 1:
            yield root
        if max_size == 1:
            continue
        # frames: (subset, extension, excluded, size)
        stack = [(root, masks[r] & ~below, below, 1)]
        while stack:
            subset, ext, excluded, size = stack.pop()
            while ext:
                low = ext & -ext
                ext ^= low
                grown = subset | low
                if size + 1 >= min_size:
                    yield grown
                if size + 1 < max_size:
                    new = masks[low.bit_length() - 1] & ~grown & ~excluded & ~ext
                    stack.append((grown, ext | new, excluded | low, size + 1))
                excluded |= low


def enumerate_connected_subsets(
    g: Graph, max_size: int, visit: Callable[[frozenset[int]], object] | None = None
) -> int:
    """Visit each connected vertex set with ``2 <= |X| <= max_size``; return the count."""
    if max_size > g.n:
        raise GraphError(f"max_size {max_size} exceeds the order {g.n}")
    count = 0
    for mask in iter_connected_subsets(g, max_size):
        count += 1
        if visit is not None:
            visit(mask_vertices(mask))
    return count


# -- restricted minimum ------------------------------------------------------


@dataclass(frozen=True)
class RestrictedMinimum:
    """Result of a restricted subset search.

    ``witness`` is a restricted set achieving ``ratio``; it is ``None`` when the
    singleton floor of 3 is the minimum.  ``exact`` is False when the search
    stopped early at an abort threshold, in which case ``ratio`` is only an
    upper bound that does not exceed the threshold.
    """

    ratio: Fraction
    witness: int | None
    exact: bool = True

    @property
    def witness_vertices(self) -> frozenset[int] | None:
        return None if self.witness is None else mask_vertices(self.witness)


def _search_by_enumeration(g: Graph, black: int, abort_at: Fraction | None) -> RestrictedMinimum:
    n = g.n
    full = (1 << n) - 1
    white = full & ~black
    masks = g.neighbor_masks
    best = SINGLETON_FLOOR
    witness = None
    if abort_at is not None and best <= abort_at:
        return RestrictedMinimum(best, None, exact=False)
    for subset in iter_connected_subsets(g, n // 2):
        b = (subset & black).bit_count()
        d = abs(2 * b - subset.bit_count())
        if d == 0:
            continue
        inner = 0
        outer = 0
        cut = 0
        m = subset
        while m:
            low = m & -m
            m ^= low
            out = masks[low.bit_length() - 1] & ~subset
            if out:
                inner |= low
                outer |= out
                cut += out.bit_count()
        if not ((inner & white == 0 and outer & black == 0) or (inner & black == 0 and outer & white == 0)):
            continue
        # compare cut/d < best without building a Fraction
        if cut * best.denominator < best.numerator * d:
            best = Fraction(cut, d)
            witness = subset
            if abort_at is not None and best <= abort_at:
                return RestrictedMinimum(best, witness, exact=False)
    return RestrictedMinimum(best, witness)


def restricted_minimum(
    g: Graph,
    b: Bisection | int,
    abort_at: Fraction | None = None,
    method: str = "cut",
) -> RestrictedMinimum:
    """Minimum ratio over the restricted subset family, floored at 3.

    The family is: ``2 <= |X| <= n/2``, ``G[X]`` connected, ``delta(X) > 0``,
    and the two vertex boundaries of X and of its complement monochromatic
    with opposite colors.

    ``method="enumerate"`` walks all connected subsets literally.
    ``method="cut"`` (default) computes the same minimum with parametric
    minimum cuts; see :mod:`circflow.closure`.
    """
    black = b.black_mask if isinstance(b, Bisection) else b
    if abort_at is not None:
        abort_at = Fraction(abort_at)
    if method == "enumerate":
        return _search_by_enumeration(g, black, abort_at)
    if method == "cut":
        from .closure import restricted_minimum_by_cut

        return restricted_minimum_by_cut(g, black, abort_at)
    raise ValueError(f"unknown method {method!r}")


def min_restricted_ratio(
    g: Graph, b: Bisection | int, abort_at: Fraction | None = None, method: str = "cut"
) -> Fraction:
    return restricted_minimum(g, b, abort_at, method).ratio


# -- brute force -------------------------------------------------------------


def unrestricted_minimum(g: Graph, black: int) -> tuple[Fraction | float, int | None]:
    """Minimum ratio over every subset with delta > 0, by exhaustive numpy sweep."""
    from .bruteforce import min_ratio_all_subsets

    return min_ratio_all_subsets(g, black)


def is_orientable(g: Graph, b: Bisection) -> bool:
    """Every subset has ratio >= 1.

    Decided by one minimum cut: with unit edge capacities, source arcs of
    capacity 1 into black vertices and sink arcs of capacity 1 out of white
    ones, a source side X costs ``|black| + |d(X)| - (b_X - w_X)``.  Sign
    symmetry under complement covers the case ``w_X > b_X``.
    """
    import networkx as nx

    black = _black_mask_of(g, b)
    net = nx.DiGraph()
    source, sink = "s", "t"
    net.add_nodes_from([source, sink])
    for u, v in g.edges:
        net.add_edge(u, v, capacity=1)
        net.add_edge(v, u, capacity=1)
    for v in range(g.n):
        if black >> v & 1:
            net.add_edge(source, v, capacity=1)
        else:
            net.add_edge(v, sink, capacity=1)
    value = nx.maximum_flow_value(net, source, sink)
    return value >= black.bit_count()
