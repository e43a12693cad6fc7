"""Circular flow numbers of bridgeless cubic graphs.

The max over 2-bisections of the restricted minimum ratio is the max-min
fraction ``m``; when ``m > 5/3`` the circular flow number is ``2m / (m - 1)``,
otherwise only ``>= 5`` can be concluded.  Bisections whose minimum cannot
beat the best value seen so far are discarded by a threshold test, so the
exact minimum is computed only for bisections that raise the running maximum.
"""

from __future__ import annotations

import itertools
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .bisection import (
    Bisection,
    Color,
    iter_bisection_masks,
    mask_vertices,
    restricted_minimum,
)
from .graph import Graph, GraphError, find_bridges, is_connected

FIVE_THIRDS = Fraction(5, 3)


class BridgedGraphError(GraphError):
    """The graph has a bridge, so its circular flow number is infinite."""


class SolverTimeout(RuntimeError):
    pass


@dataclass(frozen=True)
class MaxMinCertificate:
    """An optimal bisection and a restricted set attaining its minimum.

    ``witness_subset`` is ``None`` when the singleton floor of 3 is the minimum.
    """

    best_bisection: Bisection
    best_min: Fraction
    witness_subset: frozenset[int] | None


@dataclass(frozen=True)
class Exact:
    value: Fraction
    certificate: MaxMinCertificate | None = None

    def __str__(self) -> str:
        return format_fraction(self.value)


@dataclass(frozen=True)
class AtLeastFive:
    def __str__(self) -> str:
        return ">=5"


CfnResult = Union[Exact, AtLeastFive]
AT_LEAST_FIVE = AtLeastFive()


def format_fraction(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def fraction_to_cfn(m: Fraction) -> Fraction:
    """``2m / (m - 1)``, the circular flow number for max-min fraction ``m``."""
    m = Fraction(m)
    if m <= FIVE_THIRDS:
        raise ValueError(f"max-min fraction {m} <= 5/3 only certifies a flow number of at least 5")
    return 2 * m / (m - 1)


def cfn_to_fraction(r: Fraction) -> Fraction:
    """``r / (r - 2)``, the inverse of :func:`fraction_to_cfn`."""
    r = Fraction(r)
    if r <= 2:
        raise ValueError(f"flow value {r} must exceed 2")
    return r / (r - 2)


def check_solver_input(g: Graph) -> None:
    if not g.is_cubic():
        raise GraphError("the solver requires a cubic graph")
    if not is_connected(g):
        raise GraphError("the solver requires a connected graph")
    bridges = find_bridges(g)
    if bridges:
        u, v = g.edges[bridges[0]]
        raise BridgedGraphError(f"edge ({u}, {v}) is a bridge; the circular flow number is infinite")


# -- work splitting ----------------------------------------------------------


def _prefixes(n: int, depth: int) -> list[tuple[int, ...]]:
    depth = max(1, min(depth, n))
    return [(0,) + rest for rest in itertools.product((0, 1), repeat=depth - 1)]


def _split_depth(jobs: int) -> int:
    # about eight chunks per worker, balanced or not
    return 1 + max(0, (8 * jobs - 1).bit_length())


@dataclass(frozen=True)
class _ChunkResult:
    best: Fraction | None
    black: int | None
    witness: int | None
    visited: int


def _max_min_chunk(
    g: Graph, prefix: Sequence[int], floor: Fraction | None, method: str, deadline: float | None
) -> _ChunkResult:
    best = floor
    found: Fraction | None = None
    black_best = None
    witness = None
    visited = 0
    for black in iter_bisection_masks(g, prefix):
        visited += 1
        if deadline is not None and time.monotonic() > deadline:
            raise SolverTimeout
        res = restricted_minimum(g, black, abort_at=best, method=method)
        if best is None or res.ratio > best:
            best = found = res.ratio
            black_best, witness = black, res.witness
    return _ChunkResult(found, black_best, witness, visited)


def _run_chunks(fn, g: Graph, args: tuple, jobs: int) -> list:
    if jobs <= 1:
        return [fn(g, (), *args)]
    prefixes = _prefixes(g.n, _split_depth(jobs))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(fn, g, p, *args) for p in prefixes]
        return [f.result() for f in futures]


def default_jobs() -> int:
    raw = os.environ.get("CFN_JOBS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


# -- public API --------------------------------------------------------------


def max_min_fraction(
    g: Graph,
    floor: Fraction | None = None,
    jobs: int = 1,
    method: str = "cut",
    timeout: float | None = None,
) -> tuple[Fraction | None, MaxMinCertificate | None]:
    """Max over 2-bisections of the restricted minimum.

    Returns ``(None, None)`` when there is no 2-bisection.  With ``floor`` set,
    bisections whose minimum is ``<= floor`` are not evaluated exactly; if no
    bisection beats the floor the result is ``(None, None)`` as well.
    """
    check_solver_input(g)
    deadline = None if timeout is None else time.monotonic() + timeout
    chunks = _run_chunks(_max_min_chunk, g, (floor, method, deadline), jobs)
    best: _ChunkResult | None = None
    for chunk in chunks:  # prefix order equals sequential order, so ties keep the first
        if chunk.best is not None and (best is None or chunk.best > best.best):
            best = chunk
    if best is None:
        return None, None
    cert = MaxMinCertificate(
        best_bisection=Bisection.from_black_mask(g.n, best.black),
        best_min=best.best,
        witness_subset=None if best.witness is None else mask_vertices(best.witness),
    )
    return best.best, cert


def circular_flow_number(
    g: Graph, jobs: int = 1, method: str = "cut", timeout: float | None = None
) -> CfnResult:
    """Exact value when below 5, else :data:`AT_LEAST_FIVE`.

    Raises :class:`BridgedGraphError` for graphs with a bridge and
    :class:`GraphError` for non-cubic or disconnected input.
    """
    m, cert = max_min_fraction(g, floor=FIVE_THIRDS, jobs=jobs, method=method, timeout=timeout)
    if m is None:
        return AT_LEAST_FIVE
    return Exact(fraction_to_cfn(m), cert)


def _bound_chunk(
    g: Graph, prefix: Sequence[int], limit: Fraction, method: str, deadline: float | None
) -> bool:
    if method == "cut":
        from .closure import has_ratio_at_most

        def at_most(black: int) -> bool:
            return has_ratio_at_most(g, black, limit)
    else:

        def at_most(black: int) -> bool:
            return restricted_minimum(g, black, abort_at=limit, method=method).ratio <= limit

    for black in iter_bisection_masks(g, prefix):
        if deadline is not None and time.monotonic() > deadline:
            raise SolverTimeout
        if not at_most(black):
            return False
    return True


def phi_at_least(
    g: Graph, r: Fraction | int | str, jobs: int = 1, method: str = "cut", timeout: float | None = None
) -> bool:
    """True iff the circular flow number is at least ``r`` (``2 < r <= 5``).

    A bisection whose minimum equals ``r/(r-2)`` exactly counts toward ``>= r``.
    """
    r = Fraction(r)
    if r <= 2 or r > 5:
        raise ValueError(f"bound {r} outside (2, 5]")
    check_solver_input(g)
    deadline = None if timeout is None else time.monotonic() + timeout
    limit = cfn_to_fraction(r)
    return all(_run_chunks(_bound_chunk, g, (limit, method, deadline), jobs))


# -- naive oracle ------------------------------------------------------------

NAIVE_MAX_ORDER = 22


def naive_max_min_fraction(g: Graph) -> Fraction | AtLeastFive:
    """Max over 2-bisections of the minimum ratio over all subsets, no pruning.

    Returns :data:`AT_LEAST_FIVE` only when no 2-bisection exists; otherwise
    the exact max-min value, which may itself be ``<= 5/3``.
    """
    from .bruteforce import SubsetTable

    if not g.is_cubic():
        raise GraphError("the oracle requires a cubic graph")
    if g.n > NAIVE_MAX_ORDER:
        raise GraphError(f"naive oracle limited to {NAIVE_MAX_ORDER} vertices, got {g.n}")
    table = SubsetTable(g)
    best: Fraction | None = None
    for black in iter_bisection_masks(g):
        value, _ = table.min_ratio(black)
        if best is None or value > best:
            best = value
    return AT_LEAST_FIVE if best is None else best


def max_min_or_marker(g: Graph, method: str = "cut") -> Fraction | AtLeastFive:
    """The pruned counterpart of :func:`naive_max_min_fraction`, for comparisons."""
    m, _ = max_min_fraction(g, method=method)
    return AT_LEAST_FIVE if m is None else m


# -- flows -------------------------------------------------------------------


@dataclass(frozen=True)
class FlowAssignment:
    """Per-edge orientation ``(tail, head)`` and positive value, indexed by edge id."""

    orientation: tuple[tuple[int, int], ...]
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.orientation) != len(self.values):
            raise ValueError("orientation and values differ in length")
        if any(Fraction(x) <= 0 for x in self.values):
            raise ValueError("flow values must be positive")
        object.__setattr__(self, "values", tuple(Fraction(x) for x in self.values))

    def reversed(self) -> FlowAssignment:
        return FlowAssignment(tuple((v, u) for u, v in self.orientation), self.values)


def _check_assignment(g: Graph, fa: FlowAssignment) -> None:
    if len(fa.orientation) != g.m:
        raise GraphError(f"flow covers {len(fa.orientation)} of {g.m} edges")
    for eid, (u, v) in enumerate(fa.orientation):
        if (min(u, v), max(u, v)) != g.edges[eid]:
            raise GraphError(f"edge {eid} oriented as ({u}, {v}) but is {g.edges[eid]}")


def verify_circular_flow(g: Graph, fa: FlowAssignment, r: Fraction | int) -> bool:
    """Values in ``[1, r-1]`` and conservation at every vertex."""
    _check_assignment(g, fa)
    r = Fraction(r)
    net = [Fraction(0)] * g.n
    for (u, v), x in zip(fa.orientation, fa.values):
        if not 1 <= x <= r - 1:
            return False
        net[u] -= x
        net[v] += x
    return all(x == 0 for x in net)


def bisection_from_flow(g: Graph, fa: FlowAssignment, r: Fraction | int) -> Bisection:
    """Black for in-degree 2, white for in-degree 1."""
    r = Fraction(r)
    if r >= 5:
        raise ValueError("flows with r >= 5 need not induce a 2-bisection")
    if not g.is_cubic():
        raise GraphError("bisection_from_flow requires a cubic graph")
    if not verify_circular_flow(g, fa, r):
        raise ValueError(f"assignment is not a circular {r}-flow")
    indeg = [0] * g.n
    for _, v in fa.orientation:
        indeg[v] += 1
    colors = []
    for v, d in enumerate(indeg):
        if d not in (1, 2):
            raise ValueError(f"vertex {v} has in-degree {d}")
        colors.append(Color.BLACK if d == 2 else Color.WHITE)
    return Bisection(tuple(colors))


def search_circular_flow(
    g: Graph, r: Fraction | int, denominator: int = 1, max_edges: int = 12
) -> FlowAssignment | None:
    """Exhaustive search for a circular r-flow with values in ``(1/denominator)Z``.

    Values on the edges outside a spanning forest are chosen freely from the
    grid (with a sign for the direction); the forest values follow from
    conservation.  Meant for test fixtures on graphs with a handful of edges.
    """
    r = Fraction(r)
    if g.m > max_edges:
        raise GraphError(f"flow search limited to {max_edges} edges")
    parent_edge = [-1] * g.n
    parent = [-1] * g.n
    order: list[int] = []
    seen = [False] * g.n
    tree: set[int] = set()
    for root in range(g.n):
        if seen[root]:
            continue
        seen[root] = True
        stack = [root]
        while stack:
            v = stack.pop()
            order.append(v)
            for w in g.adjacency[v]:
                if not seen[w]:
                    seen[w] = True
                    parent[w] = v
                    eid = g.edge_id(v, w)
                    parent_edge[w] = eid
                    tree.add(eid)
                    stack.append(w)
    cotree = [e for e in range(g.m) if e not in tree]
    steps = int((r - 2) * denominator)
    grid = [1 + Fraction(i, denominator) for i in range(steps + 1)]
    signed = grid + [-x for x in grid]
    for choice in itertools.product(signed, repeat=len(cotree)):
        # flow[e] is signed relative to the stored (u, v) direction u -> v
        flow: list[Fraction | None] = [None] * g.m
        excess = [Fraction(0)] * g.n
        for eid, x in zip(cotree, choice):
            u, v = g.edges[eid]
            flow[eid] = x
            excess[u] -= x
            excess[v] += x
        ok = True
        for v in reversed(order):
            eid = parent_edge[v]
            if eid < 0:
                if excess[v] != 0:
                    ok = False
                    break
                continue
            u, w = g.edges[eid]
            # push the excess of v to its parent along the tree edge
            x = excess[v] if w == parent[v] else -excess[v]
            if not 1 <= abs(x) <= r - 1:
                ok = False
                break
            flow[eid] = x
            excess[u] -= x
            excess[w] += x
        if not ok:
            continue
        orientation = []
        values = []
        for eid, x in enumerate(flow):
            u, v = g.edges[eid]
            orientation.append((u, v) if x > 0 else (v, u))
            values.append(abs(x))
        fa = FlowAssignment(tuple(orientation), tuple(values))
        if verify_circular_flow(g, fa, r):
            return fa
    return None


__all__ = [
    "AT_LEAST_FIVE",
    "AtLeastFive",
    "BridgedGraphError",
    "CfnResult",
    "Exact",
    "FlowAssignment",
    "MaxMinCertificate",
    "SolverTimeout",
    "bisection_from_flow",
    "cfn_to_fraction",
    "circular_flow_number",
    "fraction_to_cfn",
    "max_min_fraction",
    "naive_max_min_fraction",
    "phi_at_least",
    "search_circular_flow",
    "verify_circular_flow",
]
