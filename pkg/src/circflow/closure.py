"""Restricted minimum via parametric minimum cuts.

Call a vertex set X *black-sided* when every edge leaving X goes from a black
vertex of X to a white vertex outside X, and *white-sided* symmetrically.
The restricted family consists exactly of the connected black- or white-sided
sets of size at most n/2 with a nonzero imbalance.  Dropping the size and
connectivity conditions does not change the minimum below the singleton floor:

* every component of a black-sided set is black-sided, and the best component
  has a ratio no larger than the whole set;
* the complement of a black-sided set is white-sided with the same ratio, so a
  set larger than n/2 can be traded for a component of its complement.

Black-sided sets are the closed sets of a small digraph: monochromatic edges
tie their ends together, and on a black-white edge the white end drags in the
black end.  For ``t = p/q`` the question "is there a black-sided X with
``|boundary(X)| < t * (b_X - w_X)``" becomes a minimum cut: source arcs of
capacity ``p`` to black vertices, sink arcs of capacity ``p`` from white
vertices, capacity ``q`` on the black-to-white direction of each black-white
edge and infinite capacity on the reverse.  The cut value minus ``p * |B|``
equals ``q * boundary(X) - p * (b_X - w_X)`` for the source side X.
Dinkelbach iteration on ``t`` then finds the exact minimum in a few cuts.
White-sided sets use the same network with the edge arcs reversed; their
imbalance is measured as ``b_X - w_X`` as well, because the complement of a
white-sided set with ``b_X < w_X`` is a black-sided set with ``b_X > w_X``.

Monochromatic pairs must lie on the same side, so they are merged into one
node before the cut is computed.
"""

from __future__ import annotations

from collections import deque
from fractions import Fraction

from .bisection import SINGLETON_FLOOR, RestrictedMinimum, boundary_size, subset_delta
from .graph import Graph, components

_INF = 1 << 60


class _Network:
    """Compressed closure network for one bisection."""

    __slots__ = ("size", "members", "weight", "is_black", "pairs", "n", "black_total")

    def __init__(self, g: Graph, black: int):
        n = g.n
        masks = g.neighbor_masks
        white = ((1 << n) - 1) & ~black
        node_of = [-1] * n
        members: list[int] = []
        for v in range(n):
            if node_of[v] != -1:
                continue
            same = black if (black >> v) & 1 else white
            group = 1 << v
            partner = masks[v] & same
            while partner:
                low = partner & -partner
                partner ^= low
                group |= low
            idx = len(members)
            members.append(group)
            m = group
            while m:
                low = m & -m
                m ^= low
                node_of[low.bit_length() - 1] = idx
        weights = [0] * len(members)
        is_black = [False] * len(members)
        for i, group in enumerate(members):
            weights[i] = group.bit_count()
            is_black[i] = bool(group & black)
        pair_count: dict[tuple[int, int], int] = {}
        for u, v in g.edges:
            a, b = node_of[u], node_of[v]
            if a == b:
                continue
            if not is_black[a]:
                a, b = b, a
            pair_count[(a, b)] = pair_count.get((a, b), 0) + 1
        self.size = len(members)
        self.members = members
        self.weight = weights
        self.is_black = is_black
        self.pairs = list(pair_count.items())
        self.n = n
        self.black_total = black.bit_count()

    def min_cut(self, p: int, q: int, white_sided: bool) -> tuple[int, int]:
        """Minimum of ``q*boundary - p*(b - w)`` over closed sets, and a minimal minimizer."""
        k = self.size
        s, t = k, k + 1
        total = k + 2
        # arc arrays: head, capacity, index of reverse arc
        head: list[int] = []
        cap: list[int] = []
        adj: list[list[int]] = [[] for _ in range(total)]

        def arc(u: int, v: int, c: int, rc: int = 0) -> None:
            adj[u].append(len(head))
            head.append(v)
            cap.append(c)
            adj[v].append(len(head))
            head.append(u)
            cap.append(rc)

        for i in range(k):
            if self.is_black[i]:
                arc(s, i, p * self.weight[i])
            else:
                arc(i, t, p * self.weight[i])
        for (b, w), count in self.pairs:
            if white_sided:
                arc(w, b, q * count, _INF)
            else:
                arc(b, w, q * count, _INF)

        flow = 0
        while True:
            level = [-1] * total
            level[s] = 0
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for a in adj[u]:
                    if cap[a] and level[head[a]] < 0:
                        level[head[a]] = level[u] + 1
                        queue.append(head[a])
            if level[t] < 0:
                break
            ptr = [0] * total
            while True:
                pushed = _augment(s, t, adj, head, cap, level, ptr)
                if not pushed:
                    break
                flow += pushed
        # residual reachability from the source gives the minimal source side
        seen = [False] * total
        seen[s] = True
        stack = [s]
        while stack:
            u = stack.pop()
            for a in adj[u]:
                if cap[a] and not seen[head[a]]:
                    seen[head[a]] = True
                    stack.append(head[a])
        side = 0
        for i in range(k):
            if seen[i]:
                side |= self.members[i]
        return flow - p * self.black_total, side


def _augment(s, t, adj, head, cap, level, ptr) -> int:
    """One blocking-flow augmentation along level arcs (iterative DFS)."""
    path: list[int] = []
    u = s
    while True:
        if u == t:
            amount = min(cap[a] for a in path)
            for a in path:
                cap[a] -= amount
                cap[a ^ 1] += amount
            return amount
        arcs = adj[u]
        advanced = False
        while ptr[u] < len(arcs):
            a = arcs[ptr[u]]
            v = head[a]
            if cap[a] and level[v] == level[u] + 1:
                path.append(a)
                u = v
                advanced = True
                break
            ptr[u] += 1
        if advanced:
            continue
        if u == s:
            return 0
        level[u] = -1  # dead end
        a = path.pop()
        u = head[a ^ 1]
        ptr[u] += 1


def _best_part(g: Graph, black: int, subset: int) -> tuple[Fraction | None, int]:
    """Best connected piece of a closed set, folded into size <= n/2."""
    best: Fraction | None = None
    best_mask = 0
    for comp in components(g, subset):
        d = subset_delta(black, comp)
        if d == 0:
            continue
        ratio = Fraction(boundary_size(g, comp), d)
        if best is None or ratio < best:
            best, best_mask = ratio, comp
    if best is None:
        return None, 0
    n = g.n
    if best_mask.bit_count() > n // 2:
        rest = ((1 << n) - 1) & ~best_mask
        inner, inner_mask = _best_part(g, black, rest)
        if inner is not None and inner <= best:
            return inner, inner_mask
        raise AssertionError("complement of a closed set produced no piece with a smaller ratio")
    return best, best_mask


def _strictly_below(net: _Network, t: Fraction) -> tuple[int, bool] | None:
    """A closed set with ratio < t (mask, white_sided), or None."""
    p, q = t.numerator, t.denominator
    for white_sided in (False, True):
        value, side = net.min_cut(p, q, white_sided)
        if value < 0:
            return side, white_sided
    return None


def restricted_minimum_by_cut(g: Graph, black: int, abort_at: Fraction | None = None) -> RestrictedMinimum:
    net = _Network(g, black)
    n = g.n
    if abort_at is not None:
        if SINGLETON_FLOOR <= abort_at:
            return RestrictedMinimum(SINGLETON_FLOOR, None, exact=False)
        # ratios have denominators <= n, so "< probe" is the same as "<= abort_at"
        probe = abort_at + Fraction(1, 2 * n * abort_at.denominator)
        hit = _strictly_below(net, probe)
        if hit is not None:
            ratio, mask = _best_part(g, black, hit[0])
            return RestrictedMinimum(ratio, mask, exact=False)
    best = SINGLETON_FLOOR
    witness = None
    while True:
        hit = _strictly_below(net, best)
        if hit is None:
            return RestrictedMinimum(best, witness)
        ratio, mask = _best_part(g, black, hit[0])
        if ratio is None or ratio >= best:
            raise AssertionError("parametric cut failed to improve the ratio")
        best, witness = ratio, mask


def has_ratio_at_most(g: Graph, black: int, limit: Fraction) -> bool:
    """True iff some restricted set (or the singleton floor) has ratio <= limit."""
    if SINGLETON_FLOOR <= limit:
        return True
    probe = limit + Fraction(1, 2 * g.n * limit.denominator)
    return _strictly_below(_Network(g, black), probe) is not None
