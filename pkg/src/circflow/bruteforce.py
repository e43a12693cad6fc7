"""Exhaustive subset sweeps used as oracles (cost 2^n per bisection)."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .graph import INFINITY, Graph, GraphError

MAX_BRUTE_ORDER = 24


class SubsetTable:
    """Boundary sizes of all 2^n vertex subsets of a fixed graph."""

    def __init__(self, g: Graph):
        if g.n > MAX_BRUTE_ORDER:
            raise GraphError(f"exhaustive subset sweep limited to {MAX_BRUTE_ORDER} vertices, got {g.n}")
        self.n = g.n
        self.subsets = np.arange(1 << g.n, dtype=np.int64)
        boundary = np.zeros(1 << g.n, dtype=np.int64)
        for u, v in g.edges:
            boundary += ((self.subsets >> u) ^ (self.subsets >> v)) & 1
        self.boundary = boundary
        self.sizes = np.bitwise_count(self.subsets).astype(np.int64)
        # scaling by lcm(1..n) makes boundary/delta an exact integer
        self.scale = math.lcm(*range(1, g.n + 1)) if g.n else 1

    def min_ratio(self, black: int) -> tuple[Fraction | float, int | None]:
        b = np.bitwise_count(self.subsets & black).astype(np.int64)
        delta = np.abs(2 * b - self.sizes)
        scaled = np.full(delta.shape, np.iinfo(np.int64).max, dtype=np.int64)
        ok = delta > 0
        scaled[ok] = self.boundary[ok] * self.scale // delta[ok]
        best = int(np.argmin(scaled))
        if not ok[best]:
            return INFINITY, None
        return Fraction(int(self.boundary[best]), int(delta[best])), best


def min_ratio_all_subsets(g: Graph, black: int) -> tuple[Fraction | float, int | None]:
    """Minimum ratio over every subset with nonzero imbalance, with a witness mask."""
    return SubsetTable(g).min_ratio(black)
