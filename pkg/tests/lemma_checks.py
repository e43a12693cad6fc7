"""Exhaustive checks of the bisection lemmas on small graphs.

Every check sweeps all 2^n subsets with numpy, for every 2-bisection of the
graph, and returns the number of violations together with how many instances
actually exercised the property (so a vacuous pass is visible).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from circflow.bisection import iter_bisection_masks
from circflow.graph import Graph, components

BIG = np.iinfo(np.int64).max


@dataclass
class LemmaReport:
    violations: int = 0
    exercised: int = 0
    example: object = None

    def add(self, other: LemmaReport) -> None:
        self.violations += other.violations
        self.exercised += other.exercised
        if self.example is None:
            self.example = other.example


class Sweep:
    """Per-graph tables over all subsets; per-bisection ratios on demand."""

    def __init__(self, g: Graph):
        self.g = g
        n = g.n
        self.full = (1 << n) - 1
        self.x = np.arange(1 << n, dtype=np.int64)
        self.boundary = np.zeros(1 << n, dtype=np.int64)
        for u, v in g.edges:
            self.boundary += ((self.x >> u) ^ (self.x >> v)) & 1
        self.size = np.bitwise_count(self.x).astype(np.int64)
        # vertex boundary: members with a neighbor outside
        vb = np.zeros(1 << n, dtype=np.int64)
        for v in range(n):
            nb = g.neighbor_mask(v)
            inside = (self.x >> v) & 1
            leaks = (self.x & nb) != nb
            vb |= np.where((inside == 1) & leaks, 1 << v, 0)
        self.vboundary = vb
        self.scale = math.lcm(*range(1, n + 1))

    def ratios(self, black: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(signed imbalance b - w, delta, exact ratio scaled by lcm(1..n) or BIG)."""
        b = np.bitwise_count(self.x & black).astype(np.int64)
        signed = 2 * b - self.size
        delta = np.abs(signed)
        scaled = np.full(delta.shape, BIG, dtype=np.int64)
        ok = delta > 0
        scaled[ok] = self.boundary[ok] * self.scale // delta[ok]
        return signed, delta, scaled


def complement_equality(g: Graph) -> LemmaReport:
    sw = Sweep(g)
    rep = LemmaReport()
    for black in iter_bisection_masks(g):
        _, delta, scaled = sw.ratios(black)
        comp = sw.full ^ sw.x
        bad = np.nonzero(scaled != scaled[comp])[0]
        # exact check also on the unscaled numbers
        bad2 = np.nonzero((sw.boundary != sw.boundary[comp]) | (delta != delta[comp]))[0]
        rep.exercised += int(sw.x.size)
        rep.violations += int(bad.size + bad2.size)
    return rep


def _component_table(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    """Pairs (subset, component) for every subset inducing a disconnected graph."""
    owners: list[int] = []
    parts: list[int] = []
    for x in range(1, 1 << g.n):
        comps = components(g, x)
        if len(comps) > 1:
            owners.extend([x] * len(comps))
            parts.extend(comps)
    return np.array(owners, dtype=np.int64), np.array(parts, dtype=np.int64)


def disconnected_domination(g: Graph) -> LemmaReport:
    """Some component of a disconnected X has ratio <= ratio(X)."""
    sw = Sweep(g)
    owners, parts = _component_table(g)
    rep = LemmaReport()
    if owners.size == 0:
        return rep
    starts = np.flatnonzero(np.r_[True, owners[1:] != owners[:-1]])
    subsets = owners[starts]
    for black in iter_bisection_masks(g):
        _, _, scaled = sw.ratios(black)
        best_part = np.minimum.reduceat(scaled[parts], starts)
        own = scaled[subsets]
        relevant = own < BIG
        rep.exercised += int(relevant.sum())
        bad = relevant & (best_part > own)
        if bad.any():
            rep.violations += int(bad.sum())
            rep.example = rep.example or (black, int(subsets[np.argmax(bad)]))
    return rep


def _good_sets(sw: Sweep, black: int):
    signed, delta, scaled = sw.ratios(black)
    best = scaled.min()
    good = np.flatnonzero(scaled == best)
    return signed, delta, good


def monochromatic_boundary(g: Graph) -> LemmaReport:
    """Good X with b > w and ratio > 1 has an all-black vertex boundary."""
    sw = Sweep(g)
    rep = LemmaReport()
    for black in iter_bisection_masks(g):
        signed, delta, good = _good_sets(sw, black)
        white = sw.full ^ black
        for x in good:
            if signed[x] <= 0 or sw.boundary[x] <= delta[x]:
                continue
            rep.exercised += 1
            if int(sw.vboundary[x]) & white:
                rep.violations += 1
                rep.example = rep.example or (black, int(x))
    return rep


def ratio_at_most_one(g: Graph) -> LemmaReport:
    """Good X with b > w and ratio <= 1 contains X' with black boundary and ratio <= 1."""
    sw = Sweep(g)
    rep = LemmaReport()
    for black in iter_bisection_masks(g):
        signed, delta, good = _good_sets(sw, black)
        white = sw.full ^ black
        for x in good:
            if signed[x] <= 0 or sw.boundary[x] > delta[x]:
                continue
            rep.exercised += 1
            rep.example = rep.example or (black, int(x))
            x = int(x)
            sub = x
            found = False
            while sub:
                if (
                    int(sw.vboundary[sub]) & white == 0
                    and delta[sub] > 0
                    and sw.boundary[sub] <= delta[sub]
                ):
                    found = True
                    break
                sub = (sub - 1) & x
            if not found:
                rep.violations += 1
    return rep


def first_non_orientable(graphs) -> tuple[Graph, int, int] | None:
    """First (graph, black mask, subset) with a subset of ratio < 1."""
    for g in graphs:
        sw = Sweep(g)
        for black in iter_bisection_masks(g):
            _, delta, _ = sw.ratios(black)
            bad = np.flatnonzero((delta > 0) & (sw.boundary < delta))
            if bad.size:
                return g, black, int(bad[0])
    return None
