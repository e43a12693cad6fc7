from __future__ import annotations

import io
import random
from fractions import Fraction

import networkx as nx
import pytest

from builders import k4, k33, prism
from circflow.expansion import (
    GadgetTemplate,
    contract_edge,
    decide_phi_ge_5,
    default_gadgets,
    expand_into_gadget,
    expand_into_k2,
    family_C,
    family_G,
    family_H,
    format_gadgets,
    parse_gadgets,
    reduce_to_cubic,
)
from circflow.families import flower, petersen
from circflow.graph import Graph, GraphError, find_bridges
from circflow.solver import AtLeastFive, circular_flow_number, phi_at_least, search_circular_flow


def contracted_petersen() -> Graph:
    return contract_edge(petersen(), 0, 1)


def wheel_hub(d: int) -> Graph:
    """A hub of degree d inside a d-prism-like frame where every rim vertex has degree 3."""
    edges = [(0, 1 + i) for i in range(d)]
    edges += [(1 + i, 1 + (i + 1) % d) for i in range(d)]
    return Graph(d + 1, edges)


def test_contraction():
    g = contracted_petersen()
    assert g.n == 9 and g.degree(0) == 4
    assert sorted(g.degrees()) == [3] * 8 + [4]
    with pytest.raises(GraphError):
        contract_edge(k4(), 0, 1)


def test_k2_expansion_degrees():
    g = contracted_petersen()
    side = g.neighbors(0)[:2]
    h = expand_into_k2(g, 0, side)
    assert h.is_cubic() and h.n == 10
    hub = wheel_hub(5)
    h = expand_into_k2(hub, 0, [1, 2])
    assert sorted([h.degree(0), h.degree(hub.n)]) == [3, 4]


def test_k2_expansion_errors():
    g = contracted_petersen()
    with pytest.raises(GraphError):
        expand_into_k2(g, 0, [g.neighbors(0)[0]])
    with pytest.raises(GraphError):
        expand_into_k2(g, 0, [5, 6])
    with pytest.raises(GraphError):
        expand_into_k2(petersen(), 0, [1, 4])


def test_reexpansion_recovers_petersen():
    p = petersen()
    g = contract_edge(p, 0, 1)
    # 0 keeps its own neighbours 4 and 5, renamed 3 and 4 after the contraction
    side = [3, 4]
    h = expand_into_k2(g, 0, side)
    assert nx.is_isomorphic(h.to_networkx(), p.to_networkx())
    assert any(nx.is_isomorphic(x.to_networkx(), p.to_networkx()) for x in family_H(g, 0))


@pytest.mark.parametrize("d,count", [(4, 3), (5, 10)])
def test_family_h_sizes(d, count):
    g = wheel_hub(d)
    fam = family_H(g, 0)
    assert len(fam) == count == 2 ** (d - 1) - d - 1
    for h in fam:
        assert h.n == g.n + 1 and h.min_degree() >= 3


def test_family_h_bound_randomized():
    rng = random.Random(11)
    for _ in range(30):
        d = rng.randint(4, 7)
        g = wheel_hub(d)
        perm = list(range(g.n))
        rng.shuffle(perm)
        g = g.relabeled(perm)
        v = perm[0]
        fam = family_H(g, v)
        assert len(fam) <= 2 ** (d - 1) - d - 1
        assert len(set(fam)) == len(fam)
        assert all(h.max_degree() <= g.max_degree() and h.min_degree() >= 3 for h in fam)


def test_gadget_file_round_trip():
    gadgets = default_gadgets()
    assert [t.name for t in gadgets] == ["c4", "k33-minus-2k2"]
    assert all("Reconstructed" in t.note for t in gadgets)
    again = parse_gadgets(io.StringIO(format_gadgets(gadgets)))
    assert again == gadgets


def test_gadget_validation():
    with pytest.raises(GraphError):
        GadgetTemplate("bad", 2, ((0, 1),), (0, 0, 1, 2))
    with pytest.raises(GraphError):
        GadgetTemplate("thin", 3, ((0, 1), (1, 2)), (0, 0, 1, 2))
    with pytest.raises(GraphError):
        parse_gadgets(["gadget x", "vertices two"])
    with pytest.raises(GraphError):
        parse_gadgets(["gadget x", "colour red"])


def test_gadget_expansion_orders():
    g = contracted_petersen()
    gadgets = default_gadgets()
    order = g.neighbors(0)
    for t in gadgets:
        h = expand_into_gadget(g, 0, t, order)
        assert h.n == g.n - 1 + t.size
        assert h.is_cubic()
    assert family_C(g, 0, []) == []
    fam_c = family_C(g, 0, gadgets)
    assert all(h.n in (g.n + 3, g.n + 5) for h in fam_c)
    assert len(family_G(g, 0, gadgets)) == len(fam_c) + 3
    assert family_G(g, 0, []) == family_H(g, 0)


def test_reduce_cubic_input_is_a_single_leaf():
    tree = reduce_to_cubic(petersen(), default_gadgets())
    assert tree.nodes == 1 and [leaf.graph for leaf in tree.leaves] == [petersen()]
    assert bool(decide_phi_ge_5(petersen(), [])) == phi_at_least(petersen(), 5)
    j5 = flower(5)
    assert bool(decide_phi_ge_5(j5, [])) is False


def test_reduce_contracted_petersen():
    g = contracted_petersen()
    tree = reduce_to_cubic(g, default_gadgets())
    leaves = [leaf.graph for leaf in tree.leaves]
    assert all(h.is_cubic() for h in leaves)
    assert len(leaves) == 3 + len(family_C(g, 0, default_gadgets()))
    p = petersen().to_networkx()
    assert sum(nx.is_isomorphic(h.to_networkx(), p) for h in leaves) >= 1


def degree_five_graph() -> Graph:
    """Petersen with two edges at vertex 0 contracted: one vertex of degree 5."""
    g = contract_edge(petersen(), 0, 1)
    return contract_edge(g, 0, 4)


def test_reduce_degree_five_branches_ten_ways():
    g = degree_five_graph()
    assert sorted(g.degrees()) == [3] * 7 + [5]
    tree = reduce_to_cubic(g, [])
    assert tree.root.vertex == 0 and len(tree.root.children) == 10
    # each 2+3 split leaves a degree-4 vertex, which branches again
    assert all(child.graph.max_degree() == 4 for child in tree.root.children)
    assert all(leaf.graph.is_cubic() for leaf in tree.leaves)


def test_reduction_terminates_with_decreasing_excess():
    g = contracted_petersen()
    tree = reduce_to_cubic(g, default_gadgets())

    def excess(h: Graph) -> int:
        return sum(d - 3 for d in h.degrees())

    stack = [tree.root]
    while stack:
        node = stack.pop()
        for child in node.children:
            assert excess(child.graph) < excess(node.graph)
            stack.append(child)


def test_bridge_flags_match_a_direct_search():
    for g in (contracted_petersen(), degree_five_graph()):
        tree = reduce_to_cubic(g, default_gadgets())
        for leaf in tree.leaves:
            assert leaf.bridged == bool(find_bridges(leaf.graph))


def test_decision_is_sound_and_consistent_on_leaves():
    g = contracted_petersen()
    decision = decide_phi_ge_5(g, default_gadgets())
    direct = []
    for leaf in decision.tree.leaves:
        if leaf.bridged:
            direct.append(True)
        else:
            direct.append(isinstance(circular_flow_number(leaf.graph), AtLeastFive))
    assert bool(decision) == all(direct)
    if not decision:
        assert decision.witness is not None
        assert not phi_at_least(decision.witness, 5)


def test_decision_does_not_depend_on_labels():
    g = contracted_petersen()
    base = bool(decide_phi_ge_5(g, default_gadgets()))
    rng = random.Random(5)
    for _ in range(4):
        perm = list(range(g.n))
        rng.shuffle(perm)
        assert bool(decide_phi_ge_5(g.relabeled(perm), default_gadgets())) == base


@pytest.mark.parametrize("graph,edge", [(k33(), (0, 3)), (prism(3), (0, 3))])
def test_expansions_never_lower_the_flow_number(graph, edge):
    """A flow on an expansion contracts to a flow on the base graph."""
    g = contract_edge(graph, *edge)
    grid = [Fraction(3), Fraction(7, 2), Fraction(4), Fraction(9, 2)]
    base = [search_circular_flow(g, r, denominator=2) is not None for r in grid]
    for h in family_G(g, edge[0], default_gadgets()):
        if find_bridges(h) or h.m > 12:
            continue
        for r, ok in zip(grid, base):
            if search_circular_flow(h, r, denominator=2) is not None:
                assert ok, f"expansion has a {r}-flow, the base graph does not"
