import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import brute_cut_count, chain_cuts, owner_map
from stencilmap.evalcost import evaluate, fingerprint, induced_edges, owner_of, reduction
from stencilmap.grid import Grid
from stencilmap.mappers import MappingError, NodeConfig, blocked_map, compute, random_map
from stencilmap.mappers.base import from_ranks
from stencilmap.oracle import three_way_to_grid
from stencilmap.stencil import Stencil, builtin

NN2 = builtin("nn", 2)


def test_owner_of():
    nc = NodeConfig((3, 5))
    assert [owner_of(nc, r) for r in range(8)] == [0, 0, 0, 1, 1, 1, 1, 1]
    with pytest.raises(MappingError):
        owner_of(nc, 8)


def test_induced_edges_small():
    edges = list(induced_edges(Grid((2, 2)), NN2))
    assert len(edges) == 8
    assert set(edges) == {(0, 2), (2, 0), (1, 3), (3, 1), (0, 1), (1, 0), (2, 3), (3, 2)}


def test_induced_edges_periodic_and_oversized():
    ring = list(induced_edges(Grid((3,), (True,)), Stencil(((1,),))))
    assert sorted(ring) == [(0, 1), (1, 2), (2, 0)]
    assert list(induced_edges(Grid((2,)), Stencil(((2,),)))) == []


def test_evaluate_2x2_two_nodes():
    g = Grid((2, 2))
    cost = evaluate(g, NN2, blocked_map(g), NodeConfig((2, 2)))
    # rows {0,1} and {2,3}: two undirected cut edges, four directed
    assert (cost.j_sum, cost.j_max, cost.per_node, cost.bottleneck_node) == (4, 2, [2, 2], 0)


def test_evaluate_single_node_is_zero():
    g = Grid((5, 4))
    cost = evaluate(g, NN2, random_map(g, 3), NodeConfig((20,)))
    assert cost.j_sum == 0 and cost.j_max == 0


def test_reduction_witness_costs_q():
    inst = three_way_to_grid([6, 3, 3, 2, 2, 2])
    # row 0: 6; row 1: 3 3; row 2: 2 2 2
    new_ranks = list(range(18))
    m = from_ranks(inst.grid.dims, new_ranks, "witness")
    cost = evaluate(inst.grid, inst.stencil, m, NodeConfig(inst.node_sizes))
    assert cost.j_sum == inst.q == 6


def test_evaluate_rejects_mismatches():
    g = Grid((4, 2))
    with pytest.raises(MappingError):
        evaluate(g, builtin("nn", 3), blocked_map(g), NodeConfig((4, 4)))
    with pytest.raises(MappingError):
        evaluate(g, NN2, blocked_map(g), NodeConfig((4, 3)))
    bad = from_ranks((4, 2), [0, 0, 1, 2, 3, 4, 5, 6], "bad")
    with pytest.raises(MappingError):
        evaluate(g, NN2, bad, NodeConfig((4, 4)))


def test_reduction_rules():
    g = Grid((4, 4))
    nc = NodeConfig((4,) * 4)
    base = evaluate(g, NN2, blocked_map(g), nc)
    better = evaluate(g, NN2, compute("kdtree", g, NN2, nc), nc)
    red = reduction(better, base)
    assert red.sum_ratio == better.j_sum / base.j_sum
    assert red.max_ratio == better.j_max / base.j_max
    assert red.flags == ()

    one = NodeConfig((16,))
    zero = evaluate(g, NN2, blocked_map(g), one)
    assert reduction(zero, zero).sum_ratio == 1.0
    # hand-made report against a zero baseline
    worse = type(zero)(5, 5, [5], 0, zero.fingerprint)
    red = reduction(worse, zero)
    assert math.isinf(red.sum_ratio) and "sum:baseline-zero" in red.flags


def test_reduction_rejects_different_instances():
    g = Grid((4, 4))
    a = evaluate(g, NN2, blocked_map(g), NodeConfig((8, 8)))
    b = evaluate(g, builtin("nn-hops", 2), blocked_map(g), NodeConfig((8, 8)))
    with pytest.raises(MappingError):
        reduction(a, b)


def test_fingerprint_fields():
    fp = fingerprint(Grid((3, 2), (True, False)), NN2, NodeConfig((3, 3)))
    assert fp["dims"] == [3, 2] and fp["periods"] == [1, 0] and fp["sizes"] == [3, 3]


@st.composite
def instances(draw):
    d = draw(st.integers(1, 3))
    dims = tuple(draw(st.lists(st.integers(1, 5), min_size=d, max_size=d)))
    periods = tuple(draw(st.lists(st.booleans(), min_size=d, max_size=d)))
    p = math.prod(dims)
    offs = draw(st.lists(
        st.lists(st.integers(-3, 3), min_size=d, max_size=d).map(tuple).filter(any),
        min_size=1, max_size=6, unique=True,
    ))
    cuts = sorted(draw(st.sets(st.integers(1, p - 1), max_size=4))) if p > 1 else []
    bounds = [0, *cuts, p]
    sizes = tuple(b - a for a, b in zip(bounds, bounds[1:]))
    perm = draw(st.permutations(range(p)))
    return Grid(dims, periods), Stencil(tuple(offs)), NodeConfig(sizes), perm


@settings(max_examples=200, deadline=None)
@given(instances())
def test_evaluate_matches_brute_force(inst):
    g, s, nc, perm = inst
    m = from_ranks(g.dims, perm, "perm")
    cost = evaluate(g, s, m, nc)
    j_sum, per = brute_cut_count(g.dims, g.periods, s.offsets, owner_map(m, nc.sizes))
    assert cost.j_sum == j_sum
    assert cost.per_node == [per.get(i, 0) for i in range(nc.num_nodes)]
    assert cost.j_max == max(cost.per_node)
    # the directed edge list gives the same total
    own = owner_map(m, nc.sizes)
    coords = [tuple(int(x) for x in np.unravel_index(r, g.dims)) for r in range(g.size)]
    assert j_sum == sum(own[coords[u]] != own[coords[v]] for u, v in induced_edges(g, s))


@settings(max_examples=100, deadline=None)
@given(instances())
def test_symmetric_stencil_counts_each_cut_twice(inst):
    g, s, nc, perm = inst
    sym = Stencil(tuple(dict.fromkeys(s.offsets + s.negated().offsets)))
    cost = evaluate(g, sym, from_ranks(g.dims, perm, "perm"), nc)
    assert cost.j_sum % 2 == 0


@settings(max_examples=100, deadline=None)
@given(instances(), st.randoms(use_true_random=False))
def test_relabeling_nodes_of_equal_size_keeps_cost(inst, rnd):
    g, s, nc, perm = inst
    # swapping whole node blocks of equal size permutes per_node only
    sizes = list(nc.sizes)
    i, j = rnd.randrange(len(sizes)), rnd.randrange(len(sizes))
    if sizes[i] != sizes[j] or i == j:
        return
    pre = [0, *nc.prefix()]
    blocks = [list(perm[pre[k]:pre[k + 1]]) for k in range(len(sizes))]
    blocks[i], blocks[j] = blocks[j], blocks[i]
    swapped = [x for b in blocks for x in b]
    a = evaluate(g, s, from_ranks(g.dims, perm, "a"), nc)
    b = evaluate(g, s, from_ranks(g.dims, swapped, "b"), nc)
    assert a.j_sum == b.j_sum
    pa, pb = list(a.per_node), list(b.per_node)
    pa[i], pa[j] = pa[j], pa[i]
    assert pa == pb


@pytest.mark.parametrize("dims, n", [((50, 48), 48), ((12, 10), 10), ((9, 8), 6)])
@pytest.mark.parametrize("algo", ["blocked", "kdtree", "strips", "nodecart"])
def test_component_stencil_matches_chain_count(dims, n, algo):
    g = Grid(dims)
    s = builtin("component", 2)
    nc = NodeConfig.homogeneous(g.size, n)
    m = compute(algo, g, s, nc)
    assert evaluate(g, s, m, nc).j_sum == chain_cuts(dims, 0, owner_map(m, nc.sizes))
