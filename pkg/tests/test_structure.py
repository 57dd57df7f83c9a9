import itertools
import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import graphs
from corelab.core import core_subgraph, peel_core, run_to_core
from corelab.graph import (Graph, GraphError, complete_graph, cycle_graph, graph_from_edges,
                           sample_gnm, sample_process)
from corelab.structure import (component_sizes, count_disjoint_cycles_greedy, expansion_check,
                               external_neighbourhood, odd_components, partition_future_core,
                               tutte_scan, verify_core_vertex_stability)
from oracles import max_disjoint_cycles, violates_expansion_naive


def star(leaves):
    return graph_from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def triangles_joined_at(v=0):
    # two disjoint triangles, each with one vertex adjacent to a hub v
    return graph_from_edges(7, [(1, 2), (1, 3), (2, 3), (4, 5), (4, 6), (5, 6), (v, 1), (v, 4)])


# --- expansion ---------------------------------------------------------------

def test_expansion_examples():
    assert expansion_check(complete_graph(10), 2, 3).passed
    c6 = cycle_graph(6)
    assert expansion_check(c6, 2, 1).passed
    rep = expansion_check(c6, 2, 2)
    assert not rep.passed
    assert frozenset({0, 1}) in rep.violations
    for X in rep.violations:
        assert len(external_neighbourhood(c6, X)) < 2 * len(X)


def test_expansion_errors():
    with pytest.raises(ValueError):
        expansion_check(cycle_graph(5), 0, 2)
    with pytest.raises(ValueError):
        expansion_check(cycle_graph(30), 2, 21)
    with pytest.raises(ValueError):
        expansion_check(cycle_graph(5), 2, 2, mode="bogus")


def test_exhaustive_matches_naive_small():
    rng = random.Random(31)
    for trial in range(150):
        n = rng.randint(1, 18)
        g = sample_gnm(n, rng.randint(0, min(3 * n, n * (n - 1) // 2)), trial)
        ratio = rng.choice([0.5, 1, 1.5, 2, 3])
        bound = rng.randint(1, 4 if n > 12 else 6)
        rep = expansion_check(g, ratio, bound, max_witnesses=10**6)
        assert rep.passed == (not violates_expansion_naive(g, ratio, bound))
        naive = expansion_check(g, ratio, bound, "naive", max_witnesses=10**6)
        assert set(rep.violations) <= set(naive.violations)


@given(graphs(max_n=10), st.sampled_from([1, 1.5, 2, 3]), st.integers(1, 4))
def test_expansion_witnesses_sound(g, ratio, bound):
    rep = expansion_check(g, ratio, bound)
    for X in rep.violations:
        assert 1 <= len(X) <= bound
        assert len(external_neighbourhood(g, X)) < ratio * len(X)


@pytest.fixture(scope="module")
def core200():
    tr, sampler = run_to_core(200, 15, 0)
    core, _ = core_subgraph(graph_from_edges(200, sampler.edges[: tr.tau]), 15)
    return core


def test_expansion_core200_agrees_with_naive(core200):
    # min degree 15 gives |N(X) \ X| >= 15 - (|X| - 1) > 2|X| for |X| <= 4
    assert core200.min_degree() >= 15
    assert expansion_check(core200, 2, 4).passed
    a = expansion_check(core200, 5, 3)
    b = expansion_check(core200, 5, 3, "naive")
    assert a.passed == b.passed
    a = expansion_check(core200, 13.5, 2, max_witnesses=10**6)
    b = expansion_check(core200, 13.5, 2, "naive", max_witnesses=10**6)
    assert not a.passed and a.passed == b.passed
    assert set(a.violations) <= set(b.violations)


def test_expansion_sampled_mode(core200):
    rep = expansion_check(core200, 2, 10, "sampled", samples=500, seed=4)
    assert rep.samples == 500 and rep.checked == 500 and rep.passed
    bad = graph_from_edges(40, cycle_graph(40).edges())
    assert not expansion_check(bad, 2, 6, "sampled", samples=200, seed=1).passed


def test_expansion_deleted_edges():
    g = complete_graph(6)
    assert expansion_check(g, 2, 2).passed
    cut = [(0, w) for w in range(2, 6)] + [(1, w) for w in range(2, 6)]
    assert not expansion_check(g, 2, 2, deleted_edges=cut).passed


# --- odd components and Tutte --------------------------------------------------

def test_odd_component_examples():
    assert odd_components(cycle_graph(5), [0]) == 0
    assert odd_components(star(3), [0]) == 3
    assert odd_components(complete_graph(4)) == 0
    assert odd_components(Graph(3)) == 3


@given(graphs(max_n=12), st.data())
def test_component_parity_accounting(g, data):
    removed = data.draw(st.sets(st.integers(0, max(g.n - 1, 0)), max_size=g.n)) if g.n else set()
    sizes = component_sizes(g, removed)
    assert sum(sizes) == g.n - len(removed)
    assert odd_components(g, removed) == sum(1 for s in sizes if s % 2)
    assert odd_components(g, removed) + sum(1 for s in sizes if s % 2 == 0) == len(sizes)


def test_tutte_examples():
    assert tutte_scan(complete_graph(4), 2).passed
    rep = tutte_scan(triangles_joined_at(0), 1)
    assert (frozenset({0}), 2) in rep.violations
    assert odd_components(triangles_joined_at(0), [0]) == 2
    with pytest.raises(ValueError):
        tutte_scan(complete_graph(4), 4)


def test_tutte_samples_count():
    g = complete_graph(12)
    rep = tutte_scan(g, 1, samples=300, seed=3)
    assert rep.checked == 1 + 12 + 300 and rep.passed


# --- disjoint cycles -------------------------------------------------------------

def test_cycles_examples():
    two = graph_from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    assert count_disjoint_cycles_greedy(two) == 2
    tree = graph_from_edges(7, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)])
    assert count_disjoint_cycles_greedy(tree) == 0
    assert count_disjoint_cycles_greedy(complete_graph(9)) == 3


def test_cycles_lower_bound_small_exact():
    rng = random.Random(5)
    for trial in range(120):
        n = rng.randint(0, 12)
        g = sample_gnm(n, rng.randint(0, min(2 * n, n * (n - 1) // 2)), trial)
        greedy = count_disjoint_cycles_greedy(g)
        assert greedy <= max_disjoint_cycles(g)
        assert greedy == count_disjoint_cycles_greedy(g)


@pytest.mark.parametrize("seed,exact", [(0, 7), (2, 8)])
def test_cycles_gnm_60_90(seed, exact):
    g = sample_gnm(60, 90, seed)
    assert max_disjoint_cycles(g) == exact
    assert count_disjoint_cycles_greedy(g) <= exact


# --- future core partition ---------------------------------------------------------

def check_partition(g, h, k, part):
    assert part.B | part.C == part.core == peel_core(g, k)
    assert not part.B & part.C
    late = [e for e in g.edges() if not h.has_edge(*e)]
    touched = {v for e in late for v in e}
    assert part.C <= touched
    assert len(part.C) <= 2 * len(late)
    assert part.J == sum(1 for u, v in late if u in part.B and v in part.B)


def test_partition_examples():
    g = complete_graph(5)
    part = partition_future_core(g, g, 4)
    assert part.C == frozenset() and part.J == 0 and part.B == frozenset(range(5))
    part = partition_future_core(g, g.without_edges([(1, 3)]), 4)
    assert part.C == frozenset({1, 3}) and part.J == 0


def test_partition_rejects_non_subgraph():
    with pytest.raises(GraphError):
        partition_future_core(cycle_graph(5), complete_graph(5), 2)
    with pytest.raises(GraphError):
        partition_future_core(cycle_graph(5), Graph(6), 2)


@given(st.integers(8, 40), st.integers(0, 2**32 - 1), st.integers(2, 5), st.data())
def test_partition_and_stability_property(n, seed, k, data):
    M = min(n * (n - 1) // 2, data.draw(st.integers(n, 4 * n)))
    m0 = data.draw(st.integers(0, M))
    seq = sample_process(n, M, seed)
    g, h = seq.graph(M), seq.graph(m0)
    part = partition_future_core(g, h, k)
    check_partition(g, h, k, part)
    # dropping any subset of late settled edges, or adding pairs inside the settled set,
    # leaves the core's vertex set alone
    assert verify_core_vertex_stability(g, h, k, [], part)
    assert verify_core_vertex_stability(g, h, k, part.late_inside, part)
    B = sorted(part.B)
    if len(B) >= 2:
        pairs = data.draw(st.lists(st.tuples(st.sampled_from(B), st.sampled_from(B))
                                   .filter(lambda p: p[0] != p[1]), max_size=10))
        assert verify_core_vertex_stability(g, h, k, pairs, part)


def test_stability_rejects_outside_pairs():
    g = complete_graph(5)
    h = g.without_edges([(1, 3)])
    with pytest.raises(GraphError):
        verify_core_vertex_stability(g, h, 4, [(1, 2)])
    with pytest.raises(GraphError):
        verify_core_vertex_stability(g, h, 4, [(0, 0)])


def test_partition_process_n500():
    n, k = 500, 15
    tr, sampler = run_to_core(n, k, 3)
    m_prime = tr.tau - math.floor(n / math.log(math.log(n)))
    g = graph_from_edges(n, sampler.edges[: tr.tau])
    h = graph_from_edges(n, sampler.edges[:m_prime])
    part = partition_future_core(g, h, k)
    check_partition(g, h, k, part)
    rng = random.Random(0)
    B = sorted(part.B)
    for _ in range(20):
        pairs = [tuple(rng.sample(B, 2)) for _ in range(part.J)]
        assert verify_core_vertex_stability(g, h, k, pairs, part)
