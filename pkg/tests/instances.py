"""Random instance families shared by the Hamiltonicity tests."""

from __future__ import annotations

import networkx as nx

from corelab.graph import Graph, graph_from_edges
from corelab.hamilton import CLOSED, EXTENDED, rotate_extend


def nx_to_graph(G, n):
    return graph_from_edges(n, sorted((min(u, v), max(u, v)) for u, v in G.edges()))


def random_regular(d, n, seed):
    return nx_to_graph(nx.random_regular_graph(d, n, seed=seed), n)


def lopsided(a, p, extra, seed):
    """Random bipartite graph on sides of size a + 1 (vertices 0..a) and a,
    plus ``extra`` random edges inside the smaller side.  The larger side is
    independent and holds more than half the vertices, so no Hamilton cycle
    exists and a spanning path can neither extend nor close."""
    import random

    G = nx.bipartite.random_graph(a + 1, a, p, seed=seed)
    rng = random.Random(seed)
    small = list(range(a + 1, 2 * a + 1))
    for _ in range(extra):
        u, v = rng.sample(small, 2)
        G.add_edge(u, v)
    return nx_to_graph(G, 2 * a + 1)


def maximal_path(g: Graph, max_rotations: int):
    """Grow a path by rotation-extension, reopening any non-spanning closed
    cycle toward an outside neighbour, until neither applies.  Returns the
    final path and its rotation outcome."""
    path = [max(range(g.n), key=lambda v: (g.degree(v), -v))]
    while True:
        out = rotate_extend(g, path, max_rotations)
        if out.kind == EXTENDED:
            path = out.path
            continue
        if out.kind == CLOSED and len(out.cycle) < g.n:
            c = out.cycle
            inside = set(c)
            hit = next(((j, x) for j, v in enumerate(c) for x in g.neighbors(v) if x not in inside), None)
            if hit is None:
                return path, out
            j, x = hit
            path = c[j + 1:] + c[: j + 1] + [x]
            continue
        return path, out


def check_booster(g: Graph, path, out, pair) -> None:
    """A booster must be a non-edge joining the two ends of a path on V(P)."""
    u, v = pair
    assert not g.has_edge(u, v)
    p = out.booster_path(pair)
    assert sorted(p) == sorted(path)
    assert {p[0], p[-1]} == {u, v}
    for a, b in zip(p, p[1:]):
        assert g.has_edge(a, b)
