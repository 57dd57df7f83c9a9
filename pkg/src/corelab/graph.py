"""Static simple graphs, seeded random-graph samplers and the edge-list format.

Vertices are dense integers ``0 .. n-1``.  A :class:`Graph` is immutable once
built; algorithms that need to grow a graph keep their own mutable copy of the
adjacency (see :meth:`Graph.adjacency_sets`).
"""

from __future__ import annotations

import re
from typing import Iterable, Iterator, Sequence

import numpy as np

Edge = tuple[int, int]

# Largest chunk of pair draws.  The chunk may depend on n but not on the
# requested length, otherwise shorter sequences would stop being prefixes of
# longer ones.
_DRAW_CHUNK = 4096


class GraphError(ValueError):
    """Raised for invalid vertices, loops or repeated edges."""


class CapacityError(ValueError):
    """Raised when more distinct edges are requested than pairs exist."""


def pair_count(n: int) -> int:
    return n * (n - 1) // 2


# ---------------------------------------------------------------------------
# Random number streams
# ---------------------------------------------------------------------------

def make_rng(seed: int) -> np.random.Generator:
    """Counter-based (Philox) generator for a 64-bit seed."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed) & (2**64 - 1))))


def split_seed(seed: int, index: int) -> int:
    """Derive the 64-bit seed of substream ``index`` of ``seed``.

    Substreams are independent of each other and of the order in which they
    are requested, so trials can run in any order or in parallel.
    """
    ss = np.random.SeedSequence(int(seed) & (2**64 - 1), spawn_key=(int(index),))
    lo, hi = ss.generate_state(2, dtype=np.uint32)
    return int(lo) | (int(hi) << 32)


# ---------------------------------------------------------------------------
# Graph
# ---------------------------------------------------------------------------

class Graph:
    """Undirected simple graph on ``range(n)``.

    ``adjacency[v]`` is the sorted tuple of neighbours of ``v``; ``edge_set``
    holds every edge ``(u, v)`` with ``u < v`` encoded as ``u * n + v``.
    """

    __slots__ = ("n", "m", "adjacency", "edge_set")

    def __init__(self, n: int, edges: Iterable[Edge] = (), *, validate: bool = True):
        n = int(n)
        if n < 0:
            raise GraphError(f"vertex count must be non-negative, got {n}")
        lists: list[list[int]] = [[] for _ in range(n)]
        codes = set()
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if u > v:
                u, v = v, u
            if validate:
                if u == v:
                    raise GraphError(f"loop at vertex {u}")
                if u < 0 or v >= n:
                    raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            code = u * n + v
            if code in codes:
                raise GraphError(f"duplicate edge ({u}, {v})")
            codes.add(code)
            lists[u].append(v)
            lists[v].append(u)
        self.n = n
        self.m = len(codes)
        self.adjacency: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(a)) for a in lists)
        self.edge_set: frozenset[int] = frozenset(codes)

    # -- queries ----------------------------------------------------------
    def has_edge(self, u: int, v: int) -> bool:
        if u == v:
            return False
        if u > v:
            u, v = v, u
        return u * self.n + v in self.edge_set

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def degrees(self) -> np.ndarray:
        return np.fromiter((len(a) for a in self.adjacency), dtype=np.int64, count=self.n)

    def min_degree(self) -> int:
        return min((len(a) for a in self.adjacency), default=0)

    def edges(self) -> list[Edge]:
        """All edges ``(u, v)`` with ``u < v`` in lexicographic order."""
        return [(u, v) for u, nb in enumerate(self.adjacency) for v in nb if u < v]

    def adjacency_sets(self) -> list[set[int]]:
        return [set(a) for a in self.adjacency]

    # -- derived graphs ---------------------------------------------------
    def induced_subgraph(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        """Subgraph induced on ``vertices``, relabelled ``0..len-1``.

        Returns the graph and ``mapping`` with ``mapping[i]`` the original
        label of new vertex ``i`` (ascending).
        """
        mapping = sorted(set(int(v) for v in vertices))
        index = {v: i for i, v in enumerate(mapping)}
        edges = []
        for i, v in enumerate(mapping):
            for w in self.adjacency[v]:
                j = index.get(w)
                if j is not None and i < j:
                    edges.append((i, j))
        return Graph(len(mapping), edges, validate=False), mapping

    def without_edges(self, removed: Iterable[Edge]) -> "Graph":
        drop = {_code(u, v, self.n) for u, v in removed}
        return Graph(self.n, [e for e in self.edges() if _code(*e, self.n) not in drop], validate=False)

    def with_edges(self, extra: Iterable[Edge]) -> "Graph":
        return Graph(self.n, list(self.edges()) + [tuple(e) for e in extra])

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex ``v`` renamed ``perm[v]``."""
        return Graph(self.n, [(perm[u], perm[v]) for u, v in self.edges()], validate=False)

    # -- misc -------------------------------------------------------------
    def check(self) -> None:
        """Re-verify the structural invariants; raises GraphError on failure."""
        total = 0
        for v, nb in enumerate(self.adjacency):
            total += len(nb)
            for w in nb:
                if w == v:
                    raise GraphError(f"loop at {v}")
                if v not in self.adjacency[w]:
                    raise GraphError(f"asymmetric adjacency {v}-{w}")
                if not self.has_edge(v, w):
                    raise GraphError(f"edge_set misses {v}-{w}")
            if len(set(nb)) != len(nb):
                raise GraphError(f"repeated neighbour at {v}")
        if total != 2 * self.m or len(self.edge_set) != self.m:
            raise GraphError("degree sum does not match edge count")

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.edge_set == other.edge_set

    def __hash__(self) -> int:
        return hash((self.n, self.edge_set))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def _code(u: int, v: int, n: int) -> int:
    if u > v:
        u, v = v, u
    return u * n + v


def graph_from_edges(n: int, edges: Iterable[Edge]) -> Graph:
    """Validated graph with exactly the given edges."""
    return Graph(n, edges, validate=True)


def complete_graph(n: int) -> Graph:
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)], validate=False)


def cycle_graph(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


# ---------------------------------------------------------------------------
# The random graph process
# ---------------------------------------------------------------------------

class EdgeSequence:
    """Ordered list of distinct edges ``e_1 .. e_T`` drawn by :class:`ProcessSampler`."""

    __slots__ = ("n", "seed", "edges")

    def __init__(self, n: int, seed: int, edges: Sequence[Edge]):
        self.n = n
        self.seed = seed
        self.edges = list(edges)

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self) -> Iterator[Edge]:
        return iter(self.edges)

    def __getitem__(self, i):
        return self.edges[i]

    def graph(self, t: int | None = None) -> Graph:
        """The graph ``G_t`` formed by the first ``t`` edges (all by default)."""
        return Graph(self.n, self.edges if t is None else self.edges[:t], validate=False)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)


class ProcessSampler:
    """Lazily extendable random graph process on ``n`` vertices.

    Each new edge is uniform over the pairs not drawn so far.  Pairs are drawn
    as ordered pairs in fixed-size chunks and rejected when looped or already
    present; once half of all pairs are used the sampler switches to shuffling
    the remaining pairs.  Both rules depend only on the state reached so far,
    so ``take(t)`` is always a prefix of ``take(t')`` for ``t <= t'``.
    """

    def __init__(self, n: int, seed: int):
        self.n = int(n)
        self.seed = int(seed)
        self._rng = make_rng(seed)
        self._seen: set[int] = set()
        self.edges: list[Edge] = []
        self._tail: list[Edge] | None = None

    @property
    def capacity(self) -> int:
        return pair_count(self.n)

    def take(self, t: int) -> list[Edge]:
        t = int(t)
        if t < 0:
            raise ValueError("requested a negative number of edges")
        if t > self.capacity:
            raise CapacityError(f"{t} edges requested but K_{self.n} has only {self.capacity}")
        while len(self.edges) < t:
            self._extend(t)
        return self.edges[:t]

    def _extend(self, t: int) -> None:
        n = self.n
        if self._tail is None and 2 * len(self.edges) >= self.capacity:
            rest = [(u, v) for u in range(n) for v in range(u + 1, n) if u * n + v not in self._seen]
            order = self._rng.permutation(len(rest))
            self._tail = [rest[i] for i in order]
        if self._tail is not None:
            need = t - len(self.edges)
            chunk, self._tail = self._tail[:need], self._tail[need:]
            for u, v in chunk:
                self._seen.add(u * n + v)
            self.edges.extend(chunk)
            return
        draws = self._rng.integers(0, n, size=(min(_DRAW_CHUNK, max(16, self.capacity)), 2))
        seen, out = self._seen, self.edges
        for u, v in draws.tolist():
            if u == v:
                continue
            if u > v:
                u, v = v, u
            code = u * n + v
            if code in seen:
                continue
            seen.add(code)
            out.append((u, v))
            if 2 * len(out) >= self.capacity:
                break
        # Any draws left in the chunk are discarded; the chunk boundary is a
        # function of the state only, which keeps the prefix property.


def sample_process(n: int, t_max: int, seed: int) -> EdgeSequence:
    """First ``t_max`` edges of the random graph process with the given seed."""
    if t_max < 0 or t_max > pair_count(n):
        raise CapacityError(f"t_max={t_max} outside [0, {pair_count(n)}]")
    return EdgeSequence(n, seed, ProcessSampler(n, seed).take(t_max))


def sample_gnm(n: int, m: int, seed: int) -> Graph:
    """Uniform graph with ``m`` edges, equal to ``G_m`` of the process with ``seed``."""
    return sample_process(n, m, seed).graph()


def sample_gnp(n: int, p: float, seed: int) -> Graph:
    """Binomial random graph: every pair present independently with probability ``p``."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    rng = make_rng(seed)
    edges: list[Edge] = []
    for u in range(n - 1):
        row = rng.random(n - u - 1) < p
        edges.extend((u, u + 1 + int(j)) for j in np.flatnonzero(row))
    return Graph(n, edges, validate=False)


# ---------------------------------------------------------------------------
# Edge-list text format
# ---------------------------------------------------------------------------

_HEADER = re.compile(r"(0|[1-9][0-9]*) (0|[1-9][0-9]*)")


class EdgeListFormatError(ValueError):
    pass


def format_edge_list(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"] + [f"{u} {v}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> Graph:
    """Parse the strict ``n m`` / ``u v`` format; any deviation is an error."""
    if not text.endswith("\n"):
        raise EdgeListFormatError("input must end with a line feed")
    lines = text[:-1].split("\n")
    header = _HEADER.fullmatch(lines[0])
    if header is None:
        raise EdgeListFormatError(f"bad header line {lines[0]!r}")
    n, m = int(header.group(1)), int(header.group(2))
    if len(lines) - 1 != m:
        raise EdgeListFormatError(f"header announces {m} edges, found {len(lines) - 1} lines")
    edges = []
    for lineno, line in enumerate(lines[1:], start=2):
        match = _HEADER.fullmatch(line)
        if match is None:
            raise EdgeListFormatError(f"line {lineno}: bad edge line {line!r}")
        u, v = int(match.group(1)), int(match.group(2))
        if not u < v < n:
            raise EdgeListFormatError(f"line {lineno}: need u < v < n, got {u} {v}")
        edges.append((u, v))
    try:
        return Graph(n, edges)
    except GraphError as exc:
        raise EdgeListFormatError(str(exc)) from exc


def read_edge_list(path) -> Graph:
    with open(path, "r", encoding="ascii", newline="") as fh:
        return parse_edge_list(fh.read())


def write_edge_list(g: Graph, path) -> None:
    with open(path, "w", encoding="ascii", newline="") as fh:
        fh.write(format_edge_list(g))
