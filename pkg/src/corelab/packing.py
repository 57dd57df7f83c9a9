"""Packing floor((k-3)/2) edge-disjoint Hamilton cycles into a k-core: one
even factor, split into 2-factors, each converted in turn by sprinkling."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .factors import f_factor, petersen_decompose
from .graph import Edge, Graph
from .hamilton import SprinkleBudget, _connected, sprinkle_to_hamilton, validate_hamilton_cycle


class PackingError(RuntimeError):
    """A stage of the packing pipeline could not run; ``stage`` names it."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"{stage}: {message}")
        self.stage = stage


def k1_of(k: int) -> int:
    return (k - 3) // 2


@dataclass
class PackingResult:
    k: int
    k1: int
    cycles: list[list[int]] = field(default_factory=list)
    attempted: int = 0
    per_cycle_budget_used: list[int] = field(default_factory=list)
    backbone_min_degrees: list[int] = field(default_factory=list)
    added_edges: list[Edge] = field(default_factory=list)
    downgraded: bool = False

    @property
    def succeeded(self) -> int:
        return len(self.cycles)

    def as_dict(self) -> dict:
        return {"k1": self.k1, "succeeded": self.succeeded, "attempted": self.attempted,
                "budgets": self.per_cycle_budget_used, "downgraded": self.downgraded}


def split_budget(stream: Sequence[Edge], parts: int) -> list[SprinkleBudget]:
    """Deal a stream round-robin into ``parts`` nearly equal budgets."""
    return [SprinkleBudget(list(stream[i::parts])) for i in range(parts)]


def _as_budget(b) -> SprinkleBudget:
    return b if isinstance(b, SprinkleBudget) else SprinkleBudget(list(b))


def pack_hamilton_cycles(core: Graph, k: int, budget_streams: Sequence | None = None,
                         max_rotations: int | None = None) -> PackingResult:
    """Edge-disjoint Hamilton cycles of ``core`` plus budget edges.

    Finds a 2k1-factor (falling back to 2k1 - 2), splits it into 2-factors
    L_1..L_s and for each i converts L_i inside the backbone
    ``core + revealed budget - (H_1..H_{i-1}) - (L_{i+1}..L_s)`` with the
    i-th budget.  Edges of L_i left out of H_i return to later backbones.
    Cycles that fail to close are skipped; the rest are returned.
    """
    k1 = k1_of(k)
    if k1 < 1:
        raise ValueError("packing needs k >= 5")
    # The factor needs degree 2k1 everywhere; k itself is not enforced (K_7
    # with k = 7 is a legitimate input).
    if core.n and core.min_degree() < 2 * k1:
        raise ValueError(f"minimum degree {core.min_degree()} is below 2k1 = {2 * k1}")
    budgets = [SprinkleBudget([]) for _ in range(k1)] if budget_streams is None else \
        [_as_budget(b) for b in budget_streams]
    if len(budgets) != k1:
        raise ValueError(f"need {k1} budget streams, got {len(budgets)}")
    result = PackingResult(k=k, k1=k1)
    if core.n == 0:
        return result

    factor = f_factor(core, 2 * k1)
    if factor is None:
        if k1 == 1:
            raise PackingError("factor", f"no {2 * k1}-factor")
        factor = f_factor(core, 2 * k1 - 2)
        if factor is None:
            raise PackingError("factor", f"no {2 * k1}-factor or {2 * k1 - 2}-factor")
        result.downgraded = True
    try:
        layers = petersen_decompose(factor)
    except Exception as exc:  # pragma: no cover - factor is regular by construction
        raise PackingError("decompose", str(exc)) from exc
    s = len(layers)
    result.attempted = s
    layer_edges = [set(L.edges()) for L in layers]
    host: set[Edge] = set(core.edges())
    used: set[Edge] = set()
    floor = core.min_degree() - (2 * s - 2)

    for i in range(s):
        budget = budgets[i]
        blocked = used.union(*layer_edges[i + 1:])
        # Stream edges that are already present cannot be revealed as new ones.
        budget.stream = [e for e in budget.stream if tuple(sorted(e)) not in host]
        backbone = Graph(core.n, sorted(host - blocked), validate=False)
        delta = backbone.min_degree()
        result.backbone_min_degrees.append(delta)
        if delta < floor:
            raise AssertionError(f"backbone {i} has minimum degree {delta} < {floor}")
        start = budget.consumed
        while not _connected(backbone) and not budget.exhausted():
            e = tuple(sorted(budget.take()))
            host.add(e)
            result.added_edges.append(e)
            backbone = backbone.with_edges([e])
        out = sprinkle_to_hamilton(backbone, layers[i], budget, max_rotations=max_rotations)
        for e in out.added:
            host.add(e)
            result.added_edges.append(e)
        result.per_cycle_budget_used.append(budget.consumed - start)
        if out.found:
            cyc = out.cycle
            edges = {tuple(sorted((cyc[j], cyc[(j + 1) % len(cyc)]))) for j in range(len(cyc))}
            if edges & used:
                raise AssertionError("Hamilton cycles overlap")
            used |= edges
            result.cycles.append(cyc)
    if not verify_packing(core, result):
        raise AssertionError("packing failed verification")
    return result


def verify_packing(core: Graph, result: PackingResult) -> bool:
    """Every cycle is a Hamilton cycle of ``core`` plus the revealed budget
    edges, and no two cycles share an edge."""
    host = set(core.edges()) | {tuple(sorted(e)) for e in result.added_edges}
    adj: list[set[int]] = [set() for _ in range(core.n)]
    for u, v in host:
        adj[u].add(v)
        adj[v].add(u)
    seen: set[Edge] = set()
    for cyc in result.cycles:
        if not validate_hamilton_cycle(adj, cyc, core.n):
            return False
        for j in range(len(cyc)):
            e = tuple(sorted((cyc[j], cyc[(j + 1) % len(cyc)])))
            if e in seen:
                return False
            seen.add(e)
    return True
