"""Seeded experiments over the random graph process: configuration, per-trial
execution, aggregation and CSV/JSON output."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import statistics
import time
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any

import numpy as np

from .core import core_subgraph, run_to_core
from .graph import Graph, ProcessSampler, pair_count, split_seed
from .hamilton import hamiltonicity_solve
from .matching import PathSystem
from .packing import k1_of, pack_hamilton_cycles, split_budget
from .thresholds import compute_ck, fit_truncated_poisson

MODES = ("tau_only", "ham_at_tau", "ham_trajectory", "pack", "degree_fit")
CSV_COLUMNS = ("seed", "tau", "core_size", "core_edges", "ham_status", "pack_succeeded", "wall_time")
THREADS_ENV = "CORELAB_THREADS"

# extras accepted per mode, with defaults
_EXTRAS: dict[str, dict[str, Any]] = {
    "tau_only": {"snapshot_every": 0},
    "ham_at_tau": {"restarts": 8, "keep_cycles": False},
    "ham_trajectory": {"horizon_mult": 1.4, "stride": None, "restarts": 8, "keep_cycles": False},
    "pack": {"density_mult": 1.2, "budget_total": None},
    "degree_fit": {},
}


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    n: int
    k: int
    trials: int = 1
    base_seed: int = 0
    mode: str = "tau_only"
    extras: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}; expected one of {MODES}")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.n < 1 or self.k < 0:
            raise ConfigError("need n >= 1 and k >= 0")
        allowed = _EXTRAS[self.mode]
        unknown = set(self.extras) - set(allowed)
        if unknown:
            raise ConfigError(f"extras {sorted(unknown)} not understood by mode {self.mode}")
        if self.mode in ("ham_trajectory", "pack") and self.k < 3:
            raise ConfigError(f"mode {self.mode} needs k >= 3")
        if self.mode == "pack" and k1_of(self.k) < 1:
            raise ConfigError("mode pack needs k >= 5")

    def extra(self, name: str, default=None):
        return self.extras.get(name, _EXTRAS[self.mode].get(name, default))

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        names = {f.name for f in fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ConfigError(f"unknown config fields {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


@dataclass
class TrialRecord:
    seed: int
    tau: int | None = None
    core_size: int = 0
    core_edges: int = 0
    ham_status: str = "not_applicable"
    pack_succeeded: int = 0
    wall_time: float = 0.0
    index: int = 0
    extra: dict[str, Any] = field(default_factory=dict)

    @property
    def failed(self) -> bool:
        return "error" in self.extra

    def as_dict(self) -> dict:
        return asdict(self)


def trial_seed(cfg: ExperimentConfig, index: int) -> int:
    return split_seed(cfg.base_seed, index)


def _core_at(n: int, edges, k: int) -> tuple[Graph, list[int]]:
    return core_subgraph(Graph(n, edges, validate=False), k)


def _trial_tau(cfg, seed, rec):
    trace, sampler = run_to_core(cfg.n, cfg.k, seed, snapshot_every=int(cfg.extra("snapshot_every", 0)))
    rec.tau = trace.tau
    rec.core_size = trace.core_size_at_tau
    rec.core_edges = trace.core_edges_at_tau
    if trace.snapshots:
        rec.extra["snapshots"] = [list(s) for s in trace.snapshots]
    if trace.outside_regime:
        rec.extra["outside_regime"] = True
    return trace, sampler


def _trial_ham_at_tau(cfg, seed, rec):
    trace, sampler = _trial_tau(cfg, seed, rec)
    if trace.tau is None:
        return
    core, mapping = _core_at(cfg.n, sampler.edges[: trace.tau], cfg.k)
    res = hamiltonicity_solve(core, int(cfg.extra("restarts")), seed)
    rec.ham_status = res.status
    rec.extra.update(rotations=res.rotations, restarts=res.restarts)
    if cfg.extra("keep_cycles") and res.cycle is not None:
        rec.extra["cycle"] = [mapping[v] for v in res.cycle]


def _trial_trajectory(cfg, seed, rec):
    trace, sampler = _trial_tau(cfg, seed, rec)
    if trace.tau is None:
        return
    n = cfg.n
    horizon = min(pair_count(n), int(cfg.extra("horizon_mult") * compute_ck(cfg.k).c_k * n / 2))
    stride = cfg.extra("stride") or max(1, n // 20)
    edges = sampler.take(max(horizon, trace.tau))
    times = list(range(trace.tau, max(horizon, trace.tau) + 1, int(stride)))
    found = 0
    prev_cycle: list[int] | None = None  # in global labels
    statuses = []
    kept = []
    for t in times:
        core, mapping = _core_at(n, edges[:t], cfg.k)
        initial = None
        if prev_cycle is not None:
            local = {v: i for i, v in enumerate(mapping)}
            cyc = [local[v] for v in prev_cycle]
            rest = sorted(set(range(core.n)) - set(cyc))
            initial = PathSystem(core.n, cycles=[cyc] + [[v] for v in rest])
        res = hamiltonicity_solve(core, int(cfg.extra("restarts")), split_seed(seed, t), initial=initial)
        if res.status == "found":
            found += 1
            prev_cycle = [mapping[v] for v in res.cycle]
        else:
            prev_cycle = None
        statuses.append(res.status)
        kept.append(prev_cycle)
    rec.extra.update(snapshot_times=times, snapshot_status=statuses,
                     snapshots_found=found, snapshots_total=len(times))
    if cfg.extra("keep_cycles"):
        rec.extra["cycles"] = kept
    rec.ham_status = "found" if found == len(times) else "unknown"


def core_budget_stream(sampler: ProcessSampler, start: int, mapping: list[int], total: int,
                       max_draw: int | None = None) -> list[tuple[int, int]]:
    """The next process edges after ``start`` with both ends in the core,
    relabelled to core indices, up to ``total`` of them."""
    local = {v: i for i, v in enumerate(mapping)}
    cap = sampler.capacity
    limit = cap if max_draw is None else min(cap, start + max_draw)
    out: list[tuple[int, int]] = []
    t = start
    chunk = max(64, 4 * total)
    while len(out) < total and t < limit:
        end = min(limit, t + chunk)
        for u, v in sampler.take(end)[t:end]:
            if u in local and v in local:
                a, b = local[u], local[v]
                out.append((a, b) if a < b else (b, a))
                if len(out) == total:
                    break
        t = end
    return out


def _trial_pack(cfg, seed, rec):
    trace, sampler = _trial_tau(cfg, seed, rec)
    n, k = cfg.n, cfg.k
    m = min(pair_count(n), int(round(cfg.extra("density_mult") * compute_ck(k).c_k * n / 2)))
    edges = sampler.take(m)
    core, mapping = _core_at(n, edges, k)
    k1 = k1_of(k)
    total = cfg.extra("budget_total")
    total = int(n / math.log(math.log(n))) if total is None else int(total)
    stream = core_budget_stream(sampler, m, mapping, total)
    rec.extra.update(k1=k1, m=m, pack_core_size=core.n)
    if core.n == 0:
        rec.extra.update(attempted=0)
        return
    result = pack_hamilton_cycles(core, k, split_budget(stream, k1))
    rec.pack_succeeded = result.succeeded
    rec.extra.update(attempted=result.attempted, budgets=result.per_cycle_budget_used,
                     downgraded=result.downgraded, backbone_min_degrees=result.backbone_min_degrees)


def _trial_degree_fit(cfg, seed, rec):
    trace, sampler = _trial_tau(cfg, seed, rec)
    if trace.tau is None:
        return
    core, _ = _core_at(cfg.n, sampler.edges[: trace.tau], cfg.k)
    degrees = core.degrees()
    hist = {int(d): int(c) for d, c in zip(*np.unique(degrees, return_counts=True))}
    fit = fit_truncated_poisson(hist, cfg.k)
    rec.extra.update(mu_hat=fit.mu_hat, tv=fit.tv_distance, degenerate=fit.degenerate)


_RUNNERS = {
    "tau_only": _trial_tau,
    "ham_at_tau": _trial_ham_at_tau,
    "ham_trajectory": _trial_trajectory,
    "pack": _trial_pack,
    "degree_fit": _trial_degree_fit,
}


def run_trial(cfg: ExperimentConfig, index: int, timing: bool = True) -> TrialRecord:
    """One seeded trial; errors are caught and stored in ``extra['error']``.

    With ``timing=False`` the wall time is recorded as 0 so that repeated
    runs produce identical records.
    """
    if not 0 <= index < cfg.trials:
        raise IndexError(f"trial index {index} outside [0, {cfg.trials})")
    seed = trial_seed(cfg, index)
    rec = TrialRecord(seed=seed, index=index)
    start = time.perf_counter()
    try:
        _RUNNERS[cfg.mode](cfg, seed, rec)
    except Exception as exc:
        rec.extra["error"] = f"{type(exc).__name__}: {exc}"
        rec.extra["traceback"] = traceback.format_exc(limit=4)
    rec.wall_time = round(time.perf_counter() - start, 6) if timing else 0.0
    return rec


def _quantiles(values: list[float], qs=(0.1, 0.5, 0.9)) -> dict[str, float]:
    if not values:
        return {}
    arr = np.asarray(values, dtype=float)
    return {f"q{int(q * 100)}": float(np.quantile(arr, q)) for q in qs}


def summarize(cfg: ExperimentConfig, records: list[TrialRecord]) -> dict:
    """Aggregates recomputable from the records alone."""
    ok = [r for r in records if not r.failed]
    taus = [r.tau / cfg.n for r in ok if r.tau is not None]
    summary: dict[str, Any] = {
        "mode": cfg.mode, "n": cfg.n, "k": cfg.k,
        "trials": len(records), "failed": len(records) - len(ok),
        "tau_over_n_mean": statistics.fmean(taus) if taus else None,
        "tau_over_n_std": statistics.stdev(taus) if len(taus) > 1 else 0.0 if taus else None,
        "core_fraction": _quantiles([r.core_size / cfg.n for r in ok]),
    }
    if cfg.k >= 3 and taus:
        summary["tau_ratio_to_ck_half"] = summary["tau_over_n_mean"] / (compute_ck(cfg.k).c_k / 2)
    if cfg.mode in ("ham_at_tau", "ham_trajectory"):
        summary["ham_found_rate"] = sum(r.ham_status == "found" for r in ok) / len(ok) if ok else 0.0
    if cfg.mode == "ham_trajectory":
        tot = sum(r.extra.get("snapshots_total", 0) for r in ok)
        summary["snapshot_found_rate"] = sum(r.extra.get("snapshots_found", 0) for r in ok) / tot if tot else 0.0
    if cfg.mode == "pack":
        summary["pack_succeeded_mean"] = statistics.fmean(r.pack_succeeded for r in ok) if ok else 0.0
        summary["pack_full_rate"] = sum(r.pack_succeeded == r.extra.get("k1") for r in ok) / len(ok) if ok else 0.0
    if cfg.mode == "degree_fit":
        tvs = [r.extra["tv"] for r in ok if "tv" in r.extra]
        summary["degree_fit_tv_mean"] = statistics.fmean(tvs) if tvs else None
    return summary


@dataclass
class ExperimentResult:
    records: list[TrialRecord]
    summary: dict

    @property
    def all_failed(self) -> bool:
        return bool(self.records) and all(r.failed for r in self.records)


def resolve_threads(threads: int | None = None) -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            threads = int(env)
        except ValueError:
            raise ConfigError(f"{THREADS_ENV}={env!r} is not an integer") from None
    return max(1, threads or 1)


def _run_one(args):
    cfg, index, timing = args
    return run_trial(cfg, index, timing)


def run_experiment(cfg: ExperimentConfig, threads: int | None = None, timing: bool = True) -> ExperimentResult:
    """Run every trial (in worker processes when ``threads > 1``); records
    come back sorted by index, independent of the degree of parallelism."""
    workers = min(resolve_threads(threads), cfg.trials)
    jobs = [(cfg, i, timing) for i in range(cfg.trials)]
    if workers == 1:
        records = [_run_one(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_run_one, jobs))
    records.sort(key=lambda r: r.index)
    return ExperimentResult(records, summarize(cfg, records))


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------

def _csv_value(v) -> str:
    return "" if v is None else str(v)


def emit(records: list[TrialRecord], summary: dict | None, fmt: str, path) -> Path:
    """Write records as CSV (fixed columns) or JSON ``{records, summary}``."""
    path = Path(path)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\r\n")
        writer.writerow(CSV_COLUMNS)
        for r in records:
            writer.writerow([_csv_value(getattr(r, c)) for c in CSV_COLUMNS])
        text = buf.getvalue()
    elif fmt == "json":
        text = json.dumps({"records": [r.as_dict() for r in records], "summary": summary},
                          indent=2, allow_nan=False) + "\n"
    else:
        raise ValueError(f"unknown format {fmt!r}")
    try:
        path.write_text(text, newline="")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    return path


def load_json_records(path) -> tuple[list[TrialRecord], dict]:
    with open(path) as fh:
        data = json.load(fh)
    return [TrialRecord(**r) for r in data["records"]], data["summary"]
