"""Command-line entry point: ``corelab <command> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .core import run_to_core
from .factors import f_factor, petersen_decompose
from .graph import Graph, format_edge_list, read_edge_list, write_edge_list
from .hamilton import hamiltonicity_solve
from .lab import ExperimentConfig, emit, run_experiment, summarize
from .structure import count_disjoint_cycles_greedy, expansion_check, tutte_scan
from .thresholds import compute_ck, gamma_bound


def _print(obj) -> None:
    print(json.dumps(obj))


def cmd_tau(args) -> int:
    trace, _ = run_to_core(args.n, args.k, args.seed, snapshot_every=args.snapshot_every)
    out = trace.as_dict()
    if trace.snapshots:
        out["snapshots"] = [list(s) for s in trace.snapshots]
    _print(out)
    return 0


def cmd_ck(args) -> int:
    _print(compute_ck(args.k, args.tol).as_dict())
    return 0


def cmd_gamma(args) -> int:
    b = gamma_bound(args.k, args.lam)
    _print({"k": args.k, "lambda": args.lam, "gamma": b.value, "log_gamma": b.log_value,
            "within_hypothesis": b.within_hypothesis})
    return 0


def cmd_verify(args) -> int:
    g = read_edge_list(args.input)
    if args.check == "expansion":
        mode = "sampled" if args.samples else "exhaustive"
        report = expansion_check(g, args.ratio, args.size_bound, mode, samples=args.samples, seed=args.seed)
        _print(report.as_dict())
    elif args.check == "tutte":
        report = tutte_scan(g, min(args.size_bound, 3), args.samples, args.seed)
        _print(report.as_dict())
    else:
        _print({"check": "cycles", "greedy_disjoint_cycles": count_disjoint_cycles_greedy(g)})
    return 0


def cmd_factor(args) -> int:
    g = read_edge_list(args.input)
    h = f_factor(g, args.f)
    if h is None:
        print(json.dumps({"status": "no_factor", "f": args.f}), file=sys.stderr)
        return 1
    if args.out:
        write_edge_list(h, args.out)
    else:
        sys.stdout.write(format_edge_list(h))
    return 0


def cmd_decompose(args) -> int:
    g = read_edge_list(args.input)
    prefix = args.out or args.input
    paths = []
    for i, factor in enumerate(petersen_decompose(g), start=1):
        p = f"{prefix}.{i}"
        write_edge_list(Graph(g.n, factor.edges()), p)
        paths.append(p)
    _print({"factors": paths})
    return 0


def cmd_ham(args) -> int:
    g = read_edge_list(args.input)
    _print(hamiltonicity_solve(g, args.restarts, args.seed).as_dict())
    return 0


def cmd_pack(args) -> int:
    cfg = ExperimentConfig(n=args.n, k=args.k, trials=1, base_seed=args.seed, mode="pack",
                           extras={"density_mult": args.density_mult})
    rec = run_experiment(cfg, threads=1).records[0]
    if rec.failed:
        print(rec.extra["error"], file=sys.stderr)
        return 1
    _print({"k1": rec.extra.get("k1"), "succeeded": rec.pack_succeeded,
            "attempted": rec.extra.get("attempted"), "budgets": rec.extra.get("budgets", [])})
    return 0


def cmd_experiment(args) -> int:
    cfg = ExperimentConfig.from_json(args.config)
    result = run_experiment(cfg, threads=args.threads)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    path = emit(result.records, result.summary, args.format, out / f"records.{args.format}")
    (out / "summary.json").write_text(json.dumps(summarize(cfg, result.records), indent=2) + "\n")
    _print({"records": str(path), "summary": result.summary})
    for r in result.records:
        if r.failed:
            print(f"trial {r.index}: {r.extra['error']}", file=sys.stderr)
    return 1 if result.all_failed else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="corelab", description="k-core and Hamiltonicity laboratory")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("tau", help="hitting time of the k-core")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--snapshot-every", type=int, default=0)
    s.set_defaults(func=cmd_tau)

    s = sub.add_parser("ck", help="emergence threshold c_k")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--tol", type=float, default=1e-9)
    s.set_defaults(func=cmd_ck)

    s = sub.add_parser("gamma", help="core-size bound gamma(k, lambda)")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--lambda", dest="lam", type=float, required=True)
    s.set_defaults(func=cmd_gamma)

    s = sub.add_parser("verify", help="structural checks on an edge-list graph")
    s.add_argument("--input", required=True)
    s.add_argument("--check", choices=("expansion", "tutte", "cycles"), required=True)
    s.add_argument("--ratio", type=float, default=2.0)
    s.add_argument("--size-bound", type=int, default=3)
    s.add_argument("--samples", type=int, default=0)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("factor", help="f-factor with constant f")
    s.add_argument("--input", required=True)
    s.add_argument("--f", type=int, required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_factor)

    s = sub.add_parser("decompose", help="2-factorization of a 2s-regular graph")
    s.add_argument("--input", required=True)
    s.add_argument("--out", help="output prefix; factor i goes to PREFIX.i")
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("ham", help="heuristic Hamilton cycle search")
    s.add_argument("--input", required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--restarts", type=int, default=8)
    s.set_defaults(func=cmd_ham)

    s = sub.add_parser("pack", help="pack edge-disjoint Hamilton cycles into a process core")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--density-mult", type=float, default=1.2)
    s.set_defaults(func=cmd_pack)

    s = sub.add_parser("experiment", help="run a configured batch of trials")
    s.add_argument("--config", required=True)
    s.add_argument("--out", default=".")
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.add_argument("--threads", type=int, default=None)
    s.set_defaults(func=cmd_experiment)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"corelab {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
