"""Command-line interface.

Exit codes: 0 success, 1 usage / input / IO error, 2 a loop was found by
``verify``.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from typing import Optional, Sequence

from . import __version__
from .algorithms import ALGORITHMS, OPT, UNIMPLEMENTED, compute_fib
from .experiments import (
    ADJACENT,
    BACKTRACKING,
    LINK,
    NODE,
    ExperimentConfig,
    k_path_stats,
    multi_failure_experiment,
    runtime_benchmark,
    single_failure_experiment,
    summarize_k_paths,
    summarize_multi,
    summarize_single,
)
from .fib import EXCISED, FULL_GRAPH
from .forwarding import enumerate_all_walks
from .output import (
    header_lines,
    records_to_csv,
    records_to_json,
    table_to_csv,
    table_to_json,
    write_atomic,
)
from .pipeline import compute_lfid
from .topology import EXPLICIT, HOP_COUNT, TopologyError, bundled_topology, read_topology

log = logging.getLogger("lfid")

SUBCOMMANDS = ("compute", "paths", "single-failure", "multi-failure", "bench", "verify")
TOKENS = list(ALGORITHMS) + list(UNIMPLEMENTED) + [OPT]


class CliError(Exception):
    pass


def _algorithms(values, default):
    if not values:
        return list(default)
    out = []
    for value in values:
        for token in value.split(","):
            token = token.strip().lower()
            if token not in TOKENS:
                raise CliError(f"unknown algorithm {token!r}; choose from {', '.join(TOKENS)}")
            if token not in out:
                out.append(token)
    return out


def _load(path: str, hop_count: bool):
    mode = HOP_COUNT if hop_count else EXPLICIT
    if not os.path.exists(path):
        try:
            return bundled_topology(path, mode)
        except FileNotFoundError:
            raise CliError(f"topology file not found: {path}") from None
    try:
        return read_topology(path, mode)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lfid",
        description="Multipath nexthop sets (LFID, ECMP, DW, DWE) and their evaluation.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def common(p, algo_help, topo_nargs=None):
        p.add_argument("--topo", required=True, nargs=topo_nargs,
                       help="edge-list file, or a bundled name such as 'abilene'")
        p.add_argument("--hop-count", action="store_true",
                       help="ignore file weights and use 1 for every link")
        p.add_argument("--algo", action="append", metavar="TOKEN",
                       help=f"{algo_help} Tokens: {', '.join(TOKENS)}. Repeat or comma-separate.")
        p.add_argument("--workers", type=int, default=1, help="worker processes (default 1)")
        p.add_argument("--output", "-o", help="write here instead of stdout")
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("compute", help="dump the FIB as CSV")
    common(p, "Algorithm (default lfid).")
    p.add_argument("--classification", choices=(EXCISED, FULL_GRAPH), default=EXCISED,
                   help="LFID downward test: node-excised (default) or full-graph costs")

    p = sub.add_parser("verify", help="check every destination for forwarding loops")
    common(p, "Algorithms to verify (default lfid).")

    p = sub.add_parser("paths", help="K-shortest-path availability and stretch")
    common(p, "Algorithms (default ecmp,dw,dwe,lfid).")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--summary", action="store_true", help="emit aggregated table")

    p = sub.add_parser("single-failure", help="single link/node failure protection")
    common(p, "Algorithms (default ecmp,dw,dwe,lfid).")
    p.add_argument("--mode", choices=(LINK, NODE), default=LINK)
    p.add_argument("--vantage", choices=(ADJACENT, BACKTRACKING), default=ADJACENT)
    p.add_argument("--summary", action="store_true", help="emit protection relative to OPT")

    p = sub.add_parser("multi-failure", help="chains of failures on the path in use")
    common(p, "Algorithms (default ecmp,dw,dwe,lfid).")
    p.add_argument("--k", type=int, default=10, help="maximum failures per chain")
    p.add_argument("--runs", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--summary", action="store_true", help="emit aggregated table")

    p = sub.add_parser("bench", help="time full-network FIB computation")
    common(p, "Algorithms (default ecmp,dw,dwe,lfid).", topo_nargs="+")
    p.add_argument("--repetitions", type=int, default=3)
    return parser


def _emit(args, text: str) -> None:
    if args.output:
        write_atomic(args.output, text)
    else:
        sys.stdout.write(text)


def _experiment_algos(args):
    algos = _algorithms(args.algo, ALGORITHMS)
    notes = [f"# {a}: unimplemented" for a in algos if a in UNIMPLEMENTED]
    return [a for a in algos if a not in UNIMPLEMENTED], notes


def _fib_or_opt(token, topology, workers):
    return None if token == OPT else compute_fib(token, topology, workers=workers)


def _records_out(args, topology, algos, notes, config: dict, records, summary=None):
    header = header_lines(topology, algos, config) + notes
    if summary is not None:
        text = table_to_json(summary, header) if args.format == "json" else table_to_csv(summary, header)
    elif args.format == "json":
        text = records_to_json(records, topology, header)
    else:
        text = records_to_csv(records, topology, header)
    _emit(args, text)


def cmd_compute(args) -> int:
    topology = _load(args.topo, args.hop_count)
    algos = _algorithms(args.algo, ["lfid"])
    if len(algos) != 1:
        raise CliError("compute takes exactly one algorithm")
    token = algos[0]
    if token == OPT:
        raise CliError("OPT is not a FIB; use it with the experiment commands")
    if token == "lfid":
        fib = compute_lfid(topology, classification=args.classification, workers=args.workers)
    else:
        fib = compute_fib(token, topology, workers=args.workers)
    if args.format == "json":
        rows = [{"node": topology.labels[x], "dest": topology.labels[d],
                 "nexthop": topology.labels[e.neighbor], "cost_milli": e.cost,
                 "kind": e.kind.value} for x, d, e in fib.rows()]
        _emit(args, table_to_json(rows))
    else:
        _emit(args, fib.to_csv(topology))
    return 0


def cmd_verify(args) -> int:
    topology = _load(args.topo, args.hop_count)
    algos = _algorithms(args.algo, ["lfid"])
    status = 0
    lines = []
    for token in algos:
        if token == OPT:
            raise CliError("OPT is not a FIB and cannot be verified")
        fib = compute_fib(token, topology, workers=args.workers)
        verdicts = [enumerate_all_walks(fib, d) for d in range(topology.n)]
        bad = [v for v in verdicts if not v.loop_free]
        if bad:
            status = 2
            for v in bad:
                walk = " -> ".join(topology.labels[x] for x in v.walk)
                lines.append(f"{token} counterexample dest={topology.labels[v.destination]}: {walk}")
        lines.append(f"{token} loop_free: {len(verdicts) - len(bad)}/{len(verdicts)} destinations")
    _emit(args, "\n".join(lines) + "\n")
    return status


def cmd_paths(args) -> int:
    topology = _load(args.topo, args.hop_count)
    algos, notes = _experiment_algos(args)
    config = ExperimentConfig(k=args.k, runs=1, workers=args.workers)
    records = []
    for token in algos:
        fib = _fib_or_opt(token, topology, args.workers)
        records += k_path_stats(topology, fib, config, algorithm=token)
    summary = summarize_k_paths(records) if args.summary else None
    _records_out(args, topology, algos, notes, {"k": args.k}, records, summary)
    return 0


def cmd_single(args) -> int:
    topology = _load(args.topo, args.hop_count)
    algos, notes = _experiment_algos(args)
    records = []
    for token in algos:
        fib = _fib_or_opt(token, topology, args.workers)
        records += single_failure_experiment(topology, fib, args.mode, args.vantage,
                                             algorithm=token, workers=args.workers)
    summary = summarize_single(records) if args.summary else None
    _records_out(args, topology, algos, notes,
                 {"mode": args.mode, "vantage": args.vantage}, records, summary)
    return 0


def cmd_multi(args) -> int:
    topology = _load(args.topo, args.hop_count)
    algos, notes = _experiment_algos(args)
    config = ExperimentConfig(k=args.k, runs=args.runs, seed=args.seed, workers=args.workers)
    records = []
    for token in algos:
        fib = _fib_or_opt(token, topology, args.workers)
        records += multi_failure_experiment(topology, fib, config, algorithm=token)
    summary = None
    if args.summary:
        summary = summarize_multi(records, config.runs * len(topology.pairs()))
    _records_out(args, topology, algos, notes,
                 {"k": args.k, "runs": args.runs, "seed": args.seed}, records, summary)
    return 0


def cmd_bench(args) -> int:
    topologies = {path: _load(path, args.hop_count) for path in args.topo}
    algos = [a for a in _algorithms(args.algo, ALGORITHMS) if a in ALGORITHMS]
    rows = runtime_benchmark(topologies, algos, args.repetitions, args.workers)
    header = [f"# lfid {__version__} runtime benchmark repetitions={args.repetitions}"]
    text = table_to_json(rows, header) if args.format == "json" else table_to_csv(rows, header)
    _emit(args, text)
    return 0


COMMANDS = {
    "compute": cmd_compute,
    "verify": cmd_verify,
    "paths": cmd_paths,
    "single-failure": cmd_single,
    "multi-failure": cmd_multi,
    "bench": cmd_bench,
}


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        if args.workers < 1:
            raise CliError("--workers must be >= 1")
        for name in ("k", "runs", "repetitions"):
            if getattr(args, name, 1) < 1:
                raise CliError(f"--{name} must be >= 1")
        return COMMANDS[args.command](args)
    except (CliError, TopologyError, NotImplementedError, OSError, ValueError) as exc:
        print(f"lfid: error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
