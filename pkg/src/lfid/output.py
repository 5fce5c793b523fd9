"""CSV / JSON emission for FIB dumps and experiment records."""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from typing import Iterable, Optional

from . import __version__
from .experiments import RNG_ID, TrialRecord
from .topology import Topology

FORMAT_VERSION = 1

RECORD_COLUMNS = [
    "algorithm", "run", "src", "dst", "scenario", "k", "recovered",
    "path_cost_milli", "optimal_cost_milli", "stretch",
    "walk_cost_milli", "walk_optimal_cost_milli", "walk_stretch", "path", "failure",
]


def header_lines(topology: Topology, algorithms: Iterable[str], config: dict) -> list[str]:
    cfg = " ".join(f"{k}={v}" for k, v in sorted(config.items()))
    return [
        f"# lfid {__version__} format_version={FORMAT_VERSION}",
        f"# topology_sha256={topology.digest()} n={topology.n} m={topology.m}",
        f"# algorithms={','.join(algorithms)}",
        f"# config {cfg}",
        f"# seed={config.get('seed', '')}",
        f"# rng={RNG_ID}",
    ]


def _fmt_stretch(value: Optional[float]) -> str:
    return "" if value is None else f"{value:.6f}"


def _fmt_failure(failure: tuple, name) -> str:
    parts = []
    for item in failure:
        if isinstance(item, tuple):
            parts.append("-".join(name(v) for v in item))
        else:
            parts.append(name(item))
    return ";".join(parts)


def record_row(r: TrialRecord, topology: Topology) -> dict:
    name = topology.labels.__getitem__
    return {
        "algorithm": r.algorithm,
        "run": r.run,
        "src": name(r.src),
        "dst": name(r.dst),
        "scenario": r.scenario,
        "k": r.k_index,
        "recovered": int(r.recovered),
        "path_cost_milli": "" if r.path_cost is None else r.path_cost,
        "optimal_cost_milli": "" if r.optimal_cost is None else r.optimal_cost,
        "stretch": _fmt_stretch(r.stretch),
        "walk_cost_milli": "" if r.walk_cost is None else r.walk_cost,
        "walk_optimal_cost_milli": "" if r.walk_optimal_cost is None else r.walk_optimal_cost,
        "walk_stretch": _fmt_stretch(r.walk_stretch),
        "path": " ".join(name(v) for v in r.path),
        "failure": _fmt_failure(r.failure, name),
    }


def records_to_csv(records: Iterable[TrialRecord], topology: Topology,
                   header: Iterable[str] = ()) -> str:
    out = io.StringIO()
    for line in header:
        out.write(line + "\n")
    writer = csv.DictWriter(out, RECORD_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for r in records:
        writer.writerow(record_row(r, topology))
    return out.getvalue()


def records_to_json(records: Iterable[TrialRecord], topology: Topology,
                    header: Iterable[str] = ()) -> str:
    rows = []
    for r in records:
        row = record_row(r, topology)
        row["recovered"] = bool(row["recovered"])
        for key in ("path_cost_milli", "optimal_cost_milli",
                    "walk_cost_milli", "walk_optimal_cost_milli"):
            row[key] = row[key] if row[key] != "" else None
        row["stretch"] = r.stretch
        row["walk_stretch"] = r.walk_stretch
        row["path"] = [topology.labels[v] for v in r.path]
        rows.append(row)
    doc = {"meta": [h.lstrip("# ") for h in header], "records": rows}
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def table_to_csv(rows: list[dict], header: Iterable[str] = ()) -> str:
    out = io.StringIO()
    for line in header:
        out.write(line + "\n")
    if rows:
        writer = csv.DictWriter(out, list(rows[0]), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: ("" if v is None else v) for k, v in row.items()})
    return out.getvalue()


def table_to_json(rows: list[dict], header: Iterable[str] = ()) -> str:
    doc = {"meta": [h.lstrip("# ") for h in header], "rows": rows}
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def write_atomic(path: str, text: str) -> None:
    """Write via a temporary file in the target directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".lfid-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
