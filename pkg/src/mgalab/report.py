"""Report bundles on disk: report.json, solutions.csv, metrics.csv, vesa.csv.

Floats are written with ``repr`` so a bundle loads back bit-identically.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .harness import RunReport, RunRow, _summarize

SOLUTIONS_FIELDS = ("run_id", "method", "iteration", "formulate_ns", "solve_ns", "cost",
                    "unique_flag", "objective_vector", "mga_point")
METRICS_FIELDS = ("run_id", "iteration", "formulate_ns", "solve_ns", "wall_ns", "unique_flag",
                  "vesa_total", "tag")
VESA_FIELDS = ("run_id", "iteration", "total")


def join_vec(v) -> str:
    return ";".join(repr(float(x)) for x in np.asarray(v, dtype=float).ravel())


def split_vec(s: str) -> np.ndarray:
    return np.array([float(t) for t in s.split(";")]) if s else np.zeros(0)


def _jsonable(o):
    if isinstance(o, dict):
        return {str(k): _jsonable(v) for k, v in o.items()}
    if isinstance(o, (list, tuple)):
        return [_jsonable(v) for v in o]
    if isinstance(o, np.ndarray):
        return [_jsonable(v) for v in o.tolist()]
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    return o


def write_bundle(report: RunReport, out_dir) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    meta = {
        "run_id": report.run_id, "method": report.method, "seed": report.seed,
        "dim": report.dim, "mga_vars": list(report.mga_vars),
        "optimal_value": report.optimal_value, "budget": report.budget,
        "base_point": report.base_point, "instance_seed": report.instance_seed,
        "config": report.config, "summary": report.summary,
    }
    (out / "report.json").write_text(json.dumps(_jsonable(meta), indent=2, sort_keys=True) + "\n")
    rid = report.run_id
    with (out / "solutions.csv").open("w", newline="") as f:
        w = csv.writer(f)
        w.writerow(SOLUTIONS_FIELDS)
        for r in report.rows:
            w.writerow([rid, r.method, r.iteration, r.formulate_ns, r.solve_ns, repr(float(r.cost)),
                        int(r.unique), join_vec(r.objective), join_vec(r.point)])
    with (out / "metrics.csv").open("w", newline="") as f:
        w = csv.writer(f)
        w.writerow(METRICS_FIELDS)
        for r in report.rows:
            w.writerow([rid, r.iteration, r.formulate_ns, r.solve_ns, r.wall_ns, int(r.unique),
                        repr(float(r.vesa_total)), r.tag])
    with (out / "vesa.csv").open("w", newline="") as f:
        w = csv.writer(f)
        w.writerow(VESA_FIELDS)
        for r in report.rows:
            w.writerow([rid, r.iteration, repr(float(r.vesa_total))])
    return out


def _read_csv(path: Path) -> list[dict]:
    with path.open(newline="") as f:
        return list(csv.DictReader(f))


def load_bundle(path) -> RunReport:
    """Load a bundle directory (or the path of its report.json)."""
    p = Path(path)
    d = p.parent if p.name == "report.json" else p
    meta = json.loads((d / "report.json").read_text())
    sols = _read_csv(d / "solutions.csv")
    mets = {int(m["iteration"]): m for m in _read_csv(d / "metrics.csv")}
    rows = []
    for s in sols:
        it = int(s["iteration"])
        m = mets[it]
        rows.append(RunRow(it, s["method"], int(s["formulate_ns"]), int(s["solve_ns"]),
                           int(m["wall_ns"]), float(s["cost"]), bool(int(s["unique_flag"])),
                           float(m["vesa_total"]), split_vec(s["objective_vector"]),
                           split_vec(s["mga_point"]), m.get("tag", "")))
    rep = RunReport(meta["run_id"], meta["method"], meta["seed"], meta["config"], meta["dim"],
                    tuple(meta["mga_vars"]), meta["optimal_value"], meta["budget"],
                    np.array(meta["base_point"], dtype=float), rows, meta["summary"],
                    instance_seed=meta.get("instance_seed"))
    return rep


def recompute_summary(report: RunReport) -> dict:
    """Summary metrics derived from the rows alone (for round-trip checks)."""
    s = report.summary
    return _summarize(report, converged_at=s.get("converged_at"), terminated=s.get("terminated", ""),
                      warn=s.get("warnings", []), duplicate_vectors=s.get("duplicate_vectors", 0))


def write_rows_csv(rows: list[dict], path, fields=None) -> None:
    fields = list(fields or (rows[0].keys() if rows else []))
    with Path(path).open("w", newline="") as f:
        w = csv.DictWriter(f, fieldnames=fields)
        w.writeheader()
        for r in rows:
            w.writerow({k: ("" if r.get(k) is None else (repr(r[k]) if isinstance(r[k], float) else r[k]))
                        for k in fields})
