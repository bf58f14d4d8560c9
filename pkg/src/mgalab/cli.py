"""Command-line front end.

Exit codes: 0 success, 1 usage/config error, 2 run failure.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import harness, report, svg
from .lp import BudgetSpec, solve
from .lpformat import read_lp, write_lp
from .testbeds import TestbedSpec, random_lp, reference_3d

log = logging.getLogger("mgalab")

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit 2; usage errors are 1 here
        raise UsageError(f"{self.prog}: {message}")


def _load_config(path) -> harness.ExperimentConfig:
    try:
        data = json.loads(Path(path).read_text())
    except FileNotFoundError as exc:
        raise UsageError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError(f"config {path} must be a JSON object")
    return harness.ExperimentConfig.from_dict(data)


def _apply_overrides(cfg: harness.ExperimentConfig, a) -> harness.ExperimentConfig:
    kw = {}
    if getattr(a, "seed", None) is not None:
        kw["seeds"] = (a.seed,)
    workers = os.environ.get("MGA_WORKERS")
    if workers:
        try:
            kw["workers"] = int(workers)
        except ValueError as exc:
            raise UsageError(f"MGA_WORKERS must be an integer, got {workers!r}") from exc
    elif getattr(a, "workers", None) is not None:
        kw["workers"] = a.workers
    if getattr(a, "iterations", None) is not None:
        kw["iterations"] = a.iterations
    if getattr(a, "method", None) is not None:
        kw["method"] = a.method
        if a.method != cfg.method:
            kw["method_params"] = {}
    if getattr(a, "slack", None) is not None or getattr(a, "slack_mode", None) is not None:
        mode = {"rel": "relative", "abs": "absolute", None: cfg.budget.mode}[a.slack_mode]
        kw["budget"] = BudgetSpec(mode, a.slack if a.slack is not None else cfg.budget.amount)
    if getattr(a, "mode", None) is not None:
        kw["testbed"] = dataclasses.replace(cfg.testbed, mga_mode=a.mode)
    try:
        return dataclasses.replace(cfg, **kw)
    except ValueError as exc:
        raise harness.ConfigError(str(exc)) from exc


def write_figures(reports, out: Path) -> None:
    reps = reports if isinstance(reports, list) else [reports]
    (out / "trajectory.svg").write_text(svg.emit_trajectories(reps))
    (out / "runtime.svg").write_text(svg.emit_runtime_bars(reps))
    dim = reps[0].dim
    if dim >= 2 and sum(r.unique for rep in reps for r in rep.rows) >= 3:
        subset = list(range(min(dim, svg.MAX_PANEL_VARS)))
        (out / "pairwise_hulls.svg").write_text(svg.emit_pairwise_hulls(reps, subset))


def _print_summary(rep) -> None:
    s = rep.summary
    print(f"{rep.run_id}: {s['iterations']} iterations, {s['unique_count']} unique "
          f"(efficiency {s['efficiency']:.3f}), VESA {s['vesa_final']:.6g}, "
          f"terminated: {s['terminated']}")
    for w in s["warnings"]:
        print(f"  warning: {w}")


# -- subcommands -------------------------------------------------------------

def cmd_solve_ref(a) -> int:
    lp = read_lp(a.lp) if a.lp else reference_3d()
    sol = solve(lp)
    print(f"status {sol.status}")
    if sol.optimal:
        print(f"objective {sol.objective_value!r}")
        print("x " + " ".join(repr(float(v)) for v in sol.values))
    return EXIT_OK if sol.optimal else EXIT_FAIL


def cmd_gen_testbed(a) -> int:
    out = Path(a.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    if a.kind == "reference3d":
        write_lp(reference_3d(), out)
    elif a.kind == "random_lp":
        write_lp(random_lp(a.dimension, a.seed), out)
    else:
        from .cem import toy_cem
        model = toy_cem(TestbedSpec("toy_cem", seed=a.seed))
        write_lp(model.lp, out)
        model.write_tech_csv(out.with_suffix(".techs.csv"))
    print(f"wrote {out}")
    return EXIT_OK


def cmd_run(a) -> int:
    cfg = _apply_overrides(_load_config(a.config), a)
    out = Path(a.out)
    reps = []
    for seed in cfg.seeds:
        rep = harness.run(cfg, seed)
        dest = out if len(cfg.seeds) == 1 else out / f"seed{seed}"
        report.write_bundle(rep, dest)
        write_figures(rep, dest)
        _print_summary(rep)
        reps.append(rep)
    return EXIT_OK


def cmd_sweep(a) -> int:
    try:
        data = json.loads(Path(a.config).read_text())
    except (FileNotFoundError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read sweep config {a.config}: {exc}") from exc
    items = data if isinstance(data, list) else data.get("configs") if isinstance(data, dict) else None
    if not isinstance(items, list) or (isinstance(data, dict) and set(data) != {"configs"}):
        raise UsageError("sweep config must be a JSON list of configs or {\"configs\": [...]}")
    cfgs = [_apply_overrides(harness.ExperimentConfig.from_dict(d), a) for d in items]
    rows = harness.sweep(cfgs)
    out = Path(a.out)
    out.mkdir(parents=True, exist_ok=True)
    report.write_rows_csv(rows, out / "sweep.csv", harness.SWEEP_FIELDS)
    bad = sum(r["status"] == "failed" for r in rows)
    print(f"{len(rows)} rows ({bad} failed) -> {out / 'sweep.csv'}")
    return EXIT_OK


def cmd_merge(a) -> int:
    reps = [report.load_bundle(p) for p in a.reports]
    merged = reps[0]
    for r in reps[1:]:
        merged = harness.merge_reports(merged, r)
    out = Path(a.out)
    report.write_bundle(merged, out)
    write_figures(reps, out)
    _print_summary(merged)
    return EXIT_OK


def cmd_audit(a) -> int:
    mode = {"rel": "relative", "abs": "absolute"}[a.slack_mode]
    rows = harness.dispatch_audit(TestbedSpec("toy_cem"), mode=a.mode or "capacity",
                                  iterations=a.iterations or 20, seed=a.seed or 0,
                                  budget=BudgetSpec(mode, a.slack))
    out = Path(a.out)
    out.mkdir(parents=True, exist_ok=True)
    report.write_rows_csv(rows, out / "audit.csv", harness.AUDIT_FIELDS)
    err = np.median([r["variable_cost_error_pct"] for r in rows])
    print(f"{len(rows)} audited solutions, median variable-cost error {err:.4g}% -> {out / 'audit.csv'}")
    return EXIT_OK


def cmd_report(a) -> int:
    reps = [report.load_bundle(p) for p in a.bundles]
    out = Path(a.out)
    out.mkdir(parents=True, exist_ok=True)
    write_figures(reps, out)
    print(f"figures written to {out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="mgalab", description="MGA vector-selection benchmarks")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def run_flags(p, config=True):
        if config:
            p.add_argument("--config", required=True)
        p.add_argument("--seed", type=int)
        p.add_argument("--workers", type=int)
        p.add_argument("--iterations", type=int)
        p.add_argument("--slack", type=float)
        p.add_argument("--slack-mode", choices=("rel", "abs"))
        p.add_argument("--method", choices=harness.METHODS)
        p.add_argument("--mode", choices=("capacity", "generation"))
        p.add_argument("--out", "-o", default="out")

    p = sub.add_parser("solve-ref", help="solve the 3-variable reference LP (or --lp FILE)")
    p.add_argument("--lp")
    p.set_defaults(fn=cmd_solve_ref)

    p = sub.add_parser("gen-testbed", help="write a testbed LP in the text format")
    p.add_argument("--kind", choices=("reference3d", "random_lp", "toy_cem"), default="random_lp")
    p.add_argument("--dimension", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", "-o", required=True)
    p.set_defaults(fn=cmd_gen_testbed)

    p = sub.add_parser("run", help="one MGA run per seed, written as a report bundle")
    run_flags(p)
    p.set_defaults(fn=cmd_run)

    p = sub.add_parser("sweep", help="comparison table over a list of configs")
    run_flags(p)
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("merge", help="superimpose report bundles")
    p.add_argument("reports", nargs="+")
    p.add_argument("--out", "-o", required=True)
    p.set_defaults(fn=cmd_merge)

    p = sub.add_parser("audit-dispatch", help="redispatch audit on the toy capacity model")
    p.add_argument("--mode", choices=("capacity", "generation"), default="capacity")
    p.add_argument("--iterations", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--slack", type=float, default=0.1)
    p.add_argument("--slack-mode", choices=("rel", "abs"), default="rel")
    p.add_argument("--out", "-o", default="audit")
    p.set_defaults(fn=cmd_audit)

    p = sub.add_parser("report", help="regenerate figures from report bundles")
    p.add_argument("bundles", nargs="+")
    p.add_argument("--out", "-o", required=True)
    p.set_defaults(fn=cmd_report)
    return ap


def main(argv=None) -> int:
    try:
        a = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if a.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return a.fn(a)
    except (UsageError, harness.ConfigError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001 - any run failure maps to exit 2
        print(f"run failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
