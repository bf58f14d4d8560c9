import csv
import json
import subprocess
import sys
import xml.etree.ElementTree as ET
from pathlib import Path

import numpy as np
import pytest

from mgalab import report, svg
from mgalab.cli import main
from mgalab.harness import ExperimentConfig, run
from mgalab.lp import BudgetSpec
from mgalab.testbeds import TestbedSpec

CONFIGS = Path(__file__).resolve().parents[1] / "configs"
SVG_NS = "{http://www.w3.org/2000/svg}"


@pytest.fixture(scope="module")
def ref3d_report():
    return run(ExperimentConfig(TestbedSpec("reference3d"), method="random", iterations=30,
                                budget=BudgetSpec("absolute", 3.0)), seed=2)


def _rows(path):
    return list(csv.DictReader(Path(path).open()))


def test_run_writes_bundle(tmp_path):
    assert main(["run", "--config", str(CONFIGS / "ref3d_hsj.json"), "--out", str(tmp_path)]) == 0
    meta = json.loads((tmp_path / "report.json").read_text())
    assert meta["summary"]["iterations"] == 10
    sols = _rows(tmp_path / "solutions.csv")
    assert list(sols[0]) == list(report.SOLUTIONS_FIELDS)
    assert len(sols) == len(_rows(tmp_path / "vesa.csv")) == len(_rows(tmp_path / "metrics.csv")) == 10
    assert sum(int(r["unique_flag"]) for r in sols) == meta["summary"]["unique_count"]
    for name in ("trajectory.svg", "runtime.svg", "pairwise_hulls.svg"):
        assert (tmp_path / name).exists()


def test_run_overrides(tmp_path, monkeypatch):
    monkeypatch.setenv("MGA_WORKERS", "2")
    assert main(["run", "--config", str(CONFIGS / "ref3d_hsj.json"), "--method", "random",
                 "--iterations", "7", "--slack", "2", "--slack-mode", "abs", "--seed", "5",
                 "--out", str(tmp_path)]) == 0
    meta = json.loads((tmp_path / "report.json").read_text())
    assert meta["config"]["workers"] == 2
    assert meta["config"]["method"] == "random" and meta["seed"] == 5
    assert meta["budget"] == 4.0 and len(_rows(tmp_path / "solutions.csv")) == 7


def test_usage_errors(tmp_path, capsys):
    assert main(["run", "--config", str(CONFIGS / "ref3d_hsj.json"), "--bogus"]) == 1
    assert main(["frobnicate"]) == 1
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"method": "hsj", "iteratons": 3}))
    assert main(["run", "--config", str(bad), "--out", str(tmp_path)]) == 1
    assert "iteratons" in capsys.readouterr().err
    bad.write_text("{not json")
    assert main(["run", "--config", str(bad)]) == 1
    assert main(["run", "--config", str(tmp_path / "missing.json")]) == 1


def test_run_failure_exit_code(tmp_path):
    cfg = tmp_path / "maa20.json"
    cfg.write_text(json.dumps({"testbed": {"kind": "random_lp", "dimension": 20}, "method": "maa"}))
    assert main(["run", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 2


def test_solve_ref_and_gen_testbed(tmp_path, capsys):
    assert main(["solve-ref"]) == 0
    out = capsys.readouterr().out
    assert "objective 2.0" in out and "x 2.0 0.0 0.0" in out
    assert main(["gen-testbed", "--kind", "random_lp", "--dimension", "4", "--seed", "1",
                 "-o", str(tmp_path / "r.lp")]) == 0
    assert main(["solve-ref", "--lp", str(tmp_path / "r.lp")]) == 0
    assert main(["gen-testbed", "--kind", "toy_cem", "-o", str(tmp_path / "cem.lp")]) == 0
    assert (tmp_path / "cem.techs.csv").exists()


def test_merge_and_report(tmp_path):
    a, b, m = tmp_path / "a", tmp_path / "b", tmp_path / "m"
    for d, seed in ((a, "1"), (b, "2")):
        assert main(["run", "--config", str(CONFIGS / "ref3d_maa.json"), "--method", "random",
                     "--iterations", "15", "--seed", seed, "--out", str(d)]) == 0
    assert main(["merge", str(a / "report.json"), str(b / "report.json"), "-o", str(m)]) == 0
    u = lambda d: json.loads((d / "report.json").read_text())["summary"]["unique_count"]
    assert u(m) >= max(u(a), u(b))
    assert main(["report", str(a), str(b), "-o", str(tmp_path / "fig")]) == 0
    tree = ET.parse(tmp_path / "fig" / "trajectory.svg")
    assert len(tree.getroot().findall(f"{SVG_NS}polyline")) == 2


def test_sweep_command(tmp_path):
    cfg = tmp_path / "sweep.json"
    cfg.write_text(json.dumps([
        {"testbed": {"kind": "random_lp", "dimension": 5}, "method": m, "iterations": 4, "seeds": [0, 1]}
        for m in ("hsj", "random")]))
    assert main(["sweep", "--config", str(cfg), "-o", str(tmp_path)]) == 0
    assert len(_rows(tmp_path / "sweep.csv")) == 4


def test_audit_dispatch_command(tmp_path):
    assert main(["audit-dispatch", "--mode", "generation", "--iterations", "2", "--seed", "3",
                 "-o", str(tmp_path)]) == 0
    rows = _rows(tmp_path / "audit.csv")
    assert len(rows) == 2 and "variable_cost_error_pct" in rows[0]


def test_console_entry_point(tmp_path):
    r = subprocess.run([sys.executable, "-m", "mgalab.cli", "solve-ref"], capture_output=True, text=True)
    assert r.returncode == 0 and "status optimal" in r.stdout


def test_csv_round_trip(tmp_path, ref3d_report):
    report.write_bundle(ref3d_report, tmp_path)
    back = report.load_bundle(tmp_path / "report.json")
    assert report.recompute_summary(back) == ref3d_report.summary
    assert back.vesa_trajectory == ref3d_report.vesa_trajectory
    for r0, r1 in zip(ref3d_report.rows, back.rows):
        assert np.array_equal(r0.point, r1.point) and np.array_equal(r0.objective, r1.objective)


def test_svg_valid_stable_and_data_backed(tmp_path, ref3d_report):
    report.write_bundle(ref3d_report, tmp_path)
    sols = _rows(tmp_path / "solutions.csv")
    points = {tuple(report.split_vec(r["mga_point"])) for r in sols}
    vesa_vals = {(int(r["iteration"]), float(r["total"])) for r in _rows(tmp_path / "vesa.csv")}
    base = tuple(ref3d_report.base_point)

    hull_svg = svg.emit_pairwise_hulls(ref3d_report)
    assert hull_svg == svg.emit_pairwise_hulls(ref3d_report)
    root = ET.fromstring(hull_svg)
    assert root.tag == f"{SVG_NS}svg"
    panels = root.findall(f"{SVG_NS}g")
    assert len(panels) == 3
    for g in panels:
        i, j = map(int, g.get("data-pair").split(","))
        for c in g.findall(f"{SVG_NS}circle"):
            xy = (float(c.get("data-x")), float(c.get("data-y")))
            cands = points | {base}
            assert any(p[i] == xy[0] and p[j] == xy[1] for p in cands)
        assert len(g.findall(f"{SVG_NS}circle[@class='base']")) == 1

    traj = ET.fromstring(svg.emit_trajectories([ref3d_report]))
    for c in traj.iter(f"{SVG_NS}circle"):
        assert (int(c.get("data-x")), float(c.get("data-y"))) in vesa_vals
    ET.fromstring(svg.emit_runtime_bars([ref3d_report]))


def test_svg_degenerate_and_guards(ref3d_report):
    from mgalab.harness import RunRow
    rep = ref3d_report
    flat = type(rep)(**{**rep.__dict__, "rows": [
        RunRow(k + 1, "random", 1, 1, 2, 0.0, True, 0.0, np.ones(3), np.array([k, 2.0 * k, 1.0]))
        for k in range(4)], "base_point": np.array([0.0, 0.0, 1.0])})
    root = ET.fromstring(svg.emit_pairwise_hulls(flat))
    # the (x1, x2) projection is a segment: drawn without a polygon fill
    g = [g for g in root.findall(f"{SVG_NS}g") if g.get("data-pair") == "0,1"][0]
    assert g.findall(f"{SVG_NS}polyline") and not g.findall(f"{SVG_NS}polygon")
    with pytest.raises(ValueError):
        svg.emit_pairwise_hulls(rep, list(range(13)))
    empty = type(rep)(**{**rep.__dict__, "rows": []})
    with pytest.raises(ValueError, match="nothing to plot"):
        svg.emit_trajectories([empty])
    two = ET.fromstring(svg.emit_pairwise_hulls([rep, rep]))
    g0 = two.findall(f"{SVG_NS}g")[0]
    assert len(g0.findall(f"{SVG_NS}polygon")) == 2
