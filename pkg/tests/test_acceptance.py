"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line (printed in the terminal summary) and then
asserts it.  Tolerances are the stated ones; nothing is loosened here.
"""
import time

import numpy as np
import pytest

from conftest import matches_any
from mgalab.geometry import DimensionCapError, hull_2d, hull_volume, vesa, vesa_insert
from mgalab.harness import ConvergenceConfig, ExperimentConfig, dispatch_audit, run
from mgalab.lp import BudgetSpec, solve
from mgalab.methods import MethodState, hsj_propose
from mgalab.testbeds import TestbedSpec, enumerate_vertices, reference_3d

EQ1 = ExperimentConfig(TestbedSpec("reference3d"), budget=BudgetSpec("absolute", 3.0))
HSJ_ITERS = 10


def _hsj_ref3d():
    return run(EQ1.replace(method="hsj", iterations=HSJ_ITERS), seed=0)


def test_criterion_01_reference_base_solve(acceptance):
    t0 = time.perf_counter()
    sol = solve(reference_3d())
    dt = time.perf_counter() - t0
    ok = (sol.optimal and abs(sol.objective_value - 2) <= 1e-6
          and np.max(np.abs(sol.values - [2, 0, 0])) <= 1e-6 and dt < 1.0)
    assert acceptance(1, ok, f"z*={sol.objective_value!r} at {sol.values.tolist()} in {dt:.3f}s")


def test_criterion_02_weight_replay(acceptance):
    points = [(2, 0, 0), (0, 2, 0), (0.33, 0, 1.66), (0, 1, 1), (0, 1, 1),
              (2, 0, 0), (2, 0, 0), (0, 2, 0), (0.33, 0, 1.66), (0, 1, 1)]
    rows = [(1, 0, 0), (1, 1, 0), (2, 1, 1), (2, 2, 2), (2, 3, 3),
            (3, 3, 3), (4, 3, 3), (4, 4, 3), (5, 4, 4), (5, 5, 5)]
    got = []
    for k in range(1, 11):
        w = hsj_propose(MethodState("hsj", 3), np.array(points[:k], dtype=float)).weights
        got.append(tuple(int(v) for v in w) if np.all(w == np.round(w)) else tuple(w))
    assert acceptance(2, got == rows, f"{sum(g == r for g, r in zip(got, rows))}/10 weight rows equal")


def test_criterion_03_hsj_end_to_end(acceptance, ref3d_vertices):
    t0 = time.perf_counter()
    rep = _hsj_ref3d()
    dt = time.perf_counter() - t0
    uniq = rep.unique_points()
    subset = all(matches_any(p, ref3d_vertices, 1e-6) for p in uniq)
    ok = len(rep.rows) == HSJ_ITERS and len(uniq) <= 5 and subset and dt < 5
    assert acceptance(3, ok, f"{len(uniq)} unique (<= 5), all oracle vertices: {subset}, {dt:.2f}s")


def test_criterion_04_vertex_oracle(acceptance, ref3d_vertices):
    named = [(2, 0, 0), (3, 0, 0), (0, 2, 0), (0, 2.5, 0), (0, 1, 1), (1 / 3, 0, 5 / 3)]
    found = [matches_any(p, ref3d_vertices, 1e-2) for p in named]
    n = len(ref3d_vertices)
    note = "matches the claimed 8" if n == 8 else f"FINDING: oracle counts {n} vertices, not the claimed 8"
    verts = "; ".join("(" + ", ".join(f"{v:.4g}" for v in p) + ")" for p in ref3d_vertices)
    assert acceptance(4, all(found), f"{sum(found)}/6 named points present; {note}: {verts}")


def test_criterion_05_exhaustive_minmax(acceptance):
    rep = run(EQ1.replace(method="minmax", iterations=26), seed=0)
    pts = rep.unique_points()
    has = lambda p: matches_any(p, pts, 1e-6)
    ok = len(rep.rows) == 26 and has((3, 0, 0)) and has((0, 2.5, 0)) and not has((0, 2, 0))
    assert acceptance(5, ok, f"{len(rep.rows)} sign vectors, {len(pts)} unique; "
                             f"(3,0,0):{has((3, 0, 0))} (0,2.5,0):{has((0, 2.5, 0))} "
                             f"(0,2,0):{has((0, 2, 0))}")


def test_criterion_06_maa_reference(acceptance, ref3d_vertices):
    hsj_unique = _hsj_ref3d().summary["unique_count"]
    t0 = time.perf_counter()
    counts, full = [], 0
    for seed in range(10):
        rep = run(EQ1.replace(method="maa", iterations=60), seed=seed)
        counts.append(rep.summary["unique_count"])
        pts = np.vstack([rep.base_point[None, :], rep.unique_points()])
        full += all(matches_any(v, pts, 1e-6) for v in ref3d_vertices)
    dt = time.perf_counter() - t0
    ok = min(counts) >= hsj_unique and full >= 1 and dt < 30
    assert acceptance(6, ok, f"unique counts {counts} vs HSJ {hsj_unique}; "
                             f"{full}/10 runs recover all {len(ref3d_vertices)} vertices; {dt:.1f}s")


def test_criterion_07_maa_dimension_guard(acceptance):
    cfg = ExperimentConfig(TestbedSpec("random_lp", 20), method="maa", iterations=5)
    try:
        run(cfg, seed=0)
    except DimensionCapError as exc:
        ok, msg = True, str(exc)
    else:
        ok, msg = False, "n=20 MAA run was not refused"
    assert acceptance(7, ok, msg)


def test_criterion_08_vesa(acceptance):
    cube = np.array([[i, j, k] for i in (0, 1) for j in (0, 1) for k in (0, 1)], dtype=float)
    cube_ok = vesa(cube, 3).total == 3.0
    rng = np.random.default_rng(8)
    two_d = all(vesa(p, 2).total == hull_2d(p).area
                for p in (rng.normal(size=(k, 2)) for k in range(1, 40)))
    est = vesa(rng.normal(size=(1, 5)), 5)
    violations = 0
    for p in rng.normal(size=(1000, 5)):
        nxt = vesa_insert(est, p)
        violations += nxt.total < est.total
        est = nxt
    tet = np.vstack([np.zeros(3), np.eye(3)])
    q = np.array([0.4, 0.4, 0.4])
    grows = hull_volume(np.vstack([tet, q])) > hull_volume(tet)
    shadow = vesa_insert(vesa(tet, 3), q).total == vesa(tet, 3).total
    ok = cube_ok and two_d and violations == 0 and grows and shadow
    assert acceptance(8, ok, f"cube {vesa(cube, 3).total!r}; 2-D equivalence {two_d}; "
                             f"{violations} monotonicity violations/1000; shadow point grows true "
                             f"volume {grows} with VESA unchanged {shadow}")


@pytest.mark.slow
def test_criterion_09_comparative_ordering(acceptance):
    t0 = time.perf_counter()
    res = {m: [] for m in ("hsj", "random", "minmax")}
    for seed in range(10):
        for m in res:
            rep = run(ExperimentConfig(TestbedSpec("random_lp", 50), method=m, iterations=100), seed)
            res[m].append((rep.summary["vesa_final"], rep.summary["efficiency"]))
    dt = time.perf_counter() - t0
    med = {m: float(np.median([v for v, _ in r])) for m, r in res.items()}
    eff_wins = sum(r[1] >= h[1] for r, h in zip(res["random"], res["hsj"]))
    ok = med["random"] > med["hsj"] and med["minmax"] > med["hsj"] and eff_wins >= 8 and dt < 600
    assert acceptance(9, ok, f"median VESA random {med['random']:.4g}, minmax {med['minmax']:.4g}, "
                             f"hsj {med['hsj']:.4g}; random efficiency >= hsj on {eff_wins}/10; {dt:.0f}s")


def test_criterion_10_hybrid_bracketing(acceptance, ref3d_vertices):
    hyb = run(EQ1.replace(method="hybrid", iterations=32), seed=0)
    rnd = run(EQ1.replace(method="random", iterations=32), seed=0)
    pts = hyb.points()
    lo_err = np.max(np.abs(pts.min(axis=0) - ref3d_vertices.min(axis=0)))
    hi_err = np.max(np.abs(pts.max(axis=0) - ref3d_vertices.max(axis=0)))
    v_h, v_r = hyb.vesa_trajectory[-1], rnd.vesa_trajectory[-1]
    ok = lo_err <= 1e-6 and hi_err <= 1e-6 and v_h >= v_r
    assert acceptance(10, ok, f"extrema error min {lo_err:.2g} max {hi_err:.2g}; "
                              f"VESA hybrid {v_h:.6g} vs random {v_r:.6g}")


@pytest.mark.slow
def test_criterion_11_dispatch_audit(acceptance):
    t0 = time.perf_counter()
    errs = {}
    for mode in ("capacity", "generation"):
        errs[mode] = [r["variable_cost_error_pct"] for seed in range(3)
                      for r in dispatch_audit(mode=mode, iterations=20, seed=seed)]
    dt = time.perf_counter() - t0
    cap, gen = float(np.median(errs["capacity"])), float(np.median(errs["generation"]))
    ok = gen >= 5 * cap and gen > 0 and dt < 600
    assert acceptance(11, ok, f"median variable-cost error: generation {gen:.4g}%, "
                              f"capacity {cap:.3g}%; {len(errs['generation'])} solves/mode; {dt:.0f}s")


def test_criterion_12_worker_invariance(acceptance):
    cfg = ExperimentConfig(TestbedSpec("random_lp", 20), method="random", iterations=50, seeds=(11,))
    sets = {}
    for w in (1, 4, 8):
        rep = run(cfg.replace(workers=w))
        sets[w] = {tuple(p) for p in rep.unique_points().tolist()}
    ok = sets[1] == sets[4] == sets[8]
    assert acceptance(12, ok, f"unique-set sizes {[len(s) for s in sets.values()]}, identical: {ok}")


def test_criterion_13_convergence(acceptance):
    conv = ConvergenceConfig(window=10, rel_threshold=0.01, enabled=True)
    rep = run(EQ1.replace(method="random", iterations=200, convergence=conv), seed=0)
    at = rep.summary["converged_at"]
    if at is None:
        assert acceptance(13, False, "no convergence within 200 iterations")
    longer = run(EQ1.replace(method="random", iterations=at + 100), seed=0)
    v_at, v_end = longer.vesa_trajectory[at - 1], longer.vesa_trajectory[-1]
    growth = (v_end - v_at) / v_at
    ok = at <= 200 and growth < 0.01
    # context only: how often the same check holds across other seeds
    held = 0
    for seed in range(50):
        r = run(EQ1.replace(method="random", iterations=200, convergence=conv), seed=seed)
        a = r.summary["converged_at"]
        if a is None:
            continue
        tr = run(EQ1.replace(method="random", iterations=a + 100), seed=seed).vesa_trajectory
        held += (tr[-1] - tr[a - 1]) / tr[a - 1] < 0.01
    assert acceptance(13, ok, f"seed 0 converged at iteration {at}; next 100 iterations grow VESA "
                              f"by {100 * growth:.3g}% (holds on {held}/50 seeds)")


def test_criterion_14_timing(acceptance):
    missing = []
    for m in ("hsj", "random", "minmax", "maa", "hybrid"):
        rep = run(ExperimentConfig(TestbedSpec("random_lp", 10), method=m, iterations=30), 0)
        if not all(r.formulate_ns > 0 and r.solve_ns > 0 for r in rep.rows):
            missing.append(m)
    f = {m: [] for m in ("maa", "random")}
    for seed in range(3):
        for m in f:
            rep = run(ExperimentConfig(TestbedSpec("random_lp", 10), method=m, iterations=50), seed)
            f[m] += [r.formulate_ns for r in rep.rows]
    ratio = float(np.mean(f["maa"]) / np.mean(f["random"]))
    ok = not missing and ratio >= 10
    assert acceptance(14, ok, f"timings positive for all methods: {not missing}; MAA/Random mean "
                              f"formulate_ns ratio at n=10: {ratio:.1f}x")
