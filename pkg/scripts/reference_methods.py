"""Run every method on the 3-variable reference LP and compare against the
vertex oracle.  Writes one report bundle per method plus overlay figures."""
import argparse
from pathlib import Path

import numpy as np

from mgalab import report, svg
from mgalab.harness import ExperimentConfig, run
from mgalab.lp import BudgetSpec, make_mga_problem, solve
from mgalab.testbeds import TestbedSpec, enumerate_vertices, reference_3d

ITERATIONS = {"hsj": 10, "random": 32, "minmax": 26, "maa": 60, "hybrid": 32}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="out/reference")
    a = ap.parse_args()
    out = Path(a.out)

    lp = reference_3d()
    p = make_mga_problem(lp, solve(lp), BudgetSpec("absolute", 3.0), (0, 1, 2))
    oracle = enumerate_vertices(p.lp)
    print(f"oracle: {len(oracle)} vertices")
    reps = []
    for method, iters in ITERATIONS.items():
        cfg = ExperimentConfig(TestbedSpec("reference3d"), method=method, iterations=iters,
                               budget=BudgetSpec("absolute", 3.0))
        rep = run(cfg, a.seed)
        report.write_bundle(rep, out / method)
        pts = np.vstack([rep.base_point[None, :], rep.unique_points()])
        found = sum(np.any(np.max(np.abs(pts - v), axis=1) <= 1e-6) for v in oracle)
        print(f"{method:7s} {len(rep.rows):3d} solves  {rep.summary['unique_count']:2d} unique  "
              f"{found}/{len(oracle)} oracle vertices  VESA {rep.summary['vesa_final']:.4f}")
        reps.append(rep)
    (out / "pairwise_hulls.svg").write_text(svg.emit_pairwise_hulls(reps))
    (out / "trajectories.svg").write_text(svg.emit_trajectories(reps))
    (out / "runtime.svg").write_text(svg.emit_runtime_bars(reps))


if __name__ == "__main__":
    main()
