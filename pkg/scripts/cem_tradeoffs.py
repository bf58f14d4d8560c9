"""Pairwise capacity trade-off hulls on the toy capacity-expansion model,
one series per method (capacity-mode MGA)."""
import argparse
from pathlib import Path

from mgalab import report, svg
from mgalab.harness import ExperimentConfig, run
from mgalab.lp import BudgetSpec
from mgalab.testbeds import TestbedSpec


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--iterations", type=int, default=40)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--methods", nargs="+", default=["hsj", "random", "minmax", "hybrid"])
    ap.add_argument("--vars", type=int, nargs="+", default=[0, 1, 2, 3],
                    help="MGA-variable positions to plot (zone-1 technologies by default)")
    ap.add_argument("--out", default="out/cem")
    a = ap.parse_args()
    out = Path(a.out)
    reps = []
    for m in a.methods:
        cfg = ExperimentConfig(TestbedSpec("toy_cem"), method=m, iterations=a.iterations,
                               budget=BudgetSpec("relative", 0.1))
        rep = run(cfg, a.seed)
        report.write_bundle(rep, out / m)
        print(f"{m:7s} unique {rep.summary['unique_count']:3d}  VESA {rep.summary['vesa_final']:.4g}")
        reps.append(rep)
    from mgalab.cem import toy_cem
    model = toy_cem(TestbedSpec("toy_cem", seed=a.seed))
    names = [model.lp.names[i] for i in reps[0].mga_vars]
    (out / "pairwise_hulls.svg").write_text(svg.emit_pairwise_hulls(reps, a.vars, names))
    (out / "trajectories.svg").write_text(svg.emit_trajectories(reps))


if __name__ == "__main__":
    main()
