"""Unique-solution efficiency, final volume estimate and timing split across
methods and dimensions of the random covering LP (long-format CSV)."""
import argparse
from pathlib import Path

import numpy as np

from mgalab.harness import SWEEP_FIELDS, ExperimentConfig, sweep
from mgalab.report import write_rows_csv
from mgalab.testbeds import TestbedSpec


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dims", type=int, nargs="+", default=[3, 5, 10, 20, 50])
    ap.add_argument("--methods", nargs="+", default=["hsj", "random", "minmax", "maa", "hybrid"])
    ap.add_argument("--seeds", type=int, default=10)
    ap.add_argument("--iterations", type=int, default=100)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default="out/sweep.csv")
    a = ap.parse_args()

    cfgs = [ExperimentConfig(TestbedSpec("random_lp", n), method=m, iterations=a.iterations,
                             seeds=tuple(range(a.seeds)), workers=a.workers)
            for n in a.dims for m in a.methods]
    rows = sweep(cfgs)
    Path(a.out).parent.mkdir(parents=True, exist_ok=True)
    write_rows_csv(rows, a.out, SWEEP_FIELDS)
    print(f"{'method':8s} {'n':>4s} {'eff':>6s} {'VESA':>10s} {'form us':>9s} {'solve us':>9s}")
    for n in a.dims:
        for m in a.methods:
            ok = [r for r in rows if r["method"] == m and r["dimension"] == n and r["status"] == "ok"]
            if not ok:
                print(f"{m:8s} {n:4d}  (refused or failed)")
                continue
            med = lambda k: float(np.median([r[k] for r in ok]))
            print(f"{m:8s} {n:4d} {med('efficiency'):6.2f} {med('vesa_final'):10.4g} "
                  f"{med('mean_formulate_ns') / 1e3:9.1f} {med('mean_solve_ns') / 1e3:9.1f}")


if __name__ == "__main__":
    main()
