"""Run one of the scaling sweeps and print per-n medians and normalized costs.

    python scripts/scaling.py omm --trials 30 --out results/omm.csv
"""
import argparse
import math
import time

import numpy as np

from spea2_runtime.experiments import PLANS
from spea2_runtime.harness import emit, median_normalized_costs, run_plan, spread_ratio, sweep_slope


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("sweep", choices=sorted(PLANS))
    parser.add_argument("--trials", type=int, default=None)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--out", default=None)
    args = parser.parse_args()

    kwargs = {}
    if args.trials is not None:
        kwargs["trials"] = args.trials
    if args.seed is not None:
        kwargs["master_seed"] = args.seed
    plan = PLANS[args.sweep](**kwargs)

    start = time.time()
    table = run_plan(plan, args.workers)
    print(f"{len(table.rows)} trials in {time.time() - start:.1f}s")
    if args.out:
        emit(table, "csv", args.out)

    costs = median_normalized_costs(table)
    for s, c in zip(table.stats(), costs):
        n = s.cell.spec.n
        peak = max(r.result.peak_population for r in table.cell_rows(table.plan.cells.index(s.cell)))
        extra = ""
        if s.cell.algorithm != "spea2":
            extra = f" median/((n+1) n ln n)={s.median / ((n + 1) * n * math.log(n)):.4f}"
        print(
            f"n={n:4d} success={s.success_rate:.2f} median={s.median:10.1f} "
            f"iqr={s.iqr:9.1f} cost={c:.4f} peak={peak}{extra}"
        )
    finite = [c for c in costs if np.isfinite(c)]
    if finite:
        print(f"max/min median normalized cost: {spread_ratio(finite):.3f}")
    try:
        slope, r2 = sweep_slope(table)
        print(f"log-log slope {slope:.3f} (r^2={r2:.3f})")
    except ValueError as exc:
        print(f"no slope: {exc}")


if __name__ == "__main__":
    main()
