#!/usr/bin/env python
"""
Run a small replicated experiment and write the CSV tables.

This is what ``rareflow run`` does; the output lands in ./demo_results.
"""

import csv

from rareflow.runner import ExperimentConfig, emit_csv, run_experiment


def main():
    cfg = ExperimentConfig(x0=100, strike=100, barrier=65, r=0.1, sigma=0.3, T=0.5,
                           n_t=50, n_s=2000, replications=8, seed=11)
    reports = run_experiment(cfg, jobs=2)
    rep_path, sum_path = emit_csv(reports, "demo_results")
    print(f"wrote {rep_path} and {sum_path}\n")
    with open(sum_path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    print(f"{'method':<6} {'mean':>10} {'st_dev':>10} {'rmse':>10} {'fom':>10}")
    for r in rows:
        print(f"{r['method']:<6} {float(r['mean']):>10.4f} {float(r['st_dev']):>10.4f} "
              f"{float(r['rmse']):>10.4f} {float(r['fom']):>10.1f}")
    print(f"\nreference C = {float(rows[0]['reference_C']):.5f}")


if __name__ == "__main__":
    main()
