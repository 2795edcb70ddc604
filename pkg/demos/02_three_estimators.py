#!/usr/bin/env python
"""
Plain MC, IPS and HFMC side by side at a reduced scale.

Each estimator is replicated on independent streams and compared with the
closed-form price.  Takes about half a minute.
"""

import time

import numpy as np

from rareflow import DocOption, EngineConfig, GbmParams, analytic_doc_price
from rareflow.rng import stream
from rareflow.engines import hfmc_estimate, ips_estimate, mc_estimate


def main():
    params = GbmParams.risk_neutral(x0=100.0, r=0.1, sigma=0.3, T=0.5, n_t=100)
    option = DocOption(K=100.0, B=65.0)
    C = analytic_doc_price(params, option)
    reps = 10

    print(f"reference price C = {C:.5f}   (n_t={params.n_t}, n_S=5000, {reps} replications)\n")
    print(f"{'method':<22} {'mean':>9} {'st.dev':>9} {'|mean-C|/se':>12} {'seconds':>8}")
    runs = [
        ("MC", mc_estimate, {}),
        ("IPS multinomial", ips_estimate, {}),
        ("IPS systematic", ips_estimate, {"resampling": "systematic"}),
        ("HFMC weighted", hfmc_estimate, {}),
    ]
    for name, engine, extra in runs:
        cfg = EngineConfig(params=params, option=option, n_s=5000, **extra)
        start = time.perf_counter()
        v = np.array([engine(cfg, stream(2024, i)).value for i in range(reps)])
        elapsed = time.perf_counter() - start
        se = v.std(ddof=1) / np.sqrt(reps)
        print(f"{name:<22} {v.mean():>9.4f} {v.std(ddof=1):>9.4f} "
              f"{abs(v.mean() - C) / se:>12.2f} {elapsed:>8.1f}")


if __name__ == "__main__":
    main()
