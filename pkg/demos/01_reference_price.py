#!/usr/bin/env python
"""
Closed-form reference prices for the down-and-out call.

Shows how discrete monitoring is folded into the continuous-barrier formula by
shifting the barrier down, and how little the barrier matters at B=65.
"""

from rareflow import DocOption, GbmParams, analytic_doc_price, corrected_barrier, vanilla_bs_price


def main():
    option = DocOption(K=100.0, B=65.0)
    print("Down-and-out call, X0=100, K=100, B=65, r=0.1, sigma=0.3, T=0.5")
    print(f"{'n_t':>6} {'shifted B':>12} {'DOC price':>12}")
    for n_t in (10, 50, 250, 750, 5000):
        params = GbmParams.risk_neutral(x0=100.0, r=0.1, sigma=0.3, T=0.5, n_t=n_t)
        B_adj = corrected_barrier(option.B, params.sigma, params.dt)
        print(f"{n_t:>6} {B_adj:>12.5f} {analytic_doc_price(params, option):>12.7f}")

    params = GbmParams.risk_neutral(x0=100.0, r=0.1, sigma=0.3, T=0.5, n_t=750)
    print(f"\nvanilla call for comparison: {vanilla_bs_price(params, 100.0):.7f}")
    # knocking out from 100 down to ~65 within half a year is a rare event
    for B in (65, 80, 90, 95):
        print(f"B={B:>3}: {analytic_doc_price(params, DocOption(K=100.0, B=B)):.5f}")


if __name__ == "__main__":
    main()
