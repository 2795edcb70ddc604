"""Full-scale runs (n_S=50000, n_t=750).  Opt in with ``pytest -m slow``."""
import math

import pytest
from scipy import integrate, stats as sps

from rareflow.runner import ExperimentConfig, run_experiment

pytestmark = pytest.mark.slow

BENCH = dict(x0=100, strike=100, barrier=65, r=0.1, sigma=0.3, T=0.5, n_s=50_000, n_t=750,
             replications=20, seed=31)


def vanilla_payoff_sd(x0=100.0, K=100.0, r=0.1, sigma=0.3, T=0.5):
    # discounted call payoff moments by quadrature over the terminal normal
    def pay(z):
        return math.exp(-r * T) * max(x0 * math.exp((r - sigma**2 / 2) * T + sigma * math.sqrt(T) * z) - K, 0.0)

    m1 = integrate.quad(lambda z: pay(z) * sps.norm.pdf(z), -10, 10, limit=200)[0]
    m2 = integrate.quad(lambda z: pay(z) ** 2 * sps.norm.pdf(z), -10, 10, limit=200)[0]
    return math.sqrt(m2 - m1 * m1)


def test_mc_spread_matches_payoff_variance():
    report = run_experiment(ExperimentConfig(**BENCH, methods=("mc",)))["mc"]
    assert abs(report.mean - report.reference) <= 3 * report.std_error
    # knockouts are rare at B=65, so the vanilla payoff spread is the right scale
    target = vanilla_payoff_sd() / math.sqrt(BENCH["n_s"])
    M = report.M_s
    lo, hi = (math.sqrt(sps.chi2.ppf(q, M - 1) / (M - 1)) for q in (0.0005, 0.9995))
    assert lo * target <= report.st_dev <= hi * target
