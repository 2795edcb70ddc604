#!/usr/bin/env python
"""
Leapfrog on a Gaussian target: reversibility and second-order energy error.

Halving the step size should cut the worst energy error by about four.
"""

import numpy as np

from rareflow import FlowConfig, PhaseState, QuadraticPotential
from rareflow.potential import hamiltonian
from rareflow.hamiltonian_flow import flow, leapfrog_step


def max_energy_error(delta, horizon=20.0):
    pot = QuadraticPotential()
    cfg = FlowConfig(delta=delta, L=1, tempering="unit")
    s, h0, worst = PhaseState(1.0, 0.5), hamiltonian(1.0, 0.5, QuadraticPotential()), 0.0
    for _ in range(int(round(horizon / delta))):
        s = leapfrog_step(s, cfg, pot)
        worst = max(worst, abs(hamiltonian(s.x, s.p, pot) - h0))
    return worst


def main():
    print(f"{'delta':>8} {'max |dH|':>12} {'ratio':>8}")
    prev = None
    for delta in (0.4, 0.2, 0.1, 0.05, 0.025):
        err = max_energy_error(delta)
        ratio = "" if prev is None else f"{prev / err:8.3f}"
        print(f"{delta:>8} {err:>12.3e} {ratio}")
        prev = err

    # run forward, flip momentum, run again: we land where we started
    pot = QuadraticPotential()
    cfg = FlowConfig(delta=0.1, L=50, tempering="unit")
    x, p = np.array([0.3, -1.2, 2.0]), np.array([1.0, 0.1, -0.7])
    fwd = flow(PhaseState(x, p), cfg, pot)
    back = flow(PhaseState(fwd.x, -fwd.p), cfg, pot)
    print(f"\nround-trip error: x {np.abs(back.x - x).max():.1e}, p {np.abs(-back.p - p).max():.1e}")


if __name__ == "__main__":
    main()
