"""Leapfrog integration, Metropolis-Hastings correction and the HMC kernels.

All functions are elementwise: a scalar position gives a scalar result and an
array of positions is treated as independent one-dimensional particles.  A
trajectory that leaves the potential's support is flagged by setting its
position and momentum to NaN; downstream the NaN energy gives an acceptance
probability of zero, i.e. the move is rejected.

Random draw order per call of :func:`hmc_transition`: one standard normal
per particle (momentum), then one uniform per particle (MH test).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Literal

import numpy as np

from .potential import MassMatrix, hamiltonian

Tempering = Literal["dt_scaled", "unit"]


@dataclass
class PhaseState:
    x: object
    p: object


@dataclass(frozen=True)
class FlowConfig:
    """Leapfrog step size ``delta``, trajectory length ``L`` and MH tempering.

    With ``tempering="dt_scaled"`` the energy difference in the MH ratio is
    multiplied by the SDE grid step ``dt``; ``"unit"`` is standard HMC.
    """

    delta: float = 1e-4
    L: int = 35
    mass: MassMatrix = MassMatrix()
    tempering: Tempering = "dt_scaled"
    dt: float | None = None

    def __post_init__(self):
        if not self.delta >= 0:
            raise ValueError("delta must be non-negative")
        if int(self.L) != self.L or self.L < 1:
            raise ValueError("L must be an integer >= 1")
        if self.tempering not in ("dt_scaled", "unit"):
            raise ValueError(f"unknown tempering {self.tempering!r}")
        if self.tempering == "dt_scaled" and self.dt is not None and not self.dt > 0:
            raise ValueError("dt must be positive")

    @property
    def energy_scale(self) -> float:
        if self.tempering == "unit":
            return 1.0
        if self.dt is None:
            raise ValueError("dt_scaled tempering needs dt")
        return self.dt

    def with_dt(self, dt: float) -> "FlowConfig":
        return self if self.dt is not None else replace(self, dt=dt)


@dataclass
class KernelOutcome:
    state: PhaseState
    accepted: object
    alpha: object
    delta_H: object
    initial_momentum: object = None


def _as_output(a):
    a = np.asarray(a)
    return a if a.ndim else a[()]


def left_support(state: PhaseState):
    return _as_output(np.isnan(state.x))


def leapfrog_step(s: PhaseState, cfg: FlowConfig, potential) -> PhaseState:
    """Kick-drift-kick update with step ``cfg.delta``."""
    x = np.asarray(s.x, dtype=float)
    p = np.asarray(s.p, dtype=float)
    h = cfg.delta
    with np.errstate(invalid="ignore", divide="ignore"):
        p_half = p - 0.5 * h * potential.gradient(x)
        x_new = x + h * cfg.mass.velocity(p_half)
        outside = ~potential.in_support(x_new)
        x_new = np.where(outside, np.nan, x_new)
        p_new = p_half - 0.5 * h * potential.gradient(x_new)
        p_new = np.where(outside, np.nan, p_new)
    return PhaseState(_as_output(x_new), _as_output(p_new))


def flow(s: PhaseState, cfg: FlowConfig, potential) -> PhaseState:
    """``cfg.L`` leapfrog steps; the MH proposal map."""
    if not np.all(np.asarray(potential.in_support(np.asarray(s.x, dtype=float)))):
        raise ValueError("flow started outside support")
    for _ in range(int(cfg.L)):
        s = leapfrog_step(s, cfg, potential)
    return s


def mh_accept_prob(H_old, H_new, cfg: FlowConfig):
    """min(1, exp(scale * (H_old - H_new))); zero for non-finite energies."""
    H_old = np.asarray(H_old, dtype=float)
    H_new = np.asarray(H_new, dtype=float)
    finite = np.isfinite(H_old) & np.isfinite(H_new)
    with np.errstate(invalid="ignore", over="ignore"):
        log_a = np.minimum(0.0, cfg.energy_scale * (H_old - H_new))
        alpha = np.where(finite, np.exp(log_a), 0.0)
    return _as_output(alpha)


def hmc_transition(s_x, cfg: FlowConfig, potential, rng: np.random.Generator) -> KernelOutcome:
    """One HMC move from position ``s_x`` with freshly drawn momentum.

    Accept iff u < alpha.  On rejection the returned position is ``s_x``
    itself (bitwise) and the momentum is the drawn one.
    """
    x = np.asarray(s_x, dtype=float)
    if not np.all(np.asarray(potential.in_support(x))):
        raise ValueError("position outside support")
    p0 = rng.standard_normal(x.shape) * math.sqrt(cfg.mass.value)
    u = rng.random(x.shape)

    end = flow(PhaseState(x, p0), cfg, potential)
    H_old = hamiltonian(x, p0, potential, cfg.mass)
    with np.errstate(invalid="ignore"):
        H_new = hamiltonian(np.asarray(end.x), np.asarray(end.p), potential, cfg.mass)
    alpha = np.asarray(mh_accept_prob(H_old, H_new, cfg))
    accepted = u < alpha

    x_out = np.where(accepted, end.x, x)
    p_out = np.where(accepted, end.p, p0)
    return KernelOutcome(
        state=PhaseState(_as_output(x_out), _as_output(p_out)),
        accepted=_as_output(accepted),
        alpha=_as_output(alpha),
        delta_H=_as_output(H_new - H_old),
        initial_momentum=_as_output(p0),
    )


def rare_event_transition(s_x, cfg: FlowConfig, potential, B_adj: float,
                          rng: np.random.Generator) -> KernelOutcome:
    """HMC move restricted to the survival set {x > B_adj}.

    An accepted proposal at or below the barrier is reverted to ``s_x``.
    """
    x = np.asarray(s_x, dtype=float)
    if not np.all(x > B_adj):
        raise ValueError("transition from dead state")
    out = hmc_transition(x, cfg, potential, rng)
    new_x = np.asarray(out.state.x)
    breach = np.asarray(out.accepted) & ~(new_x > B_adj)
    if np.any(breach):
        out.state = PhaseState(
            _as_output(np.where(breach, x, new_x)),
            _as_output(np.where(breach, out.initial_momentum, out.state.p)),
        )
        out.accepted = _as_output(np.asarray(out.accepted) & ~breach)
    return out
