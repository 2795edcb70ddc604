"""Plain Monte Carlo, interacting particle system and Hamiltonian flow estimators
for the discretely monitored down-and-out call.

Each estimator advances the whole particle cloud one monitoring date at a
time, so memory is O(n_S) regardless of ``n_t``.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .hamiltonian_flow import FlowConfig, rare_event_transition
from .model_payoff import DocOption, GbmParams, exact_step, payoff
from .potential import TransitionPotential
from .rng import stream

# exp() overflows a float64 above this argument
_MAX_EXP_ARG = 709.0


class EnsembleExtinction(RuntimeError):
    """Every particle has been killed by the barrier."""


@dataclass(frozen=True)
class EngineConfig:
    params: GbmParams
    option: DocOption
    n_s: int
    tilt: float = 1e-4
    flow: FlowConfig = FlowConfig()
    hfmc_weighting: Literal["weighted", "unweighted"] = "weighted"
    resampling: Literal["multinomial", "systematic"] = "multinomial"
    beta: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if int(self.n_s) != self.n_s or self.n_s < 1:
            raise ValueError("n_s must be an integer >= 1")
        if not math.isfinite(self.tilt):
            raise ValueError("tilt must be finite")
        if self.hfmc_weighting not in ("weighted", "unweighted"):
            raise ValueError(f"unknown hfmc_weighting {self.hfmc_weighting!r}")
        if self.resampling not in ("multinomial", "systematic"):
            raise ValueError(f"unknown resampling {self.resampling!r}")

    @property
    def barrier(self) -> float:
        return self.option.corrected_barrier(self.params)


@dataclass
class ParticleEnsemble:
    positions: np.ndarray
    weights: np.ndarray
    alive: np.ndarray

    @classmethod
    def start(cls, x0: float, n_s: int) -> "ParticleEnsemble":
        return cls(np.full(n_s, float(x0)), np.ones(n_s), np.ones(n_s, dtype=bool))

    def __len__(self):
        return self.positions.size


@dataclass
class Estimate:
    value: float
    n_alive_terminal: int
    cpu_seconds: float
    seed: int
    extinct: bool = False
    diagnostics: dict = field(default_factory=dict)


def _rng_for(cfg: EngineConfig, rng):
    return stream(cfg.seed) if rng is None else rng


# ---------------------------------------------------------------------------
# plain Monte Carlo

def mc_estimate(cfg: EngineConfig, rng: np.random.Generator | None = None) -> Estimate:
    """Discounted average of knocked-out payoffs over ``n_s`` independent paths."""
    rng = _rng_for(cfg, rng)
    t0 = time.perf_counter()
    params, B_adj = cfg.params, cfg.barrier
    x = np.full(cfg.n_s, params.x0)
    alive = np.ones(cfg.n_s, dtype=bool)
    for _ in range(params.n_t):
        x = exact_step(x, params, rng.standard_normal(cfg.n_s))
        alive &= x > B_adj
    value = params.discount * float(np.mean(payoff(x, cfg.option.K) * alive))
    return Estimate(value, int(alive.sum()), time.perf_counter() - t0, cfg.seed)


# ---------------------------------------------------------------------------
# interacting particle system

def tilted_weight(x_n, x_prev, tilt: float):
    """exp(tilt * (x_n - x_prev))."""
    arg = tilt * (np.asarray(x_n, dtype=float) - np.asarray(x_prev, dtype=float))
    if np.any(arg > _MAX_EXP_ARG):
        raise OverflowError("tilt overflow; use a smaller tilting parameter")
    out = np.exp(arg)
    return out if out.ndim else float(out)


def normalize_weights(w) -> np.ndarray:
    """Weights divided by their mean, so that they sum to the particle count."""
    w = np.asarray(w, dtype=float)
    mean = w.mean()
    if not mean > 0:
        raise EnsembleExtinction("ensemble extinction")
    return w / mean


def _resample_indices(W, rng, scheme="multinomial"):
    n = W.size
    cdf = np.cumsum(W)
    cdf /= cdf[-1]
    if scheme == "multinomial":
        u = rng.random(n)
    else:
        u = (np.arange(n) + rng.random()) / n
    return np.minimum(np.searchsorted(cdf, u, side="right"), n - 1)


def multinomial_resample(ensemble: ParticleEnsemble, W, rng: np.random.Generator,
                         scheme: str = "multinomial") -> ParticleEnsemble:
    """Draw ``len(ensemble)`` particles with replacement, particle i w.p. W_i / n.

    Output weights are reset to one.  ``scheme="systematic"`` swaps in
    systematic resampling (single uniform offset).
    """
    W = np.asarray(W, dtype=float)
    if not W.sum() > 0:
        raise EnsembleExtinction("ensemble extinction")
    idx = _resample_indices(W, rng, scheme)
    return ParticleEnsemble(ensemble.positions[idx].copy(), np.ones(idx.size),
                            ensemble.alive[idx].copy())


def ips_estimate(cfg: EngineConfig, rng: np.random.Generator | None = None) -> Estimate:
    """Mutation/selection estimator with exponential tilting.

    Killed particles get weight zero.  Before every monitoring date except the
    last the cloud is resampled proportionally to the tilted weights and the
    mean weight eta_n is accumulated.  Since the tilt telescopes, undoing it on
    a terminal particle only needs its parent position:

        C ~ disc * prod_{n<n_t} eta_n * mean(1_A g(X_nt) exp(-tilt (X_{nt-1} - X_0)))
    """
    rng = _rng_for(cfg, rng)
    t0 = time.perf_counter()
    params, B_adj, n_s = cfg.params, cfg.barrier, cfg.n_s
    ens = ParticleEnsemble.start(params.x0, n_s)
    log_norm = 0.0

    for n in range(1, params.n_t + 1):
        x_prev = ens.positions
        x_new = exact_step(x_prev, params, rng.standard_normal(n_s))
        alive = x_new > B_adj
        w = np.where(alive, tilted_weight(x_new, x_prev, cfg.tilt), 0.0)
        if n == params.n_t:
            break
        try:
            W = normalize_weights(w)
        except EnsembleExtinction:
            return Estimate(0.0, 0, time.perf_counter() - t0, cfg.seed, extinct=True,
                            diagnostics={"extinct_at": n})
        log_norm += math.log(w.mean())
        ens = multinomial_resample(ParticleEnsemble(x_new, W, alive), W, rng, cfg.resampling)

    g = payoff(x_new, cfg.option.K)
    undo = tilted_weight(params.x0, x_prev, cfg.tilt)
    value = params.discount * math.exp(log_norm) * float(np.mean(alive * g * undo))
    w_sum = w.sum()
    ratio = params.discount * float((w * g).sum() / w_sum) if w_sum > 0 else 0.0
    return Estimate(value, int(alive.sum()), time.perf_counter() - t0, cfg.seed,
                    extinct=not alive.any(), diagnostics={"ratio_form": ratio})


# ---------------------------------------------------------------------------
# Hamiltonian flow Monte Carlo

def hfmc_estimate(cfg: EngineConfig, rng: np.random.Generator | None = None) -> Estimate:
    """Per monitoring date: draw the GBM step, then move it with the
    barrier-restricted HMC kernel whose potential is the step's own
    transition density.

    A particle dies when its prior draw is at or below the barrier (the kernel
    itself never crosses it).  In weighted mode each accepted move multiplies
    the particle's weight by exp(-scale * dH), with the same energy scale as
    the MH test.
    """
    params = cfg.params
    if params.sigma <= 0:
        raise ValueError("degenerate potential")
    rng = _rng_for(cfg, rng)
    t0 = time.perf_counter()
    flow_cfg = cfg.flow.with_dt(params.dt)
    scale = flow_cfg.energy_scale
    B_adj, n_s = cfg.barrier, cfg.n_s
    weighted = cfg.hfmc_weighting == "weighted"

    x = np.full(n_s, params.x0)
    alive = np.ones(n_s, dtype=bool)
    log_w = np.zeros(n_s)
    alpha_sum, n_moves, n_accepted = 0.0, 0, 0

    for _ in range(params.n_t):
        idx = np.flatnonzero(alive)
        if idx.size == 0:
            break
        x_prev = x[idx]
        y = exact_step(x_prev, params, rng.standard_normal(idx.size))
        ok = y > B_adj
        alive[idx[~ok]] = False
        idx, x_prev, y = idx[ok], x_prev[ok], y[ok]
        if idx.size == 0:
            break
        tp = TransitionPotential.from_params(x_prev, params, cfg.beta)
        out = rare_event_transition(y, flow_cfg, tp, B_adj, rng)
        x[idx] = out.state.x
        if weighted:
            log_w[idx] -= np.where(out.accepted, scale * np.asarray(out.delta_H), 0.0)
        alpha_sum += float(np.sum(out.alpha))
        n_accepted += int(np.sum(out.accepted))
        n_moves += idx.size

    g = payoff(x, cfg.option.K)
    contrib = np.where(alive, g * np.exp(log_w), 0.0)
    value = params.discount * float(np.mean(contrib))
    diagnostics = {
        "mean_alpha": alpha_sum / n_moves if n_moves else float("nan"),
        "acceptance_rate": n_accepted / n_moves if n_moves else float("nan"),
    }
    return Estimate(value, int(alive.sum()), time.perf_counter() - t0, cfg.seed,
                    extinct=not alive.any(), diagnostics=diagnostics)


ENGINES = {"mc": mc_estimate, "ips": ips_estimate, "hfmc": hfmc_estimate}
