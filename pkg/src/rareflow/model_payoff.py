"""GBM path model, down-and-out call payoff logic and closed-form reference prices."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import norm

# Broadie-Glasserman-Kou constant: -zeta(1/2)/sqrt(2*pi)
BGK_BETA = 0.5826


@dataclass(frozen=True)
class GbmParams:
    """Market and grid parameters for dX = mu X dt + sigma X dW.

    ``dt`` is derived from ``T / n_t`` and cannot be set independently.
    ``sigma = 0`` is allowed (deterministic paths) although the transition
    density and the Hamiltonian potential are then undefined.
    """

    x0: float
    mu: float
    r: float
    sigma: float
    T: float
    n_t: int
    q: float = 0.0
    dt: float = field(init=False)

    def __post_init__(self):
        for name in ("x0", "mu", "r", "sigma", "T", "q"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not self.x0 > 0:
            raise ValueError("x0 must be positive")
        if not self.sigma >= 0:
            raise ValueError("sigma must be positive")
        if not self.T > 0:
            raise ValueError("T must be positive")
        if int(self.n_t) != self.n_t or self.n_t < 1:
            raise ValueError("n_t must be an integer >= 1")
        object.__setattr__(self, "n_t", int(self.n_t))
        object.__setattr__(self, "dt", self.T / self.n_t)

    @classmethod
    def risk_neutral(cls, x0, r, sigma, T, n_t, q=0.0) -> "GbmParams":
        """Parameters with the pricing drift mu = r - q."""
        return cls(x0=x0, mu=r - q, r=r, sigma=sigma, T=T, n_t=n_t, q=q)

    @property
    def log_drift(self) -> float:
        """Mean of the one-step log increment, (mu - sigma^2/2) dt."""
        return (self.mu - 0.5 * self.sigma**2) * self.dt

    @property
    def log_var(self) -> float:
        """Variance of the one-step log increment, sigma^2 dt."""
        return self.sigma**2 * self.dt

    @property
    def discount(self) -> float:
        return math.exp(-(self.r - self.q) * self.T)


@dataclass(frozen=True)
class DocOption:
    """Down-and-out call with strike ``K`` and barrier ``B`` (``B = 0``: no barrier)."""

    K: float
    B: float

    def __post_init__(self):
        object.__setattr__(self, "K", float(self.K))
        object.__setattr__(self, "B", float(self.B))
        if not self.K > 0:
            raise ValueError("strike must be positive")
        if not self.B >= 0:
            raise ValueError("barrier must be non-negative")

    def corrected_barrier(self, params: GbmParams) -> float:
        return corrected_barrier(self.B, params.sigma, params.dt)


@dataclass
class Path:
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 1 or self.values.size < 2:
            raise ValueError("a path needs at least two values")
        if not np.all(self.values > 0):
            raise ValueError("path values must be positive")

    @property
    def n_t(self) -> int:
        return self.values.size - 1

    @property
    def terminal(self) -> float:
        return float(self.values[-1])


def exact_step(x_prev, params: GbmParams, eps):
    """One exact GBM step: x_prev * exp((mu - sigma^2/2) dt + sigma sqrt(dt) eps).

    Works elementwise on arrays.
    """
    eps = np.asarray(eps, dtype=float)
    if not np.all(np.isfinite(eps)):
        raise ValueError("invalid normal draw")
    out = x_prev * np.exp(params.log_drift + params.sigma * math.sqrt(params.dt) * eps)
    return out if out.ndim else float(out)


def simulate_path(params: GbmParams, rng: np.random.Generator) -> Path:
    """Draw one path of ``n_t + 1`` prices; consumes exactly ``n_t`` normals."""
    eps = rng.standard_normal(params.n_t)
    incr = params.log_drift + params.sigma * math.sqrt(params.dt) * eps
    logs = np.concatenate(([0.0], np.cumsum(incr)))
    return Path(params.x0 * np.exp(logs))


def lognormal_transition_logpdf(x, x_prev, params: GbmParams):
    """Log density of X_n = x given X_{n-1} = x_prev under one GBM step."""
    s2 = params.log_var
    if s2 <= 0:
        raise ValueError("degenerate transition density")
    return _lognormal_logpdf(x, x_prev, params.log_drift, s2)


def _lognormal_logpdf(x, x_prev, m, s2):
    z = np.log(x / x_prev) - m
    return -np.log(x) - 0.5 * np.log(2 * math.pi * s2) - z * z / (2 * s2)


def corrected_barrier(B: float, sigma: float, dt: float) -> float:
    """Shift a discretely monitored barrier down to its continuous equivalent."""
    if B < 0:
        raise ValueError("barrier must be non-negative")
    return B * math.exp(-BGK_BETA * sigma * math.sqrt(dt))


def survival_indicator(path, B_adj: float):
    """True iff every monitored value ``values[1:]`` stays strictly above ``B_adj``.

    Accepts a :class:`Path`, a 1-D array of values, or a 2-D array with one
    path per row (returns a boolean array).
    """
    values = path.values if isinstance(path, Path) else np.asarray(path, dtype=float)
    alive = np.all(values[..., 1:] > B_adj, axis=-1)
    return bool(alive) if alive.ndim == 0 else alive


def payoff(x_T, K: float):
    out = np.maximum(np.asarray(x_T, dtype=float) - K, 0.0)
    return out if out.ndim else float(out)


def black_scholes_call(x0, K, r, q, sigma, T) -> float:
    """European call with continuous dividend yield; ``sigma = 0`` gives the
    discounted intrinsic value of the forward."""
    if sigma < 0 or T <= 0:
        raise ValueError("sigma must be non-negative and T positive")
    if sigma == 0:
        forward = x0 * math.exp((r - q) * T)
        return math.exp(-r * T) * max(forward - K, 0.0)
    vol = sigma * math.sqrt(T)
    d1 = (math.log(x0 / K) + (r - q + 0.5 * sigma**2) * T) / vol
    d2 = d1 - vol
    return x0 * math.exp(-q * T) * norm.cdf(d1) - K * math.exp(-r * T) * norm.cdf(d2)


def vanilla_bs_price(params: GbmParams, K: float) -> float:
    return black_scholes_call(params.x0, K, params.r, params.q, params.sigma, params.T)


def down_and_out_call(x0, K, H, r, q, sigma, T) -> float:
    """Continuously monitored down-and-out call for barrier ``H <= K``.

    Vanilla call minus the down-and-in call (Merton / Reiner-Rubinstein).
    """
    if H >= K:
        raise ValueError("closed form implemented for barrier below strike only")
    vanilla = black_scholes_call(x0, K, r, q, sigma, T)
    if H <= 0:
        return vanilla
    if H >= x0:
        return 0.0
    if sigma == 0:
        # monotone deterministic path: knocked out iff its low end reaches H
        return vanilla if H < min(x0, x0 * math.exp((r - q) * T)) else 0.0
    vol = sigma * math.sqrt(T)
    lam = (r - q + 0.5 * sigma**2) / sigma**2
    y = math.log(H * H / (x0 * K)) / vol + lam * vol
    ratio = H / x0
    down_in = (x0 * math.exp(-q * T) * ratio ** (2 * lam) * norm.cdf(y)
               - K * math.exp(-r * T) * ratio ** (2 * lam - 2) * norm.cdf(y - vol))
    return vanilla - down_in


def analytic_doc_price(params: GbmParams, option: DocOption) -> float:
    """Reference price: continuous-barrier formula at the corrected barrier."""
    B_adj = option.corrected_barrier(params)
    if B_adj >= params.x0:
        warnings.warn("knocked out at inception", RuntimeWarning, stacklevel=2)
        return 0.0
    if B_adj >= option.K:
        raise ValueError("barrier at or above strike is not supported")
    return down_and_out_call(params.x0, option.K, B_adj, params.r, params.q,
                             params.sigma, params.T)
