"""Replication statistics: st.dev, RMSE, RRMSE, bias, relative error and FOM.

Conventions: ``st_dev`` uses the sample (M_s - 1) denominator, ``rmse`` the
1/M_s mean, so that rmse^2 = bias^2 + (M_s - 1)/M_s * st_dev^2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


def _as_estimates(estimates) -> np.ndarray:
    arr = np.asarray(estimates, dtype=float).ravel()
    if arr.size == 0:
        raise ValueError("no estimates")
    return arr


def mean(estimates) -> float:
    return float(np.mean(_as_estimates(estimates)))


def st_dev(estimates) -> float:
    arr = _as_estimates(estimates)
    if arr.size < 2:
        raise ValueError("st_dev needs at least two estimates")
    return float(np.std(arr, ddof=1))


def rmse(estimates, C: float) -> float:
    """sqrt(mean((C - estimate)^2))."""
    arr = _as_estimates(estimates)
    return math.sqrt(float(np.mean((C - arr) ** 2)))


def bias(estimates, C: float) -> float:
    return mean(estimates) - C


def rrmse(rmse_value: float, mean_estimate: float) -> float:
    if mean_estimate == 0:
        raise ValueError("relative statistic of a zero mean")
    return rmse_value / mean_estimate


def rel_error(sd: float, mean_estimate: float) -> float:
    """R = st_dev / mean."""
    if mean_estimate == 0:
        raise ValueError("relative statistic of a zero mean")
    return sd / mean_estimate


def fom(R: float, cpu_seconds: float) -> float:
    """Figure of merit 1 / (R^2 * cpu)."""
    if not R > 0 or not cpu_seconds > 0:
        raise ValueError("fom needs positive R and cpu time")
    return 1.0 / (R * R * cpu_seconds)


@dataclass
class RunReport:
    """All replications of one method plus the derived statistics.

    ``cpu_seconds`` holds per-replication timings; when timing is disabled
    they are NaN and so are ``cpu_total`` and ``fom``.
    """

    method: str
    estimates: list
    reference: float
    cpu_seconds: list = field(default_factory=list)
    n_s: int = 0
    n_t: int = 0
    seeds: list = field(default_factory=list)
    failed: bool = False
    error: str = ""
    diagnostics: dict = field(default_factory=dict)

    @property
    def M_s(self) -> int:
        return len(self.estimates)

    @property
    def mean(self) -> float:
        return mean(self.estimates)

    @property
    def st_dev(self) -> float:
        return st_dev(self.estimates)

    @property
    def rmse(self) -> float:
        return rmse(self.estimates, self.reference)

    @property
    def bias(self) -> float:
        return bias(self.estimates, self.reference)

    @property
    def rrmse(self) -> float:
        return rrmse(self.rmse, self.mean)

    @property
    def rrmse_true(self) -> float:
        return rrmse(self.rmse, self.reference)

    @property
    def rel_error(self) -> float:
        return rel_error(self.st_dev, self.mean)

    @property
    def cpu_total(self) -> float:
        return float(sum(self.cpu_seconds)) if self.cpu_seconds else float("nan")

    @property
    def fom(self) -> float:
        cpu, R = self.cpu_total, self.rel_error
        if not (cpu > 0 and R > 0):
            return float("nan")
        return fom(R, cpu)

    @property
    def std_error(self) -> float:
        return self.st_dev / math.sqrt(self.M_s)

    def summary(self) -> dict:
        return {
            "method": self.method,
            "mean": self.mean,
            "st_dev": self.st_dev,
            "rmse": self.rmse,
            "rrmse": self.rrmse,
            "rrmse_true": self.rrmse_true,
            "bias": self.bias,
            "rel_error": self.rel_error,
            "cpu_total": self.cpu_total,
            "fom": self.fom,
            "reference_C": self.reference,
            "n_S": self.n_s,
            "n_t": self.n_t,
            "M_s": self.M_s,
        }
