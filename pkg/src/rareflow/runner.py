"""Experiment orchestration: config files, replications and CSV output.

A config file is flat ``key = value`` text; ``#`` starts a comment, strings
may be quoted and lists are comma separated (optionally in brackets)::

    x0 = 100
    strike = 100
    barrier = 65
    r = 0.1
    sigma = 0.3
    T = 0.5
    methods = mc, ips, hfmc

Each replication draws from its own stream keyed by (master seed, method,
replication index), so results do not depend on the number of workers or on
how many replications are requested.
"""
from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields, replace
from pathlib import Path as FsPath

import numpy as np

from .engines import ENGINES, EngineConfig
from .hamiltonian_flow import FlowConfig
from .model_payoff import DocOption, GbmParams, analytic_doc_price
from .potential import MassMatrix
from .rng import METHOD_IDS
from .stats import RunReport

ALL_METHODS = ("mc", "ips", "hfmc")
REQUIRED_KEYS = ("x0", "strike", "barrier", "r", "sigma", "T")
DESK_SCALE = {"n_s": 10_000, "n_t": 250, "replications": 20}

REPLICATION_COLUMNS = ["method", "replication", "estimate", "cpu_seconds", "seed"]
SUMMARY_COLUMNS = ["method", "mean", "st_dev", "rmse", "rrmse", "rrmse_true", "bias",
                   "rel_error", "cpu_total", "fom", "reference_C", "n_S", "n_t", "M_s"]


class ConfigError(ValueError):
    exit_code = 2


def _bool(text):
    if isinstance(text, bool):
        return text
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _int(text):
    value = float(text)
    if not value.is_integer():
        raise ValueError(f"not an integer: {text!r}")
    return int(value)


def _methods(text):
    if isinstance(text, (list, tuple)):
        items = list(text)
    else:
        items = [m.strip().strip("'\"") for m in str(text).strip("[] ").split(",")]
    items = [m.lower() for m in items if m]
    if items == ["all"]:
        return list(ALL_METHODS)
    for m in items:
        if m not in ALL_METHODS:
            raise ValueError(f"unknown method {m!r}")
    # canonical order, no duplicates
    return [m for m in ALL_METHODS if m in items]


def _str(text):
    return str(text).strip().strip("'\"")


FIELD_TYPES = {
    "x0": float, "strike": float, "barrier": float, "r": float, "q": float,
    "mu": float, "sigma": float, "T": float, "n_t": _int, "n_s": _int,
    "tilt": float, "delta": float, "leapfrog_steps": _int, "mass": float,
    "tempering": _str, "hfmc_weighting": _str, "resampling": _str, "beta": float,
    "methods": _methods, "replications": _int, "seed": _int, "out": _str,
    "desk_scale": _bool, "jobs": _int, "timing": _str,
}


@dataclass(frozen=True)
class ExperimentConfig:
    x0: float
    strike: float
    barrier: float
    r: float
    sigma: float
    T: float
    q: float = 0.0
    mu: float | None = None
    n_t: int = 750
    n_s: int = 50_000
    tilt: float = 1e-4
    delta: float = 1e-4
    leapfrog_steps: int = 35
    mass: float = 1.0
    tempering: str = "dt_scaled"
    hfmc_weighting: str = "weighted"
    resampling: str = "multinomial"
    beta: float = 1.0
    methods: tuple = ALL_METHODS
    replications: int = 20
    seed: int = 0
    out: str = "results"
    desk_scale: bool = False
    jobs: int = 1
    timing: str = "wall"

    def __post_init__(self):
        object.__setattr__(self, "methods", tuple(self.methods))
        if not self.methods:
            raise ValueError("methods must not be empty")
        if self.replications < 1:
            raise ValueError("replications must be >= 1")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")
        if self.timing not in ("wall", "off"):
            raise ValueError("timing must be 'wall' or 'off'")
        # build once so invariant violations surface at parse time
        self.engine_config()

    @property
    def params(self) -> GbmParams:
        mu = self.r - self.q if self.mu is None else self.mu
        return GbmParams(x0=self.x0, mu=mu, r=self.r, sigma=self.sigma, T=self.T,
                         n_t=self.n_t, q=self.q)

    @property
    def option(self) -> DocOption:
        return DocOption(K=self.strike, B=self.barrier)

    def engine_config(self, seed: int | None = None) -> EngineConfig:
        params = self.params
        flow = FlowConfig(delta=self.delta, L=self.leapfrog_steps, mass=MassMatrix(self.mass),
                          tempering=self.tempering, dt=params.dt)
        return EngineConfig(params=params, option=self.option, n_s=self.n_s, tilt=self.tilt,
                            flow=flow, hfmc_weighting=self.hfmc_weighting,
                            resampling=self.resampling, beta=self.beta,
                            seed=self.seed if seed is None else seed)


def read_config_file(path) -> dict:
    """Parse flat key=value text into raw string values."""
    raw = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in FIELD_TYPES:
                raise ConfigError(f"unknown key: {key}")
            raw[key] = value
    return raw


def parse_config(path=None, overrides: dict | None = None) -> ExperimentConfig:
    """Merge file values, the desk-scale preset and explicit overrides.

    Precedence, lowest first: file, desk-scale preset, overrides.  Override
    values of ``None`` are ignored.
    """
    raw = read_config_file(path) if path is not None else {}
    overrides = {k: v for k, v in (overrides or {}).items() if v is not None}
    for key in overrides:
        if key not in FIELD_TYPES:
            raise ConfigError(f"unknown key: {key}")

    values = {}
    try:
        for source in (raw, overrides):
            for key, text in source.items():
                values[key] = FIELD_TYPES[key](text)
    except ValueError as exc:
        raise ConfigError(f"invalid value: {exc}") from None

    if values.get("desk_scale"):
        for key, preset in DESK_SCALE.items():
            if key not in overrides:
                values[key] = preset

    for key in REQUIRED_KEYS:
        if key not in values:
            raise ConfigError(f"missing required key: {key}")
    try:
        return ExperimentConfig(**values)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


# ---------------------------------------------------------------------------

def replication_seed(master_seed: int, method: str, replication: int) -> int:
    """64-bit seed of one replication's stream."""
    ss = np.random.SeedSequence(entropy=int(master_seed),
                                spawn_key=(METHOD_IDS[method], int(replication)))
    return int(ss.generate_state(1, np.uint64)[0])


def _run_one(task):
    method, engine_cfg = task
    try:
        est = ENGINES[method](engine_cfg)
    except Exception as exc:  # recorded per replication
        return method, None, f"{type(exc).__name__}: {exc}"
    return method, est, ""


def run_experiment(cfg: ExperimentConfig, jobs: int | None = None) -> dict:
    """Run every method ``cfg.replications`` times; returns method -> RunReport."""
    jobs = cfg.jobs if jobs is None else jobs
    base = cfg.engine_config()
    reference = analytic_doc_price(base.params, base.option)

    tasks, keys = [], []
    for method in cfg.methods:
        for rep in range(cfg.replications):
            seed = replication_seed(cfg.seed, method, rep)
            tasks.append((method, replace(base, seed=seed)))
            keys.append((method, rep, seed))

    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one, tasks))
    else:
        results = [_run_one(t) for t in tasks]

    reports = {m: RunReport(method=m, estimates=[], reference=reference, n_s=cfg.n_s,
                            n_t=cfg.n_t) for m in cfg.methods}
    for (method, rep, seed), (_, est, err) in zip(keys, results):
        report = reports[method]
        if est is None:
            report.failed = True
            report.error = report.error or f"replication {rep}: {err}"
            continue
        report.estimates.append(est.value)
        report.seeds.append(seed)
        report.cpu_seconds.append(est.cpu_seconds if cfg.timing == "wall" else float("nan"))
        for k, v in est.diagnostics.items():
            report.diagnostics.setdefault(k, []).append(v)
    return reports


def format_number(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    value = float(value)
    if math.isnan(value):
        return "nan"
    return format(value, ".9g")


def emit_csv(reports: dict, out_dir) -> tuple:
    """Write ``replications.csv`` and ``summary.csv`` for the successful reports."""
    ok = [r for r in reports.values() if not r.failed and r.M_s >= 2]
    if not ok:
        raise ValueError("no successful report to write")
    out = FsPath(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rep_path, sum_path = out / "replications.csv", out / "summary.csv"

    with open(rep_path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(REPLICATION_COLUMNS)
        for r in ok:
            for i, (est, cpu, seed) in enumerate(zip(r.estimates, r.cpu_seconds, r.seeds)):
                w.writerow([r.method, i, format_number(est), format_number(cpu), seed])

    with open(sum_path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SUMMARY_COLUMNS)
        for r in ok:
            row = r.summary()
            w.writerow([row["method"]] + [format_number(row[c]) for c in SUMMARY_COLUMNS[1:]])
    return rep_path, sum_path


def default_jobs() -> int | None:
    """Worker count from ``RAREFLOW_JOBS``, or None when unset."""
    env = os.environ.get("RAREFLOW_JOBS")
    return int(env) if env else None


def config_keys() -> list:
    return [f.name for f in fields(ExperimentConfig)]
