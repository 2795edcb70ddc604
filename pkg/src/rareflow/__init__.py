"""Rare-event estimators for discretely monitored down-and-out barrier calls:
plain Monte Carlo, an interacting particle system and Hamiltonian flow Monte
Carlo, with the replication statistics used to compare them."""

from .engines import (EngineConfig, Estimate, EnsembleExtinction, ParticleEnsemble,
                      hfmc_estimate, ips_estimate, mc_estimate)
from .hamiltonian_flow import FlowConfig, KernelOutcome, PhaseState
from .model_payoff import (DocOption, GbmParams, Path, analytic_doc_price,
                           corrected_barrier, vanilla_bs_price)
from .potential import MassMatrix, QuadraticPotential, TransitionPotential
from .runner import ExperimentConfig, emit_csv, parse_config, run_experiment
from .stats import RunReport

__version__ = "0.1.0"

__all__ = [
    "DocOption", "EngineConfig", "EnsembleExtinction", "Estimate", "ExperimentConfig",
    "FlowConfig", "GbmParams", "KernelOutcome", "MassMatrix", "ParticleEnsemble", "Path",
    "PhaseState", "QuadraticPotential", "RunReport", "TransitionPotential",
    "analytic_doc_price", "corrected_barrier", "emit_csv", "hfmc_estimate", "ips_estimate",
    "mc_estimate", "parse_config", "run_experiment", "vanilla_bs_price",
]
