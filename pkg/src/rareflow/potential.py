"""Potential energies and the Hamiltonian used by the flow sampler.

A potential is any object exposing ``energy(x)``, ``gradient(x)`` and
``in_support(x)``, all elementwise on arrays.  The shipped potential is the
negative log of the one-step GBM transition density; a quadratic toy
potential is provided for testing the integrator.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model_payoff import GbmParams


@dataclass(frozen=True)
class MassMatrix:
    """Diagonal mass, the same value on every coordinate."""

    value: float = 1.0

    def __post_init__(self):
        if not self.value > 0:
            raise ValueError("mass must be strictly positive")

    def kinetic(self, p):
        return 0.5 * p * p / self.value

    def velocity(self, p):
        return p / self.value


@dataclass(frozen=True)
class TransitionPotential:
    """psi(x) = -log p(x | x_prev) for the lognormal one-step density.

    ``x_prev`` may be an array (one conditioning value per particle).
    ``beta`` scales the potential inside the Hamiltonian.
    """

    x_prev: object
    m: float
    s2: float
    beta: float = 1.0

    def __post_init__(self):
        if not self.s2 > 0:
            raise ValueError("degenerate potential")
        if not np.all(np.asarray(self.x_prev) > 0):
            raise ValueError("x_prev must be positive")
        if not self.beta > 0:
            raise ValueError("beta must be positive")

    @classmethod
    def from_params(cls, x_prev, params: GbmParams, beta: float = 1.0) -> "TransitionPotential":
        return cls(x_prev=x_prev, m=params.log_drift, s2=params.log_var, beta=beta)

    @property
    def log_mode(self):
        """Position where the quadratic term vanishes, x_prev * e^m."""
        return self.x_prev * math.exp(self.m)

    def in_support(self, x):
        return x > 0

    # unchecked: NaN or non-positive positions propagate as NaN/inf
    def energy(self, x):
        return self.beta * _psi(x, self)

    def gradient(self, x):
        return self.beta * _grad_psi(x, self)


@dataclass(frozen=True)
class QuadraticPotential:
    """Toy potential (x - center)^2 / (2 scale^2) on the whole real line."""

    center: float = 0.0
    scale: float = 1.0

    def in_support(self, x):
        return np.isfinite(x)

    def energy(self, x):
        z = (x - self.center) / self.scale
        return 0.5 * z * z

    def gradient(self, x):
        return (x - self.center) / self.scale**2


def _check_support(x):
    if not np.all(np.asarray(x) > 0):
        raise ValueError("position outside support")


def _psi(x, tp):
    z = np.log(x / tp.x_prev) - tp.m
    return np.log(x) + 0.5 * math.log(2 * math.pi * tp.s2) + z * z / (2 * tp.s2)


def _grad_psi(x, tp):
    z = np.log(x / tp.x_prev) - tp.m
    return (1.0 + z / tp.s2) / x


def psi(x, tp: TransitionPotential):
    """ln x + ln sqrt(2 pi s2) + (ln(x / x_prev) - m)^2 / (2 s2)."""
    _check_support(x)
    return _psi(x, tp)


def grad_psi(x, tp: TransitionPotential):
    _check_support(x)
    return _grad_psi(x, tp)


def hamiltonian(x, p, potential, mass: MassMatrix = MassMatrix()):
    """Kinetic plus potential energy, 0.5 p M^-1 p + Psi(x)."""
    return mass.kinetic(p) + potential.energy(x)
