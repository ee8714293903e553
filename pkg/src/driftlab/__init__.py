"""driftlab: Monte Carlo verification of drift conditions, moment bounds,
finite-chain ergodicity, switching-system stability, and bounded-input
stabilization for discrete-time stochastic systems."""

__version__ = "0.1.0"

from .exponents import SigmaBarQuery, SigmaQuery, consistency_link, sigma, sigma_bar
from .linalg import RngStream, numerical_rank, right_pseudoinverse
from .process import (
    EnsembleMomentReport,
    ProcessModel,
    additive_reference,
    counterexample_reference,
    no_growth_trend,
    simulate_ensemble,
)

__all__ = [
    "EnsembleMomentReport",
    "ProcessModel",
    "RngStream",
    "SigmaBarQuery",
    "SigmaQuery",
    "additive_reference",
    "consistency_link",
    "counterexample_reference",
    "no_growth_trend",
    "numerical_rank",
    "right_pseudoinverse",
    "sigma",
    "sigma_bar",
    "simulate_ensemble",
]
