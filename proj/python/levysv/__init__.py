"""Heavy-tailed mean-reverting stochastic volatility.

Simulation of log-price increments driven by a jump-fed variance process,
estimation of the moment scaling function A(q), and the closed-form
piecewise-linear law it should match. Everything lives in the compiled
extension; this package just re-exports it.
"""

from ._levysv import (
    blowup_q,
    default_config,
    divergence_diagnostic,
    empirical_moment,
    flow,
    hill_estimator,
    integrated_flow,
    laplace_exponent,
    q_star,
    run_experiment,
    simulate_increments,
    stationary_samples,
    stationary_tail_exponent,
    theoretical_exponent,
    validate_quick,
)

__all__ = [
    "blowup_q",
    "default_config",
    "divergence_diagnostic",
    "empirical_moment",
    "flow",
    "hill_estimator",
    "integrated_flow",
    "laplace_exponent",
    "q_star",
    "run_experiment",
    "simulate_increments",
    "stationary_samples",
    "stationary_tail_exponent",
    "theoretical_exponent",
    "validate_quick",
]

__version__ = "1.0.0"
