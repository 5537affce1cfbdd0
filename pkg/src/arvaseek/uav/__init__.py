"""Quadrotor plant, hover linearisation and internal-model regulators."""

from .control import (LqrWeights, RegulatorGains, RegulatorState, control_step,
                      discrete_internal_model, internal_model_matrices,
                      internal_model_step, synthesize_gains)
from .lqr import RiccatiConvergenceError, dlqr, solve_dare, zoh
from .plant import (QuadState, VehicleParams, dynamics_deriv, integrate_rk4,
                    linearized_models)

__all__ = [
    "LqrWeights", "RegulatorGains", "RegulatorState", "control_step",
    "discrete_internal_model", "internal_model_matrices", "internal_model_step",
    "synthesize_gains",
    "RiccatiConvergenceError", "dlqr", "solve_dare", "zoh",
    "QuadState", "VehicleParams", "dynamics_deriv", "integrate_rk4",
    "linearized_models",
]
