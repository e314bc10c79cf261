"""Capacity evaluation and optimization for a cognitive radio secondary
link with steerable directional antennas."""

__version__ = "0.1.0"

from .capacity import (d_capacity_d_phir, d_capacity_d_tau,
                       ergodic_capacity, expected_c10_over_interference,
                       instantaneous_caps)
from .mc import McEstimate, finite_difference, mc_capacity, mc_outage
from .optimizer import (OptimizationResult, SearchConfig, capacity_ratio_d2o,
                        optimal_power, optimize, optimize_los, optimize_omni,
                        solve_phi_r)
from .scenario import (Scenario, ScenarioError, antenna_gain, combined_gain,
                       load_scenario, path_loss, scenario_from_mapping)
from .sensing import (SensingOutcome, joint_idle_probs, prob_detection,
                      prob_false_alarm, snr_at_sutx, threshold_window)
from .specfun import exp_int_ei_neg, q_function, t_func
from .sweeps import SweepSpec, SweepTable, emit_csv, run_figure, run_sweep

__all__ = [
    "__version__",
    "Scenario", "ScenarioError", "antenna_gain", "combined_gain",
    "load_scenario", "path_loss", "scenario_from_mapping",
    "SensingOutcome", "joint_idle_probs", "prob_detection",
    "prob_false_alarm", "snr_at_sutx", "threshold_window",
    "ergodic_capacity", "expected_c10_over_interference",
    "instantaneous_caps", "d_capacity_d_phir", "d_capacity_d_tau",
    "McEstimate", "mc_capacity", "mc_outage", "finite_difference",
    "OptimizationResult", "SearchConfig", "optimal_power", "optimize",
    "optimize_los", "optimize_omni", "solve_phi_r", "capacity_ratio_d2o",
    "SweepSpec", "SweepTable", "run_sweep", "run_figure", "emit_csv",
    "q_function", "exp_int_ei_neg", "t_func",
]
