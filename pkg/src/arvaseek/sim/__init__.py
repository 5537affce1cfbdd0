"""Scenario configuration, multirate orchestration, ground truth and metrics."""

from .metrics import LOG_COLUMNS, Metrics, RunLog, box_entry_time, compute_metrics
from .optimum import planar_optimum, worst_case_orientation
from .runner import NumericDivergenceError, oracle, run, sweep
from .scenario import DEFAULT_SCENARIO, InvalidScenarioError, Scenario

__all__ = [
    "LOG_COLUMNS", "Metrics", "RunLog", "box_entry_time", "compute_metrics",
    "planar_optimum", "worst_case_orientation", "NumericDivergenceError", "oracle",
    "run", "sweep", "DEFAULT_SCENARIO", "InvalidScenarioError", "Scenario",
]
