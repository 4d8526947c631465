"""Desk-scale end-to-end runs: scenario config, event engine, metrics."""

from .events import EventQueue
from .scenario import (
    Scenario,
    ScenarioError,
    default_scenario,
    load_scenario,
    save_scenario,
    scenario_from_dict,
    scenario_to_dict,
)
from .engine import RunResult, run_scenario, write_run_log
from .metrics import (
    MetricsError,
    MetricsReport,
    format_report_text,
    read_report_csv,
    write_outputs,
    write_report_csv,
)
from .calibrate import CalibrationOutcome, calibrate_all, probe_loss_rate

__all__ = [
    "CalibrationOutcome",
    "EventQueue",
    "MetricsError",
    "MetricsReport",
    "RunResult",
    "Scenario",
    "ScenarioError",
    "calibrate_all",
    "default_scenario",
    "format_report_text",
    "load_scenario",
    "probe_loss_rate",
    "read_report_csv",
    "run_scenario",
    "save_scenario",
    "scenario_from_dict",
    "scenario_to_dict",
    "write_outputs",
    "write_report_csv",
    "write_run_log",
]
