"""Scenario catalog, scenario files, reports, regression and CLI."""

from .catalog import builtin_catalog, get_scenario
from .regression import RegressionSummary, regression_check
from .report import (
    Report,
    ScenarioRunError,
    audit_scenario,
    flag_scenario,
    report_to_dict,
    report_to_json,
    report_to_text,
    run_report,
    threefold_sweep,
)
from .schema import (
    Expectation,
    Scenario,
    ScenarioError,
    ScenarioParseError,
    ScenarioValidationError,
    dump_scenario,
    dumps_scenario,
    load_scenario,
    loads_scenario,
    scenario_from_dict,
    scenario_to_dict,
)

__all__ = [
    "Expectation",
    "RegressionSummary",
    "Report",
    "Scenario",
    "ScenarioError",
    "ScenarioParseError",
    "ScenarioRunError",
    "ScenarioValidationError",
    "audit_scenario",
    "builtin_catalog",
    "dump_scenario",
    "dumps_scenario",
    "flag_scenario",
    "get_scenario",
    "load_scenario",
    "loads_scenario",
    "regression_check",
    "report_to_dict",
    "report_to_json",
    "report_to_text",
    "run_report",
    "scenario_from_dict",
    "scenario_to_dict",
    "threefold_sweep",
]
