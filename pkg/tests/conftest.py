import os
from dataclasses import dataclass

import pytest
from hypothesis import HealthCheck, settings

from deltakit.family217 import builtin_catalog, flag_scenario, run_report, threefold_sweep
from deltakit.family217.report import audit_scenario

settings.register_profile(
    "deltakit",
    deadline=None,
    max_examples=int(os.environ.get("DELTAKIT_HYPOTHESIS_EXAMPLES", "20")),
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("deltakit")


@dataclass
class Run:
    scenario: object
    flag: object
    report: object


_RUNS = {}


def catalog_run(name: str) -> Run:
    """Scenario, flag computation and report, computed once per session."""
    if name not in _RUNS:
        s = next(s for s in builtin_catalog() if s.name == name)
        fs = flag_scenario(s, threefold_sweep(s)) if s.flag_kind != "none" else None
        _RUNS[name] = Run(s, fs, run_report(s, fs=fs))
    return _RUNS[name]


_AUDITS = {}


def catalog_audit(name: str):
    """Audit of a catalog run (20 samples per decomposition), computed once per session."""
    if name not in _AUDITS:
        r = catalog_run(name)
        _AUDITS[name] = audit_scenario(r.scenario, r.flag, samples=20)
    return _AUDITS[name]


@pytest.fixture(scope="session")
def runs():
    return {s.name: catalog_run(s.name) for s in builtin_catalog()}


@pytest.fixture
def run():
    return catalog_run


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for text in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(text)
