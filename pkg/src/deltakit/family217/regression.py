"""Regression over the built-in catalog."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from .catalog import builtin_catalog
from .report import Report, ScenarioRunError, run_report
from .schema import Scenario


@dataclass
class RegressionSummary:
    reports: list[Report] = field(default_factory=list)
    errors: list[ScenarioRunError] = field(default_factory=list)

    @property
    def exact_matches(self) -> int:
        return sum(1 for r in self.reports for c in r.checks if c.ok and not c.expected.startswith("<"))

    @property
    def bound_matches(self) -> int:
        return sum(1 for r in self.reports for c in r.checks if c.ok and c.expected.startswith("<"))

    @property
    def mismatches(self) -> list[str]:
        return [
            f"{r.scenario}: {c.key} expected {c.expected}, computed {c.computed}"
            for r in self.reports
            for c in r.mismatches
        ]

    @property
    def uncertified(self) -> list[str]:
        return [r.scenario for r in self.reports if not r.certified]

    @property
    def passed(self) -> bool:
        return not self.errors and not self.mismatches and not self.uncertified

    def lines(self) -> list[str]:
        out = []
        for r in self.reports:
            status = "ok" if not r.mismatches and r.certified else "FAIL"
            out.append(f"{status:<4} {r.scenario:<22} {len(r.checks):>3} checks  certified={r.certified}")
        for e in self.errors:
            out.append(f"ERR  {e}")
        out += [f"  mismatch  {m}" for m in self.mismatches]
        out.append(
            f"{'PASS' if self.passed else 'FAIL'}: {len(self.reports)} scenarios, "
            f"{self.exact_matches} exact matches, {self.bound_matches} bounds"
        )
        return out


def regression_check(scenarios: Sequence[Scenario] | None = None, jobs: int = 1) -> RegressionSummary:
    """Run every scenario; results are ordered by scenario name whatever ``jobs`` is."""
    scenarios = sorted(scenarios if scenarios is not None else builtin_catalog(), key=lambda s: s.name)

    def one(s):
        try:
            return run_report(s)
        except ScenarioRunError as exc:
            return exc

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(one, scenarios))
    else:
        results = [one(s) for s in scenarios]
    summary = RegressionSummary()
    for r in results:
        (summary.errors if isinstance(r, ScenarioRunError) else summary.reports).append(r)
    return summary
