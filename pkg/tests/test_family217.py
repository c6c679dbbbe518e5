import copy
import json
from fractions import Fraction

import pytest

from deltakit.family217 import builtin_catalog, run_report
from deltakit.family217.catalog import catalog_dicts, get_scenario
from deltakit.family217.regression import regression_check
from deltakit.family217.report import ScenarioRunError, report_to_dict, report_to_json, report_to_text
from deltakit.family217.schema import (
    Expectation,
    ScenarioParseError,
    ScenarioValidationError,
    dumps_scenario,
    load_scenario,
    loads_scenario,
    scenario_from_dict,
    scenario_to_dict,
)
from deltakit.invariants import IncompleteProfiles

from conftest import catalog_run


def raw(name):
    return copy.deepcopy(next(d for d in catalog_dicts() if d["name"] == name))


class TestCatalog:
    def test_size_and_order(self):
        names = [s.name for s in builtin_catalog()]
        assert len(names) >= 14 and names == sorted(names)
        assert {f"ruled-E-e{e}" for e in (0, 2, 4, 6, 8, 10)} <= set(names)

    def test_divisor_entry(self):
        s = get_scenario("divisor-HP3")
        assert s.tau_hint == Fraction(3, 2)
        assert s.expected["S_X"].value == Fraction(23, 48)

    def test_ruled_entry(self):
        s = get_scenario("ruled-E-e4")
        assert s.surface_form[0][0] == -4
        # the section restricts -K_X - uE with lambda = (20 - e)/2
        assert s.restriction[1] == (-1, 8)

    def test_case_e_entry(self):
        s = get_scenario("cubic-case-e")
        names = {c.name for c in catalog_run("cubic-case-e").flag.sweep_curves}
        assert {"l1", "l2", "l3", "L1", "L2", "F"} <= names
        assert s.expected["S(W;F)"].value == Fraction(31, 16)

    def test_unknown_name(self):
        with pytest.raises(KeyError):
            get_scenario("nope")

    def test_threefold_cross_checks(self):
        X = get_scenario("divisor-HP3").algebra
        HQ, EQ = X.expand_relation("H_Q"), X.expand_relation("E_Q")
        assert (X.cube(HQ), X.cube(EQ)) == (2, -15)


class TestSchema:
    @pytest.mark.parametrize("name", [s.name for s in builtin_catalog()])
    def test_round_trip(self, name):
        s = get_scenario(name)
        again = loads_scenario(dumps_scenario(s))
        assert again == s and scenario_to_dict(again) == scenario_to_dict(s)

    def test_file_round_trip(self, tmp_path):
        path = tmp_path / "s.json"
        path.write_text(dumps_scenario(get_scenario("dP4-secant-PinEQ")))
        assert load_scenario(path) == get_scenario("dP4-secant-PinEQ")

    def test_zero_denominator_names_field(self):
        d = raw("ruled-E-e4")
        d["restriction"]["matrix"][1][1] = "8/0"
        with pytest.raises(ScenarioParseError, match=r"restriction\.matrix\[1\]\[1\]"):
            scenario_from_dict(d)

    def test_inconsistent_cubes(self):
        d = raw("divisor-HP3")
        d["threefold"]["cubes"][3] = "-19"
        with pytest.raises(ScenarioValidationError, match=r"threefold\.cubes"):
            scenario_from_dict(d)

    def test_unresolved_names(self):
        d = raw("ruled-E-e4")
        d["flag"]["curve"] = "nowhere"
        with pytest.raises(ScenarioValidationError, match="flag.curve"):
            scenario_from_dict(d)
        d = raw("divisor-HQ")
        d["ray"]["B"] = "Q"
        with pytest.raises(ScenarioValidationError, match="ray.B"):
            scenario_from_dict(d)

    def test_expected_in_lowest_terms(self):
        d = raw("divisor-HQ")
        d["expected"]["S_X"] = "242/576"
        with pytest.raises(ScenarioValidationError, match="expected.S_X"):
            scenario_from_dict(d)

    def test_floats_rejected(self):
        d = raw("divisor-HQ")
        d["tau_hint"] = 1.5
        with pytest.raises(ScenarioParseError, match="tau_hint"):
            scenario_from_dict(d)

    def test_malformed_json(self):
        with pytest.raises(ScenarioParseError):
            loads_scenario("{not json")

    def test_expectation_relations(self):
        assert Expectation.parse("<1/2", "x").holds(Fraction(1, 3))
        assert not Expectation.parse("<1/2", "x").holds(Fraction(1, 2))
        assert Expectation.parse("<=1/2", "x").holds(Fraction(1, 2))
        assert str(Expectation.parse("3/4", "x")) == "3/4"


class TestReports:
    def test_byte_identical(self):
        s = get_scenario("ruled-E-e0")
        a, b = run_report(s, emit_chambers=True), run_report(s, emit_chambers=True)
        assert report_to_json(a) == report_to_json(b)
        assert report_to_text(a) == report_to_text(b)

    def test_verdict_recheckable(self, runs):
        for r in runs.values():
            assert r.report.recheck_verdict() == r.report.certified

    def test_json_uses_fraction_strings(self):
        d = json.loads(report_to_json(catalog_run("dP4-secant-PinEQ").report))
        assert d["S(W;F)"] == "691/384" and d["verdict"]["certified"] is True

    def test_chamber_tables(self):
        d = report_to_dict(run_report(get_scenario("divisor-HP3"), emit_chambers=True))
        rows = d["chambers"]["threefold"]
        assert [(r["lo"], r["hi"]) for r in rows] == [("0", "1"), ("1", "3/2")]

    def test_empty_profiles_surface_as_error(self):
        d = raw("dP4-secant-PinEQ")
        d.pop("profiles")
        d["expected"] = {k: v for k, v in d["expected"].items() if "[" not in k}
        with pytest.raises(ScenarioRunError) as info:
            run_report(scenario_from_dict(d))
        assert isinstance(info.value.cause, IncompleteProfiles)
        assert "dP4-secant-PinEQ" in str(info.value)


class TestRegression:
    def cheap(self):
        return [get_scenario(n) for n in ("divisor-E", "divisor-HP3", "divisor-HQ")]

    def test_perturbed_expected_value_fails(self):
        d = raw("divisor-HQ")
        d["expected"]["S_X"] = str(Fraction(121, 288) + Fraction(1, 10**6))
        bad = scenario_from_dict(d)
        summary = regression_check([get_scenario("divisor-E"), bad])
        assert not summary.passed
        assert len(summary.mismatches) == 1 and summary.mismatches[0].startswith("divisor-HQ:")

    def test_jobs_do_not_change_order(self):
        one = regression_check(self.cheap(), jobs=1)
        many = regression_check(list(reversed(self.cheap())), jobs=3)
        assert one.lines() == many.lines() and one.passed

    def test_full_catalog(self, runs):
        reports = [r.report for r in runs.values()]
        assert all(not r.mismatches and r.certified for r in reports)
        exact = sum(1 for r in reports for c in r.checks if not c.expected.startswith("<"))
        assert exact >= 30
