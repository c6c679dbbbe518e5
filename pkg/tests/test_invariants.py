import dataclasses
from fractions import Fraction

import pytest

from deltakit.family217 import builtin_catalog
from deltakit.intersection import CurveRecord, RestrictionMap, SurfaceLattice
from deltakit.invariants import (
    FlagScenario,
    IncompleteProfiles,
    PointProfile,
    certify_center,
    double_term,
    f_o_term,
    first_term,
    quadratic_term,
    s_curve_flag,
    s_point_flag_O,
)
from deltakit.zariski import NotPseudoEffective, decompose_surface

from conftest import catalog_run


@pytest.mark.parametrize(
    "name, tau, value",
    [
        ("divisor-HP3", Fraction(3, 2), Fraction(23, 48)),
        ("divisor-HQ", Fraction(4, 3), Fraction(121, 288)),
        ("divisor-E", Fraction(3, 5), Fraction(227, 1080)),
    ],
)
def test_s_divisor(name, tau, value):
    r = catalog_run(name)
    assert r.report.tau == tau and r.report.s_divisor == value


def test_s_divisor_below_one_everywhere(runs):
    assert all(r.report.s_divisor < 1 for r in runs.values())


@pytest.mark.parametrize("e", [0, 2, 4, 6, 8, 10])
def test_ruled_surface_closed_form(e):
    # oracle: the closed form in e, checked at every admissible e
    r = catalog_run(f"ruled-E-e{e}")
    assert r.report.double_term == Fraction(377 * e, 25920) + Fraction(733, 1296)
    assert r.report.flag_value == Fraction(377 * e, 25920) + Fraction(4177, 6480)
    assert r.report.certified


def test_ruled_surface_at_e10():
    assert catalog_run("ruled-E-e10").report.flag_value == Fraction(10239, 12960)


def test_point_flag_values_for_secant_scenario():
    fs = catalog_run("dP4-secant-PinEQ").flag
    o = PointProfile("on-R-and-Z", {"R": 1, "Z": 1})
    assert first_term(fs) + double_term(fs) == Fraction(691, 384)
    assert f_o_term(fs, o) == Fraction(11, 384)
    assert s_point_flag_O(fs, o) == Fraction(337, 384)
    assert f_o_term(fs, PointProfile.generic()) == 0


def test_profile_multiplicity_is_bounded():
    fs = catalog_run("dP4-secant-PinEQ").flag
    with pytest.raises(ValueError):
        f_o_term(fs, PointProfile("too-tangent", {"Z": 99}))


def zero_scenario():
    """A curve flag on a surface that every positive part restricts to zero."""
    s = catalog_run("ruled-E-e0")
    S = SurfaceLattice(["a", "b"], [[1, 0], [0, -1]], hodge=True)
    curves = (CurveRecord("B", S.generator("b")),)
    R = RestrictionMap(s.scenario.algebra, S, [[0, 0], [0, 0]])
    return FlagScenario(s.flag.threefold, R, curves, "curve", flag_curve="B")


def test_trivial_scenario_gives_zero():
    fs = zero_scenario()
    assert first_term(fs) == 0 and double_term(fs) == 0 and s_curve_flag(fs) == 0


@pytest.mark.parametrize("bump", [Fraction(1, 7), Fraction(1), Fraction(5, 2)])
def test_curve_flag_monotone_in_order_bounds(bump):
    fs = catalog_run("ruled-E-e2").flag
    base = s_curve_flag(fs)
    raised = {k: Fraction(v) + bump for k, v in fs.ord_bounds.items()}
    assert raised
    assert s_curve_flag(dataclasses.replace(fs, ord_bounds=raised)) > base


def point_scenarios():
    return [s.name for s in builtin_catalog() if s.flag_kind == "point"]


@pytest.mark.parametrize("name", point_scenarios())
def test_point_values_dominate_quadratic_term(name):
    rep = catalog_run(name).report
    assert rep.profiles
    for p in rep.profiles:
        assert p.f_o >= 0 and p.s_o == rep.quadratic_term + p.f_o
    assert quadratic_term(catalog_run(name).flag) == rep.quadratic_term


def inner_vol(lat, curves, D):
    try:
        return decompose_surface(lat, D, curves).volume
    except NotPseudoEffective:
        return Fraction(0)


@pytest.mark.parametrize("e", [0, 4, 10])
def test_ruled_worst_case_is_the_negative_section(e):
    fs = catalog_run(f"ruled-E-e{e}").flag
    lat, curves = fs.sweep_lattice, fs.sweep_curves
    c0, f = lat.generator("C0"), lat.generator("f")
    for k in (1, 3, 5):
        D = fs.family(fs.threefold.tau * Fraction(k, 6))
        for a in (1, 2):
            for b in (a * e, a * e + 1):
                Z = c0 * a + f * b
                for j in range(1, 6):
                    v = Fraction(j, 5)
                    assert inner_vol(lat, curves, D - Z * v) <= inner_vol(lat, curves, D - c0 * v)


class TestCertify:
    def test_strict_boundary(self):
        v = certify_center(Fraction(1, 2), f_value=2, point_values={"generic": Fraction(1, 2)})
        assert not v.certified and v.thresholds["S(W;F) < 2"] is False
        assert not certify_center(Fraction(1, 2), curve_value=1).certified
        assert not certify_center(1).certified

    def test_empty_profiles(self):
        with pytest.raises(IncompleteProfiles):
            certify_center(Fraction(1, 2), f_value=Fraction(3, 2), point_values={})

    @pytest.mark.parametrize("name", ["dP4-secant-PinEQ", "dP4-secant-PnotinEQ"])
    def test_secant_scenarios_certified(self, name):
        rep = catalog_run(name).report
        assert rep.certified and rep.recheck_verdict()
