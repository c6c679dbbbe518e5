from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from deltakit.exactnum import NotRationalWall, Polynomial
from deltakit.family217 import builtin_catalog
from deltakit.family217.report import threefold_sweep
from deltakit.intersection import CurveRecord, SurfaceLattice
from deltakit.sweep import (
    Chamber,
    DegreeCapExceeded,
    NoThreshold,
    ThresholdMismatch,
    outer_reconstruct,
    pseff_threshold,
    sweep_surface_at,
    sweep_threefold,
)
from deltakit.zariski import decompose_surface

from conftest import catalog_audit, catalog_run

NAMES = [s.name for s in builtin_catalog()]


@pytest.mark.parametrize("name", NAMES)
def test_audit_is_clean(name):
    audit = catalog_audit(name)
    assert audit.problems == []
    assert audit.spot_checks >= 20


@pytest.mark.parametrize("name", NAMES)
def test_threefold_volume_decreases_to_zero(name):
    r = catalog_run(name)
    cd = r.flag.threefold if r.flag else threefold_sweep(r.scenario)
    xs = [cd.tau * Fraction(k, 24) for k in range(25)]
    vols = [cd.vol_at(x) for x in xs]
    assert all(a >= b for a, b in zip(vols, vols[1:]))
    assert vols[0] == 24 and vols[-1] == 0


@pytest.mark.parametrize("name", ["dP4-secant-PinEQ", "cubic-case-b", "ruled-E-e4"])
def test_inner_volume_monotone_and_closing(name):
    fs = catalog_run(name).flag
    for k in range(1, 8):
        inner = fs.nested.at(fs.threefold.tau * Fraction(k, 8))
        if not inner.chambers:
            continue
        xs = [inner.tau * Fraction(j, 16) for j in range(17)]
        vols = [inner.vol_at(x) for x in xs]
        assert all(a >= b for a, b in zip(vols, vols[1:]))
        assert vols[-1] == 0 and inner.continuity_defects() == []


def hirzebruch(e):
    lat = SurfaceLattice(["C0", "f"], [[-e, 1], [1, 0]], hodge=True)
    return lat, [CurveRecord("C0", lat.generator("C0"))]


@given(st.integers(1, 5), st.integers(1, 6), st.integers(0, 6))
def test_surface_sweep_matches_direct(e, a, b):
    lat, curves = hirzebruch(e)
    D = lat.divisor({"C0": a, "f": a * e + b + 1})
    cd = sweep_surface_at(lat, D, lat.generator("f"), curves)
    for k in range(9):
        v = cd.tau * Fraction(k, 8)
        assert cd.vol_at(v) == decompose_surface(lat, D - lat.generator("f") * v, curves).volume
    assert cd.tau == a * e + b + 1


def test_degree_cap_exceeded():
    with pytest.raises(DegreeCapExceeded):
        outer_reconstruct(lambda u: 1 / (1 + u), (0, 1), degree_cap=4)
    f = outer_reconstruct(lambda u: abs(u - Fraction(1, 2)), (0, 1), [Fraction(1, 2)], degree_cap=1)
    assert f.integral() == Fraction(1, 4)


def test_no_threshold_when_ray_stays_effective():
    X = catalog_run("divisor-HP3").scenario.algebra
    with pytest.raises(NoThreshold):
        sweep_threefold(X, X.expand_relation("minus_K"), X.divisor([-1, 0]))


def test_threshold_hint_mismatch():
    X = catalog_run("divisor-HP3").scenario.algebra
    cd = sweep_threefold(X, X.expand_relation("minus_K"), X.divisor([1, 0]), tau_hint="3/2")
    assert cd.tau == Fraction(3, 2)
    with pytest.raises(ThresholdMismatch):
        sweep_threefold(X, X.expand_relation("minus_K"), X.divisor([1, 0]), tau_hint="7/5")


def test_irrational_wall_rejected():
    ch = Chamber(Fraction(0), Fraction(2), {}, (), Polynomial([2, 0, -1]))
    with pytest.raises(NotRationalWall):
        pseff_threshold([ch])
