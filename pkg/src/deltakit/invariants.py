"""S-invariants, flag functionals and the threshold verdicts.

All integrals are exact.  The nested integrals over ``(u, v)`` are assembled
from exact inner sweeps at rational ``u`` and rebuilt as piecewise
polynomials in ``u`` (see :class:`deltakit.sweep.NestedSweep`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Mapping

from .exactnum import PiecewisePoly, Polynomial, to_rat
from .intersection import (
    BlowUp,
    CurveRecord,
    DivisorClass,
    IntersectionError,
    RestrictionMap,
    SurfaceLattice,
    blow_up_point,
    pair,
)
from .sweep import ChamberedDecomposition, NestedSweep

CURVE_THRESHOLD = Fraction(1)
POINT_F_THRESHOLD = Fraction(2)
POINT_O_THRESHOLD = Fraction(1)


class IncompleteProfiles(ValueError):
    pass


@dataclass(frozen=True)
class PointProfile:
    """Local intersection multiplicities ``(C . F)_O`` at a point ``O`` of F."""

    name: str
    local_mults: Mapping[str, int] = field(default_factory=dict)

    @classmethod
    def generic(cls) -> "PointProfile":
        return cls("generic", {})


@dataclass(frozen=True)
class FlagScenario:
    """Everything needed to evaluate one flag.

    ``negative_restrictions`` maps each threefold effective class that can
    appear in N(u) to the surface curve it restricts to.  ``ord_bounds`` caps
    ``ord_C`` (curve flag) of those restricted curves; without a bound the
    order is 1 when the restricted curve is the flag curve itself.
    ``blowup_candidates`` names the curves whose strict transforms may enter
    a negative part after a point blow-up (default: the surface candidates).
    """

    threefold: ChamberedDecomposition
    restriction: RestrictionMap
    curves: tuple[CurveRecord, ...]
    kind: str  # "curve" or "point"
    flag_curve: str | None = None
    ord_bounds: Mapping[str, Fraction] = field(default_factory=dict)
    negative_restrictions: Mapping[str, str] = field(default_factory=dict)
    mults: Mapping[str, int] = field(default_factory=dict)
    blowup_candidates: tuple[str, ...] | None = None
    minus_k_cubed: Fraction = Fraction(24)
    exceptional: str = "F"

    def __post_init__(self):
        if self.kind not in ("curve", "point"):
            raise ValueError(f"unknown flag kind {self.kind!r}")
        if self.kind == "curve" and self.flag_curve is None:
            raise ValueError("curve flag needs a flag curve")
        names = {c.name for c in self.curves}
        for k, v in self.negative_restrictions.items():
            if v not in names:
                raise IntersectionError(f"{k} restricts to unknown curve {v!r}")
        if self.flag_curve is not None and self.flag_curve not in names:
            raise IntersectionError(f"unknown flag curve {self.flag_curve!r}")

    @property
    def surface(self) -> SurfaceLattice:
        return self.restriction.target

    @cached_property
    def blowup(self) -> BlowUp | None:
        if self.kind != "point":
            return None
        return blow_up_point(
            self.surface,
            self.curves,
            self.mults,
            exceptional=self.exceptional,
            candidates=(
                self.blowup_candidates
                if self.blowup_candidates is not None
                else [c.name for c in self.curves if c.negative_candidate]
            ),
        )

    @property
    def sweep_lattice(self) -> SurfaceLattice:
        return self.blowup.lattice if self.blowup else self.surface

    @property
    def sweep_curves(self) -> tuple[CurveRecord, ...]:
        return self.blowup.curves if self.blowup else self.curves

    @property
    def flag_class(self) -> DivisorClass:
        if self.blowup:
            return self.blowup.exceptional_class()
        return next(c.cls for c in self.curves if c.name == self.flag_curve)

    def restricted_positive(self, u) -> DivisorClass:
        return self.restriction(self.threefold.positive_at(u))

    def family(self, u) -> DivisorClass:
        """The class swept in v at fixed u."""
        d = self.restricted_positive(u)
        return self.blowup.pullback(d) if self.blowup else d

    def mult_at_point(self, curve: str) -> int:
        if curve in self.mults:
            return self.mults[curve]
        return next(c.mult for c in self.curves if c.name == curve)

    def order_along_flag(self, threefold_class: str) -> Fraction:
        """ord_C (curve flag) or mult_P (point flag) of a restricted N-component."""
        curve = self.negative_restrictions.get(threefold_class)
        if threefold_class in self.ord_bounds:
            return to_rat(self.ord_bounds[threefold_class])
        if curve is None:
            return Fraction(0)
        if self.kind == "point":
            return Fraction(self.mult_at_point(curve))
        return Fraction(1 if curve == self.flag_curve else 0)

    @cached_property
    def nested(self) -> NestedSweep:
        return NestedSweep(
            self.sweep_lattice,
            self.family,
            self.flag_class,
            self.sweep_curves,
            (0, self.threefold.tau),
            self.threefold.walls(),
        )

    def restricted_square(self) -> PiecewisePoly:
        """(P(u)|_S)^2 as a piecewise polynomial in u."""
        lat = self.surface
        pieces = []
        for ch in self.threefold.chambers:
            polys = [Polynomial()] * lat.rank
            for coeff, row in zip(ch.positive, self.restriction.matrix):
                polys = [p + coeff.scale(x) for p, x in zip(polys, row)]
            sq = Polynomial()
            for i, a in enumerate(polys):
                for j, b in enumerate(polys):
                    if lat.form[i][j]:
                        sq = sq + (a * b).scale(lat.form[i][j])
            pieces.append(sq)
        return PiecewisePoly(
            tuple(c.lo for c in self.threefold.chambers) + (self.threefold.tau,), tuple(pieces)
        )

    def flag_order(self) -> PiecewisePoly:
        """d(u) (or its declared bound) for curve flags, d~(u) for point flags."""
        pieces = []
        for ch in self.threefold.chambers:
            total = Polynomial()
            for name, coeff in ch.negative.items():
                total = total + coeff.scale(self.order_along_flag(name))
            pieces.append(total)
        return PiecewisePoly(
            tuple(c.lo for c in self.threefold.chambers) + (self.threefold.tau,), tuple(pieces)
        )

    def restricted_negative_at(self, u) -> dict[str, Fraction]:
        """Coefficients of N'(u) on the surface curves (strict transforms)."""
        out: dict[str, Fraction] = {}
        for name, coeff in self.threefold.negative_at(u).items():
            curve = self.negative_restrictions.get(name)
            if curve is not None:
                out[curve] = out.get(curve, Fraction(0)) + coeff
        return out


def s_divisor(cd: ChamberedDecomposition, minus_k_cubed) -> Fraction:
    return cd.integral() / to_rat(minus_k_cubed)


def _norm(fs: FlagScenario, k: int) -> Fraction:
    return Fraction(k) / fs.minus_k_cubed


def first_term(fs: FlagScenario) -> Fraction:
    """(3/(-K)^3) * integral of d(u) (P(u)|_S)^2."""
    d = fs.flag_order()
    sq = fs.restricted_square()
    pieces = tuple(a * b for a, b in zip(d.pieces, sq.pieces))
    return _norm(fs, 3) * PiecewisePoly(d.breakpoints, pieces).integral()


def inner_volume(fs: FlagScenario) -> PiecewisePoly:
    """u -> integral over v of vol(D(u) - v C), rebuilt piecewise in u."""
    return fs.nested.reconstruct(lambda u: fs.nested.at(u).integral())


def double_term(fs: FlagScenario) -> Fraction:
    return _norm(fs, 3) * inner_volume(fs).integral()


def s_curve_flag(fs: FlagScenario) -> Fraction:
    if fs.kind != "curve":
        raise ValueError("s_curve_flag needs a curve flag")
    return first_term(fs) + double_term(fs)


def s_point_flag_F(fs: FlagScenario) -> Fraction:
    if fs.kind != "point":
        raise ValueError("s_point_flag_F needs a point flag")
    return first_term(fs) + double_term(fs)


def _f_pairings(fs: FlagScenario, u):
    cd = fs.nested.at(u)
    F = fs.flag_class
    return cd, [ch.pair_positive(fs.sweep_lattice, F) for ch in cd.chambers]


def quadratic_term(fs: FlagScenario) -> Fraction:
    """(3/(-K)^3) * double integral of (P~(u,v) . F)^2."""

    def g(u):
        cd, pf = _f_pairings(fs, u)
        return sum(((p * p).integrate(ch.lo, ch.hi) for ch, p in zip(cd.chambers, pf)), Fraction(0))

    return _norm(fs, 3) * fs.nested.reconstruct(g).integral()


def _check_profile(fs: FlagScenario, o: PointProfile):
    curves = {c.name: c for c in fs.sweep_curves}
    F = fs.flag_class
    for name, m in o.local_mults.items():
        if name not in curves:
            raise IntersectionError(f"profile {o.name}: unknown curve {name!r}")
        if m < 0 or m > pair(curves[name].cls, F) * curves[name].bundle_size:
            raise IntersectionError(
                f"profile {o.name}: local multiplicity {m} of {name} exceeds its intersection with F"
            )


def f_o_term(fs: FlagScenario, o: PointProfile) -> Fraction:
    if fs.kind != "point":
        raise ValueError("f_o_term needs a point flag")
    _check_profile(fs, o)
    mults = {k: Fraction(v) for k, v in o.local_mults.items() if v}
    if not mults:
        return Fraction(0)

    def g(u):
        cd, pf = _f_pairings(fs, u)
        fixed = fs.restricted_negative_at(u)
        base = sum((fixed.get(k, Fraction(0)) * m for k, m in mults.items()), Fraction(0))
        total = Fraction(0)
        for ch, p in zip(cd.chambers, pf):
            order = Polynomial.constant(base)
            for k, m in mults.items():
                if k in ch.negative:
                    order = order + ch.negative[k].scale(m)
            total += (p * order).integrate(ch.lo, ch.hi)
        return total

    return _norm(fs, 6) * fs.nested.reconstruct(g).integral()


def s_point_flag_O(fs: FlagScenario, o: PointProfile) -> Fraction:
    return quadratic_term(fs) + f_o_term(fs, o)


@dataclass(frozen=True)
class Verdict:
    s_divisor: Fraction
    kind: str
    flag_value: Fraction | None = None
    point_values: Mapping[str, Fraction] = field(default_factory=dict)
    thresholds: Mapping[str, bool] = field(default_factory=dict)
    certified: bool = False


def certify_center(
    s_div,
    *,
    curve_value=None,
    f_value=None,
    point_values: Mapping[str, Fraction] | None = None,
) -> Verdict:
    """Strict exact threshold checks of the curve and point-blow-up inequalities."""
    s_div = to_rat(s_div)
    checks = {"S_X(S) < 1": s_div < 1}
    if curve_value is not None:
        curve_value = to_rat(curve_value)
        checks["S(W;C) < 1"] = curve_value < CURVE_THRESHOLD
        return Verdict(s_div, "curve", curve_value, {}, checks, all(checks.values()))
    if f_value is not None:
        f_value = to_rat(f_value)
        if not point_values:
            raise IncompleteProfiles("point flag needs at least one point profile")
        checks["S(W;F) < 2"] = f_value < POINT_F_THRESHOLD
        for name, val in point_values.items():
            checks[f"S(W;O) < 1 [{name}]"] = to_rat(val) < POINT_O_THRESHOLD
        return Verdict(s_div, "point", f_value, dict(point_values), checks, all(checks.values()))
    return Verdict(s_div, "divisor", None, {}, checks, all(checks.values()))
