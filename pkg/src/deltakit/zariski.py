"""Zariski decompositions.

On surfaces the negative support is grown to a fixpoint (Fujita's
algorithm) against a caller-supplied list of candidate curves.  On rank-2
threefolds the decomposition is a projection onto the violated nef wall.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from . import linalg
from .intersection import (
    CurveRecord,
    DivisorClass,
    IntersectionError,
    SurfaceLattice,
    ThreefoldAlgebra,
    pair,
)


class ZariskiError(ArithmeticError):
    pass


class NotPseudoEffective(ZariskiError):
    pass


@dataclass(frozen=True)
class ZariskiResult:
    positive: DivisorClass
    negative: Mapping[str, Fraction]
    support: frozenset

    @property
    def volume(self) -> Fraction:
        lat = self.positive.lattice
        if isinstance(lat, ThreefoldAlgebra):
            return lat.cube(self.positive)
        return pair(self.positive, self.positive)


def gram_matrix(curves: Sequence[CurveRecord]) -> list[list[Fraction]]:
    return [[pair(a.cls, b.cls) for b in curves] for a in curves]


def solve_negative_part(
    D: DivisorClass, support: Sequence[CurveRecord]
) -> list[Fraction]:
    """Coefficients x with (sum x_i C_i) . C_j = D . C_j on the support.

    Raises NotPseudoEffective unless the Gram matrix is negative definite.
    """
    if not support:
        return []
    gram = gram_matrix(support)
    if not linalg.is_negative_definite(gram):
        raise NotPseudoEffective(
            "Gram matrix of {" + ", ".join(c.name for c in support) + "} is not negative definite"
        )
    return linalg.solve(gram, [pair(D, c.cls) for c in support])


def decompose_surface(
    lattice: SurfaceLattice, D: DivisorClass, curves: Sequence[CurveRecord]
) -> ZariskiResult:
    if D.lattice != lattice:
        raise IntersectionError("divisor is not on the given lattice")
    candidates = [c for c in curves if c.negative_candidate]
    support: list[CurveRecord] = [c for c in candidates if pair(D, c.cls) < 0]
    coeffs: list[Fraction] = []
    P = D
    while True:
        coeffs = solve_negative_part(D, support)
        if any(x <= 0 for x in coeffs):
            bad = [c.name for c, x in zip(support, coeffs) if x <= 0]
            raise NotPseudoEffective(f"nonpositive negative-part coefficient on {bad}")
        P = D
        for c, x in zip(support, coeffs):
            P = P - c.cls * x
        names = {c.name for c in support}
        joining = [c for c in candidates if c.name not in names and pair(P, c.cls) < 0]
        if not joining:
            break
        support.extend(joining)
    for c in candidates:
        if pair(P, c.cls) < 0:  # pragma: no cover - excluded by the fixpoint
            raise AssertionError(f"positive part negative on {c.name} after fixpoint")
    if pair(P, P) < 0:
        raise NotPseudoEffective(f"positive part has negative square {pair(P, P)}")
    # a curve of nonnegative square is nef, so it pairs nonnegatively with
    # every pseudo-effective class
    for c in curves:
        if pair(c.cls, c.cls) >= 0 and pair(P, c.cls) < 0:
            raise NotPseudoEffective(f"positive part is negative on the nef curve {c.name}")
    negative = {c.name: x for c, x in zip(support, coeffs)}
    return ZariskiResult(P, negative, frozenset(negative))


def check_zariski(
    D: DivisorClass, result: ZariskiResult, curves: Sequence[CurveRecord]
) -> list[str]:
    """Return the list of violated postconditions (empty when all hold)."""
    problems = []
    by_name = {c.name: c for c in curves}
    N = D.lattice.zero()
    for name, x in result.negative.items():
        if x <= 0:
            problems.append(f"coefficient of {name} is {x}")
        N = N + by_name[name].cls * x
    if result.positive + N != D:
        problems.append("P + N != D")
    for name in result.support:
        if pair(result.positive, by_name[name].cls) != 0:
            problems.append(f"P.{name} != 0")
    for c in curves:
        if c.negative_candidate and pair(result.positive, c.cls) < 0:
            problems.append(f"P.{c.name} < 0")
    support = [by_name[n] for n in sorted(result.support)]
    if support and not linalg.is_negative_definite(gram_matrix(support)):
        problems.append("support Gram matrix not negative definite")
    return problems


def decompose_threefold_rank2(algebra: ThreefoldAlgebra, D: DivisorClass) -> ZariskiResult:
    """Zariski decomposition on a rank-2 threefold with known nef walls.

    When D is negative on a wall's curve it is written as ``a R + c E`` with
    R the nef generator of that wall and E the adjacent extremal effective
    class; ``a >= 0`` and ``c > 0`` are required.
    """
    if D.lattice != algebra:
        raise IntersectionError("divisor is not on the given algebra")
    violated = [w for w in algebra.walls if algebra.curve_pairing(w.curve, D) < 0]
    if not violated:
        return ZariskiResult(D, {}, frozenset())
    if len(violated) > 1:
        raise NotPseudoEffective("divisor is negative on both extremal curves")
    wall = violated[0]
    R = algebra.expand_relation(wall.nef)
    E = algebra.expand_relation(wall.effective)
    a, c = linalg.solve([[R.coeffs[0], E.coeffs[0]], [R.coeffs[1], E.coeffs[1]]], list(D.coeffs))
    if a < 0 or c <= 0:
        raise NotPseudoEffective(f"divisor {D} lies outside the pseudo-effective cone")
    return ZariskiResult(R * a, {wall.effective: c}, frozenset({wall.effective}))
