"""One-parameter sweeps ``D(x) = A - x B`` and their chamber structure.

Threefold sweeps sample the rank-2 decomposition inside each chamber and
rebuild the formulas by exact interpolation.  Surface sweeps are linear in the
parameter once the support is fixed, so walls are pinned by exact linear
solves.  :class:`NestedSweep` handles the two-parameter case by running exact
inner sweeps at rational outer parameters and locating the outer walls where
inner wall functions cross.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Mapping, Sequence

from . import linalg
from .exactnum import (
    NotRationalWall,
    PiecewisePoly,
    Polynomial,
    poly_from_samples,
    to_rat,
)
from .intersection import (
    CurveRecord,
    DivisorClass,
    SurfaceLattice,
    ThreefoldAlgebra,
    pair,
)
from .zariski import (
    NotPseudoEffective,
    ZariskiResult,
    decompose_surface,
    decompose_threefold_rank2,
    gram_matrix,
)

MAX_BISECTION_DEPTH = 64


class SweepError(ArithmeticError):
    pass


class DegreeCapExceeded(SweepError):
    pass


class NoThreshold(SweepError):
    pass


class ThresholdMismatch(SweepError):
    pass


class WallNotFound(SweepError):
    pass


@dataclass(frozen=True)
class Chamber:
    lo: Fraction
    hi: Fraction
    negative: Mapping[str, Polynomial]
    positive: tuple[Polynomial, ...]
    vol: Polynomial

    @property
    def support(self) -> frozenset:
        return frozenset(self.negative)

    def positive_at(self, lattice, x) -> DivisorClass:
        return DivisorClass(lattice, tuple(p(x) for p in self.positive))

    def pair_positive(self, lattice: SurfaceLattice, cls: DivisorClass) -> Polynomial:
        """(P . cls) as a polynomial in the sweep parameter."""
        out = Polynomial()
        for i, p in enumerate(self.positive):
            w = sum((lattice.form[i][j] * c for j, c in enumerate(cls.coeffs)), Fraction(0))
            if w:
                out = out + p.scale(w)
        return out


@dataclass(frozen=True)
class ChamberedDecomposition:
    lattice: object
    chambers: tuple[Chamber, ...]
    tau: Fraction
    volume_vanishes: bool = True
    notes: tuple[str, ...] = field(default=())

    def walls(self) -> list[Fraction]:
        return [c.lo for c in self.chambers[1:]]

    def chamber_index(self, x) -> int:
        x = to_rat(x)
        if not self.chambers or x < self.chambers[0].lo or x > self.tau:
            raise ValueError(f"{x} outside the swept range")
        for i, c in enumerate(self.chambers):
            if x <= c.hi:
                return i
        return len(self.chambers) - 1

    def chamber_at(self, x) -> Chamber:
        return self.chambers[self.chamber_index(x)]

    def vol_at(self, x) -> Fraction:
        return self.chamber_at(x).vol(to_rat(x))

    def positive_at(self, x) -> DivisorClass:
        return self.chamber_at(x).positive_at(self.lattice, to_rat(x))

    def negative_at(self, x) -> dict[str, Fraction]:
        x = to_rat(x)
        return {k: p(x) for k, p in self.chamber_at(x).negative.items() if p(x) != 0}

    def vol_piecewise(self) -> PiecewisePoly:
        if not self.chambers:
            return PiecewisePoly.zero(0, 1)
        return PiecewisePoly(
            tuple(c.lo for c in self.chambers) + (self.chambers[-1].hi,),
            tuple(c.vol for c in self.chambers),
        )

    def signature(self) -> tuple[frozenset, ...]:
        return tuple(c.support for c in self.chambers)

    def continuity_defects(self) -> list[str]:
        """Interior walls where vol or a negative coefficient jumps."""
        out = []
        for left, right in zip(self.chambers, self.chambers[1:]):
            w = left.hi
            if left.vol(w) != right.vol(w):
                out.append(f"vol jumps at {w}")
            for name in left.support | right.support:
                a = left.negative.get(name, Polynomial())(w)
                b = right.negative.get(name, Polynomial())(w)
                if a != b:
                    out.append(f"coefficient of {name} jumps at {w}")
            if left.positive_at(self.lattice, w) != right.positive_at(self.lattice, w):
                out.append(f"positive part jumps at {w}")
        return out

    def integral(self) -> Fraction:
        return sum((c.vol.integrate(c.lo, c.hi) for c in self.chambers), Fraction(0))


def _interpolate_checked(f: Callable[[Fraction], Fraction], lo, hi, cap: int, what: str) -> Polynomial:
    """Interpolate f on (lo, hi) from cap+1 interior samples; verify at one more."""
    n = cap + 2
    xs = [lo + (hi - lo) * Fraction(k, n + 1) for k in range(1, n + 1)]
    verify = xs.pop(n // 2)
    p = poly_from_samples([(x, f(x)) for x in xs])
    if p(verify) != f(verify):
        raise DegreeCapExceeded(f"{what} on [{lo}, {hi}] is not a polynomial of degree <= {cap}")
    return p


def sweep_threefold(
    algebra: ThreefoldAlgebra,
    A: DivisorClass,
    B: DivisorClass,
    tau_hint=None,
    coeff_cap: int = 1,
    vol_cap: int = 3,
) -> ChamberedDecomposition:
    """Chambers of the ray ``A - uB`` for ``u >= 0`` up to the pseudo-effective threshold."""

    def D(u):
        return A - B * u

    roots: set[Fraction] = set()
    for w in algebra.walls:
        a0, a1 = algebra.curve_pairing(w.curve, A), -algebra.curve_pairing(w.curve, B)
        if a1 != 0 and -a0 / a1 > 0:
            roots.add(-a0 / a1)
        # a(u) = 0 boundary of the representation a R + c E
        R = algebra.expand_relation(w.nef)
        E = algebra.expand_relation(w.effective)
        m = [[R.coeffs[0], E.coeffs[0]], [R.coeffs[1], E.coeffs[1]]]
        a_at0 = linalg.solve(m, list(A.coeffs))[0]
        a_slope = -linalg.solve(m, list(B.coeffs))[0]
        if a_slope != 0 and -a_at0 / a_slope > 0:
            roots.add(-a_at0 / a_slope)
    decompose_threefold_rank2(algebra, D(Fraction(0)))
    points = [Fraction(0)] + sorted(roots)
    chambers: list[Chamber] = []
    for lo, hi in zip(points, points[1:]):
        mid = (lo + hi) / 2
        try:
            sample = decompose_threefold_rank2(algebra, D(mid))
        except NotPseudoEffective:
            break
        chambers.append(_threefold_chamber(algebra, D, lo, hi, sample, coeff_cap, vol_cap))
    else:
        beyond = points[-1] + 1
        try:
            decompose_threefold_rank2(algebra, D(beyond))
        except NotPseudoEffective:
            pass
        else:
            raise NoThreshold("ray stays pseudo-effective beyond every wall")
    chambers = _merge_equal(chambers)
    tau = pseff_threshold(chambers, tau_hint)
    return ChamberedDecomposition(algebra, tuple(chambers), tau, chambers[-1].vol(tau) == 0)


def _threefold_chamber(algebra, D, lo, hi, sample: ZariskiResult, coeff_cap, vol_cap) -> Chamber:
    names = sorted(sample.support)
    cache: dict[Fraction, ZariskiResult] = {}

    def at(u):
        if u not in cache:
            res = decompose_threefold_rank2(algebra, D(u))
            if res.support != sample.support:
                raise DegreeCapExceeded(f"support changes inside [{lo}, {hi}]")
            cache[u] = res
        return cache[u]

    positive = tuple(
        _interpolate_checked(lambda u, i=i: at(u).positive.coeffs[i], lo, hi, coeff_cap, "positive part")
        for i in range(2)
    )
    negative = {
        n: _interpolate_checked(lambda u, n=n: at(u).negative[n], lo, hi, coeff_cap, f"coefficient of {n}")
        for n in names
    }
    vol = _interpolate_checked(lambda u: at(u).volume, lo, hi, vol_cap, "volume")
    # the volume must be the cube of the positive part as polynomials
    a, b = positive
    c = algebra.cubes
    cube = a**3 * c[0] + (a * a * b) * (3 * c[1]) + (a * b * b) * (3 * c[2]) + b**3 * c[3]
    if cube != vol:
        raise DegreeCapExceeded(f"volume on [{lo}, {hi}] disagrees with the cube of P")
    return Chamber(lo, hi, negative, positive, vol)


def _merge_equal(chambers: list[Chamber]) -> list[Chamber]:
    out: list[Chamber] = []
    for c in chambers:
        if c.hi == c.lo:
            continue
        if out and out[-1].support == c.support and out[-1].vol == c.vol and out[-1].positive == c.positive:
            prev = out.pop()
            c = Chamber(prev.lo, c.hi, prev.negative, prev.positive, prev.vol)
        out.append(c)
    return out


def pseff_threshold(chambers: Sequence[Chamber], hint=None) -> Fraction:
    """Smallest root of the last chamber's volume at or beyond its lower wall."""
    if not chambers:
        raise NoThreshold("no chambers")
    last = chambers[-1]
    if last.vol.is_zero():
        raise NoThreshold("volume vanishes identically on the last chamber")
    roots = [r for r in last.vol.rational_roots() if r >= last.lo]
    if not roots:
        raise NoThreshold("last chamber volume has no rational root in range")
    tau = roots[0]
    if tau != last.hi:
        raise NoThreshold(f"volume root {tau} does not close the last chamber at {last.hi}")
    if hint is not None and to_rat(hint) != tau:
        raise ThresholdMismatch(f"threshold {tau} does not match hint {hint}")
    return tau


# --- surface sweeps -----------------------------------------------------------


@dataclass
class _Affine:
    """Negative-part data of a fixed support, affine in the parameter."""

    support: list[CurveRecord]
    x0: list[Fraction]
    x1: list[Fraction]
    P0: DivisorClass
    P1: DivisorClass


def _affine_for_support(D: DivisorClass, C: DivisorClass, support: list[CurveRecord]) -> _Affine:
    if support:
        gram = gram_matrix(support)
        if not linalg.is_negative_definite(gram):
            raise NotPseudoEffective(
                "Gram matrix of {" + ", ".join(c.name for c in support) + "} is not negative definite"
            )
        x0 = linalg.solve(gram, [pair(D, c.cls) for c in support])
        x1 = linalg.solve(gram, [-pair(C, c.cls) for c in support])
    else:
        x0, x1 = [], []
    P0, P1 = D, -C
    for c, a, b in zip(support, x0, x1):
        P0 = P0 - c.cls * a
        P1 = P1 - c.cls * b
    return _Affine(support, x0, x1, P0, P1)


def sweep_surface_at(
    lattice: SurfaceLattice,
    D: DivisorClass,
    C: DivisorClass | CurveRecord,
    curves: Sequence[CurveRecord],
) -> ChamberedDecomposition:
    """Chambers of ``D - vC`` for ``v`` in ``[0, t]`` where the volume reaches 0."""
    if isinstance(C, CurveRecord):
        C = C.cls
    candidates = [c for c in curves if c.negative_candidate]
    start = decompose_surface(lattice, D, curves)
    if start.volume == 0:
        return ChamberedDecomposition(lattice, (), Fraction(0), True)
    support = [c for c in candidates if c.name in start.support]
    v = Fraction(0)
    chambers: list[Chamber] = []
    for _ in range(4 * len(candidates) + 4):
        aff = _affine_for_support(D, C, support)
        # curves sitting exactly on a wall at v enter if P decreases on them
        while True:
            names = {c.name for c in support}
            joining = [
                c
                for c in candidates
                if c.name not in names
                and pair(aff.P0, c.cls) + v * pair(aff.P1, c.cls) == 0
                and pair(aff.P1, c.cls) < 0
            ]
            if not joining:
                break
            support = support + joining
            aff = _affine_for_support(D, C, support)
        for c, a, b in zip(support, aff.x0, aff.x1):
            if a + v * b < 0 or (a + v * b == 0 and b <= 0):
                raise NotPseudoEffective(f"coefficient of {c.name} is not positive past v={v}")
        vol = (
            Polynomial.constant(pair(aff.P0, aff.P0))
            + Polynomial.linear(0, 2 * pair(aff.P0, aff.P1))
            + Polynomial((0, 0, pair(aff.P1, aff.P1)))
        )
        if vol(v) == 0:
            break
        names = {c.name for c in support}
        next_wall = None
        for c in candidates:
            if c.name in names:
                continue
            s = pair(aff.P1, c.cls)
            if s < 0:
                w = -pair(aff.P0, c.cls) / s
                if w > v and (next_wall is None or w < next_wall):
                    next_wall = w
        for a, b in zip(aff.x0, aff.x1):
            if b < 0:
                w = -a / b
                if next_wall is None or w < next_wall:
                    raise NotPseudoEffective("a negative-part coefficient vanishes inside a chamber")
        if vol.is_zero():
            raise NoThreshold("volume identically zero")
        # vol is non-increasing in v, so a positive value at the next wall
        # rules out a root before it and the (possibly irrational) roots of
        # this piece are never needed
        if next_wall is not None and vol(next_wall) > 0:
            end = None
        else:
            ends = [r for r in vol.rational_roots() if r > v] if vol.degree() > 0 else []
            end = ends[0] if ends else None
        if end is None and next_wall is None:
            raise NoThreshold("inner sweep never leaves the pseudo-effective cone")
        if end is not None and (next_wall is None or end <= next_wall):
            hi, closing = end, True
        else:
            hi, closing = next_wall, False
        negative = {
            c.name: Polynomial.linear(a, b) for c, a, b in zip(support, aff.x0, aff.x1)
        }
        positive = tuple(Polynomial.linear(a, b) for a, b in zip(aff.P0.coeffs, aff.P1.coeffs))
        chambers.append(Chamber(v, hi, negative, positive, vol))
        v = hi
        if closing:
            break
    else:  # pragma: no cover - bounded by the number of candidates
        raise SweepError("inner sweep did not terminate")
    if not chambers:
        return ChamberedDecomposition(lattice, (), v, True)
    return ChamberedDecomposition(lattice, tuple(chambers), chambers[-1].hi, True)


# --- outer reconstruction -----------------------------------------------------


def outer_reconstruct(
    g: Callable[[Fraction], Fraction],
    domain: tuple,
    candidate_walls: Sequence = (),
    degree_cap: int = 6,
) -> PiecewisePoly:
    """Rebuild a piecewise polynomial from exact samples.

    Each piece between consecutive walls is interpolated from ``degree_cap+1``
    interior samples and verified at one more.
    """
    lo, hi = to_rat(domain[0]), to_rat(domain[1])
    walls = sorted({to_rat(w) for w in candidate_walls if lo < to_rat(w) < hi} | {lo, hi})
    pieces = [
        _interpolate_checked(g, a, b, degree_cap, "outer integrand") for a, b in zip(walls, walls[1:])
    ]
    return PiecewisePoly(tuple(walls), tuple(pieces))


InnerFamily = Callable[[Fraction], DivisorClass]


class NestedSweep:
    """Inner sweeps ``D(u) - vC`` at rational ``u`` with outer wall discovery.

    ``family(u)`` returns ``D(u)`` on ``lattice`` and must be affine in ``u``
    on each interval between ``fixed_walls``.
    """

    def __init__(
        self,
        lattice: SurfaceLattice,
        family: InnerFamily,
        C: DivisorClass,
        curves: Sequence[CurveRecord],
        domain: tuple,
        fixed_walls: Sequence = (),
    ):
        self.lattice = lattice
        self.family = family
        self.C = C
        self.curves = tuple(curves)
        self.candidates = [c for c in self.curves if c.negative_candidate]
        self.domain = (to_rat(domain[0]), to_rat(domain[1]))
        lo, hi = self.domain
        self.fixed_walls = sorted({to_rat(w) for w in fixed_walls if lo < to_rat(w) < hi} | {lo, hi})
        self._cache: dict[Fraction, ChamberedDecomposition] = {}
        self._walls: list[Fraction] | None = None
        self.bisections = 0

    def at(self, u) -> ChamberedDecomposition:
        u = to_rat(u)
        if u not in self._cache:
            self._cache[u] = sweep_surface_at(self.lattice, self.family(u), self.C, self.curves)
        return self._cache[u]

    def signature(self, u) -> tuple:
        cd = self.at(u)
        return cd.signature()

    def _wall_keys(self, u) -> list[tuple]:
        """Keys (support, entering) for each interior wall plus the closing wall."""
        cd = self.at(u)
        keys = []
        for left, right in zip(cd.chambers, cd.chambers[1:]):
            keys.append(("wall", left.support, right.support - left.support))
        if cd.chambers:
            keys.append(("end", cd.chambers[-1].support, frozenset()))
        return keys

    def _wall_function(self, key, a, b) -> Polynomial:
        """Exact affine function u -> v of a keyed wall on (a, b)."""
        kind, support_names, entering = key
        support = [c for c in self.candidates if c.name in support_names]
        us = [a + (b - a) * Fraction(k, 5) for k in (1, 2, 3, 4)]
        if kind == "wall":
            c = next(c for c in self.candidates if c.name in entering)

            def val(u):
                aff = _affine_for_support(self.family(u), self.C, support)
                s = pair(aff.P1, c.cls)
                if s == 0:
                    raise WallNotFound(f"wall of {c.name} does not move with v")
                return -pair(aff.P0, c.cls) / s

        else:

            def val(u):
                aff = _affine_for_support(self.family(u), self.C, support)
                vol = (
                    Polynomial.constant(pair(aff.P0, aff.P0))
                    + Polynomial.linear(0, 2 * pair(aff.P0, aff.P1))
                    + Polynomial((0, 0, pair(aff.P1, aff.P1)))
                )
                # the closing wall is the first root where this support's
                # positive part is still nef with nonnegative coefficients
                for r in vol.rational_roots():
                    if r < 0:
                        continue
                    P = aff.P0 + aff.P1 * r
                    if all(pair(P, c.cls) >= 0 for c in self.candidates) and all(
                        x0 + r * x1 >= 0 for x0, x1 in zip(aff.x0, aff.x1)
                    ):
                        return r
                raise NotRationalWall("closing wall has no rational root")

        for u in us:
            self.at(u)
        p = poly_from_samples([(us[0], val(us[0])), (us[1], val(us[1]))])
        for u in us[2:]:
            if p(u) != val(u):
                raise NotRationalWall(f"wall {key[0]} of {sorted(support_names)} is not affine in u")
        return p

    def outer_walls(self) -> list[Fraction]:
        if self._walls is None:
            walls = set(self.fixed_walls)
            for a, b in zip(self.fixed_walls, self.fixed_walls[1:]):
                walls |= self._walls_in(a, b)
            self._walls = sorted(walls)
        return self._walls

    def _crossings(self, fns: list[Polynomial], a, b) -> set[Fraction]:
        out = set()
        for i, f in enumerate(fns):
            for g in fns[i + 1 :]:
                d = f - g
                if d.degree() == 1:
                    r = -d.coeffs[0] / d.coeffs[1]
                    if a < r < b:
                        out.add(r)
            if f.degree() == 1:
                # a wall reaching v = 0 also changes the chamber sequence
                r = -f.coeffs[0] / f.coeffs[1]
                if a < r < b:
                    out.add(r)
        return out

    def _walls_in(self, a: Fraction, b: Fraction) -> set[Fraction]:
        keys: dict[tuple, Polynomial] = {}
        found: set[Fraction] = set()
        probe = [a + (b - a) * Fraction(k, 10) for k in range(1, 10)]
        for _ in range(16):
            new_keys = False
            for u in probe:
                for key in self._wall_keys(u):
                    if key not in keys:
                        keys[key] = self._wall_function(key, a, b)
                        new_keys = True
            found |= self._crossings(list(keys.values()), a, b)
            pts = sorted(found | {a, b})
            probe = []
            unsettled = []
            for x, y in zip(pts, pts[1:]):
                sub = [x + (y - x) * Fraction(k, 4) for k in (1, 2, 3)]
                probe.extend(sub)
                sigs = {self.signature(s) for s in sub}
                if len(sigs) > 1:
                    unsettled.append((x, y, sub))
            if not unsettled:
                return found
            if not new_keys:
                for x, y, sub in unsettled:
                    found.add(self._bisect_wall(sub, keys))
        raise WallNotFound(f"outer walls on [{a}, {b}] did not stabilize")

    def _bisect_wall(self, sub, keys) -> Fraction:
        """Bracket a signature change by bisection, then pin it by a crossing."""
        for x, y in zip(sub, sub[1:]):
            sx, sy = self.signature(x), self.signature(y)
            if sx == sy:
                continue
            for _ in range(MAX_BISECTION_DEPTH):
                self.bisections += 1
                m = (x + y) / 2
                if self.signature(m) == sx:
                    x = m
                else:
                    y = m
                for key in self._wall_keys(x) + self._wall_keys(y):
                    if key not in keys:
                        keys[key] = self._wall_function(key, x, y)
                hits = self._crossings(list(keys.values()), x - (y - x), y + (y - x))
                hits = {h for h in hits if x <= h <= y}
                if len(hits) == 1:
                    return hits.pop()
            raise WallNotFound(f"signature change near {x} could not be pinned")
        raise WallNotFound("no signature change to bisect")

    def reconstruct(self, g: Callable[[Fraction], Fraction], degree_cap: int = 6) -> PiecewisePoly:
        return outer_reconstruct(g, self.domain, self.outer_walls(), degree_cap)
