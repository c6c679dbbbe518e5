"""Intersection lattices on surfaces and the rank-2 threefold algebra.

Surface lattices carry a symmetric bilinear form over a named basis; the
threefold algebra stores the four monomial cubes of a rank-2 Picard group and
derives every other triple product by multilinear expansion.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import linalg
from .exactnum import RatLike, to_rat


class IntersectionError(ValueError):
    pass


class LatticeMismatch(IntersectionError):
    pass


class UnknownClass(IntersectionError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown class"


def _matrix(rows) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(to_rat(x) for x in row) for row in rows)


class SurfaceLattice:
    """Named basis with a symmetric intersection form.

    ``hodge=True`` requests validation of signature (1, n-1).
    """

    def __init__(self, basis: Sequence[str], form, hodge: bool = False, name: str = ""):
        self.basis = tuple(basis)
        self.form = _matrix(form)
        self.hodge = hodge
        self.name = name
        n = len(self.basis)
        if len(set(self.basis)) != n:
            raise IntersectionError("duplicate basis names")
        if len(self.form) != n or any(len(row) != n for row in self.form):
            raise IntersectionError(f"form must be {n}x{n}")
        for i in range(n):
            for j in range(i):
                if self.form[i][j] != self.form[j][i]:
                    raise IntersectionError(
                        f"form not symmetric at ({self.basis[i]}, {self.basis[j]})"
                    )
        if hodge:
            pos, neg, zero = linalg.signature(self.form)
            if (pos, neg, zero) != (1, n - 1, 0):
                raise IntersectionError(
                    f"lattice flagged hodge has signature ({pos}, {neg}, {zero})"
                )
        self._index = {b: i for i, b in enumerate(self.basis)}

    def __eq__(self, other):
        if not isinstance(other, SurfaceLattice):
            return NotImplemented
        return self.basis == other.basis and self.form == other.form

    def __hash__(self):
        return hash((self.basis, self.form))

    def __repr__(self):
        return f"SurfaceLattice({list(self.basis)})"

    @property
    def rank(self) -> int:
        return len(self.basis)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownClass(f"{name!r} is not a basis element of {self!r}") from None

    def signature(self) -> tuple[int, int, int]:
        return linalg.signature(self.form)

    def zero(self) -> "DivisorClass":
        return DivisorClass(self, (Fraction(0),) * self.rank)

    def generator(self, name: str) -> "DivisorClass":
        coeffs = [Fraction(0)] * self.rank
        coeffs[self.index(name)] = Fraction(1)
        return DivisorClass(self, tuple(coeffs))

    def divisor(self, coeffs: Mapping[str, RatLike] | Sequence[RatLike]) -> "DivisorClass":
        if isinstance(coeffs, Mapping):
            vec = [Fraction(0)] * self.rank
            for name, c in coeffs.items():
                vec[self.index(name)] = to_rat(c)
            return DivisorClass(self, tuple(vec))
        return DivisorClass(self, tuple(to_rat(c) for c in coeffs))


@dataclass(frozen=True, eq=False)
class DivisorClass:
    """Coefficient vector over the basis of a lattice or threefold algebra."""

    lattice: object
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(to_rat(c) for c in self.coeffs))
        if len(self.coeffs) != len(self.lattice.basis):
            raise LatticeMismatch(
                f"{len(self.coeffs)} coefficients for a basis of size {len(self.lattice.basis)}"
            )

    def _check(self, other: "DivisorClass"):
        if not isinstance(other, DivisorClass):
            raise TypeError("expected a DivisorClass")
        if self.lattice is not other.lattice and self.lattice != other.lattice:
            raise LatticeMismatch("classes live on different lattices")

    def __add__(self, other):
        self._check(other)
        return DivisorClass(self.lattice, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        self._check(other)
        return DivisorClass(self.lattice, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return DivisorClass(self.lattice, tuple(-a for a in self.coeffs))

    def __mul__(self, c):
        c = to_rat(c)
        return DivisorClass(self.lattice, tuple(c * a for a in self.coeffs))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, DivisorClass):
            return NotImplemented
        return self.lattice == other.lattice and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def as_dict(self) -> dict[str, Fraction]:
        return {b: c for b, c in zip(self.lattice.basis, self.coeffs) if c}

    def __repr__(self):
        terms = [f"{c}*{b}" for b, c in self.as_dict().items()]
        return "DivisorClass(" + (" + ".join(terms) or "0") + ")"


@dataclass(frozen=True)
class CurveRecord:
    """A named curve (or symmetric bundle of curves) on a surface.

    ``mult`` is the multiplicity at the point to be blown up; ``f_mult`` is the
    intersection with the exceptional curve once blown up.
    """

    name: str
    cls: DivisorClass
    negative_candidate: bool = True
    bundle_size: int = 1
    mult: int = 0
    f_mult: int = 0

    def __post_init__(self):
        if self.bundle_size < 1:
            raise IntersectionError(f"{self.name}: bundle_size must be positive")
        if self.mult < 0 or self.f_mult < 0:
            raise IntersectionError(f"{self.name}: multiplicities must be nonnegative")
        if self.negative_candidate and pair(self.cls, self.cls) >= 0:
            raise IntersectionError(
                f"{self.name}: negative candidate with self-intersection {pair(self.cls, self.cls)}"
            )


def pair(a: DivisorClass, b: DivisorClass) -> Fraction:
    a._check(b)
    if not isinstance(a.lattice, SurfaceLattice):
        raise LatticeMismatch("pair() needs classes on a surface lattice")
    return linalg.bilinear(a.lattice.form, a.coeffs, b.coeffs)


@dataclass(frozen=True)
class NefWall:
    """One wall of the rank-2 nef cone.

    ``curve`` pairs with divisors through ``functional``; it vanishes on the
    nef generator ``nef`` and is negative on the effective class ``effective``
    spanning the adjacent boundary of the effective cone.
    """

    curve: str
    functional: tuple[Fraction, Fraction]
    nef: str
    effective: str


class ThreefoldAlgebra:
    """Rank-2 Picard group with a symmetric trilinear form.

    ``cubes`` are ``(A^3, A^2 B, A B^2, B^3)`` for basis ``(A, B)``;
    ``relations`` name integer combinations of the basis.
    """

    def __init__(
        self,
        basis: Sequence[str],
        cubes: Sequence[RatLike],
        relations: Mapping[str, Sequence[int]] | None = None,
        walls: Iterable[NefWall] = (),
        name: str = "",
    ):
        if len(basis) != 2:
            raise IntersectionError("threefold algebra must have exactly two generators")
        if len(cubes) != 4:
            raise IntersectionError("need the four cube constants")
        self.basis = tuple(basis)
        self.cubes = tuple(to_rat(c) for c in cubes)
        self.relations = {k: tuple(int(x) for x in v) for k, v in (relations or {}).items()}
        for k, v in self.relations.items():
            if len(v) != 2:
                raise IntersectionError(f"relation {k} must have two coefficients")
        self.walls = tuple(walls)
        self.name = name
        for w in self.walls:
            self._check_wall(w)

    def __eq__(self, other):
        if not isinstance(other, ThreefoldAlgebra):
            return NotImplemented
        return (self.basis, self.cubes, self.relations, self.walls) == (
            other.basis,
            other.cubes,
            other.relations,
            other.walls,
        )

    def __hash__(self):
        return hash((self.basis, self.cubes))

    def __repr__(self):
        return f"ThreefoldAlgebra({list(self.basis)}, cubes={[str(c) for c in self.cubes]})"

    def _check_wall(self, w: NefWall):
        nef_values = {
            name: self.curve_pairing(w.curve, self.expand_relation(name), functional=w.functional)
            for name in {wall.nef for wall in self.walls}
        }
        if any(v < 0 for v in nef_values.values()):
            raise IntersectionError(f"curve {w.curve} is negative on a nef generator")
        zeros = [name for name, v in nef_values.items() if v == 0]
        if zeros != [w.nef]:
            raise IntersectionError(
                f"curve {w.curve} must vanish on exactly the nef generator {w.nef}, vanishes on {zeros}"
            )
        if self.curve_pairing(w.curve, self.expand_relation(w.effective), functional=w.functional) >= 0:
            raise IntersectionError(f"effective class {w.effective} is not negative on {w.curve}")

    def divisor(self, coeffs: Sequence[RatLike]) -> DivisorClass:
        return DivisorClass(self, tuple(to_rat(c) for c in coeffs))

    def expand_relation(self, name: str) -> DivisorClass:
        if name in self.basis:
            vec = [0, 0]
            vec[self.basis.index(name)] = 1
            return self.divisor(vec)
        try:
            return self.divisor(self.relations[name])
        except KeyError:
            raise UnknownClass(f"unknown class name {name!r}") from None

    def triple(self, a: DivisorClass, b: DivisorClass, c: DivisorClass) -> Fraction:
        for x in (b, c):
            a._check(x)
        if a.lattice != self:
            raise LatticeMismatch("classes belong to another algebra")
        total = Fraction(0)
        for i in (0, 1):
            if not a.coeffs[i]:
                continue
            for j in (0, 1):
                if not b.coeffs[j]:
                    continue
                for k in (0, 1):
                    if c.coeffs[k]:
                        total += a.coeffs[i] * b.coeffs[j] * c.coeffs[k] * self.cubes[i + j + k]
        return total

    def cube(self, a: DivisorClass) -> Fraction:
        return self.triple(a, a, a)

    def curve_pairing(self, curve: str, d: DivisorClass, functional=None) -> Fraction:
        if functional is None:
            functional = self.wall(curve).functional
        return functional[0] * d.coeffs[0] + functional[1] * d.coeffs[1]

    def wall(self, curve: str) -> NefWall:
        for w in self.walls:
            if w.curve == curve:
                return w
        raise UnknownClass(f"no extremal curve named {curve!r}")


def triple(a: DivisorClass, b: DivisorClass, c: DivisorClass) -> Fraction:
    if not isinstance(a.lattice, ThreefoldAlgebra):
        raise LatticeMismatch("triple() needs classes on a threefold algebra")
    return a.lattice.triple(a, b, c)


def expand_relation(algebra: ThreefoldAlgebra, name: str) -> DivisorClass:
    return algebra.expand_relation(name)


@dataclass(frozen=True)
class BlowUp:
    """Result of blowing up a point: new lattice, pullback, strict transforms."""

    source: SurfaceLattice
    lattice: SurfaceLattice
    exceptional: str
    curves: tuple[CurveRecord, ...]

    def pullback(self, d: DivisorClass) -> DivisorClass:
        if d.lattice != self.source:
            raise LatticeMismatch("class is not on the blown-up surface")
        return DivisorClass(self.lattice, d.coeffs + (Fraction(0),))

    def exceptional_class(self) -> DivisorClass:
        return self.lattice.generator(self.exceptional)

    def curve(self, name: str) -> CurveRecord:
        for c in self.curves:
            if c.name == name:
                return c
        raise UnknownClass(f"no curve named {name!r}")


def blow_up_point(
    lattice: SurfaceLattice,
    curves: Sequence[CurveRecord],
    mults: Mapping[str, int] | None = None,
    exceptional: str = "F",
    candidates: Iterable[str] | None = None,
) -> BlowUp:
    """Blow up one point.

    The new generator ``F`` has ``F^2 = -1`` and is orthogonal to pullbacks.
    Each curve becomes ``f^*C - m_C F`` with ``m_C`` taken from ``mults`` or
    from the curve's own ``mult``.  The exceptional curve itself is appended
    as a negative candidate.  ``candidates`` names the curves allowed into a
    negative part afterwards; by default a curve qualifies when its strict
    transform has negative square and it was a candidate or passes through
    the point.
    """
    if exceptional in lattice.basis:
        raise IntersectionError(f"basis already contains {exceptional!r}")
    mults = dict(mults or {})
    names = {c.name for c in curves}
    unknown = set(mults) - names
    if unknown:
        raise UnknownClass(f"multiplicities given for unknown curves {sorted(unknown)}")
    n = lattice.rank
    form = [list(row) + [Fraction(0)] for row in lattice.form]
    form.append([Fraction(0)] * n + [Fraction(-1)])
    new = SurfaceLattice(lattice.basis + (exceptional,), form, name=lattice.name + "~")
    out = []
    for c in curves:
        m = int(mults.get(c.name, c.mult))
        if m < 0:
            raise IntersectionError(f"{c.name}: negative multiplicity")
        cls = DivisorClass(new, c.cls.coeffs + (Fraction(-m),))
        if candidates is None:
            wanted = c.negative_candidate or m > 0
        else:
            wanted = c.name in candidates
        out.append(
            CurveRecord(
                c.name,
                cls,
                negative_candidate=wanted and pair(cls, cls) < 0,
                bundle_size=c.bundle_size,
                mult=0,
                f_mult=m,
            )
        )
    out.append(CurveRecord(exceptional, new.generator(exceptional), True, 1, 0, 0))
    return BlowUp(lattice, new, exceptional, tuple(out))


class RestrictionMap:
    """Linear map from threefold classes to a surface lattice.

    ``matrix[i]`` is the image of the i-th threefold basis element.
    """

    def __init__(self, algebra: ThreefoldAlgebra, target: SurfaceLattice, matrix):
        self.algebra = algebra
        self.target = target
        self.matrix = _matrix(matrix)
        if len(self.matrix) != len(algebra.basis) or any(
            len(row) != target.rank for row in self.matrix
        ):
            raise LatticeMismatch(
                f"restriction matrix must be {len(algebra.basis)}x{target.rank}"
            )

    def __call__(self, d: DivisorClass) -> DivisorClass:
        return restrict(d, self)


def restrict(d: DivisorClass, rmap: RestrictionMap) -> DivisorClass:
    if d.lattice != rmap.algebra:
        raise LatticeMismatch("class is not on the restriction's source algebra")
    out = [Fraction(0)] * rmap.target.rank
    for c, row in zip(d.coeffs, rmap.matrix):
        if c:
            for j, x in enumerate(row):
                out[j] += c * x
    return DivisorClass(rmap.target, tuple(out))
