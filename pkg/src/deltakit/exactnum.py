"""Exact rational scalars, univariate polynomials and piecewise polynomials.

Scalars are :class:`fractions.Fraction` values (aliased as ``Rat``); they are
always in lowest terms with a positive denominator.  Nothing in this module
ever touches a float.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Iterable, Sequence, Union

Rat = Fraction
RatLike = Union[Fraction, int, str]


class ExactNumError(ValueError):
    pass


class DuplicateNode(ExactNumError):
    pass


class InvalidInterval(ExactNumError):
    pass


class NotRationalWall(ExactNumError):
    pass


def to_rat(value: RatLike) -> Fraction:
    """Parse an int, Fraction or ``"p/q"`` string into an exact rational.

    Floats are rejected outright.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            num, _, den = text.partition("/")
            try:
                n, d = int(num), int(den)
            except ValueError:
                raise ExactNumError(f"malformed fraction {value!r}") from None
            if d == 0:
                raise ExactNumError(f"zero denominator in {value!r}")
            return Fraction(n, d)
        try:
            return Fraction(int(text))
        except ValueError:
            raise ExactNumError(f"malformed fraction {value!r}") from None
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def rat_str(value: Fraction) -> str:
    """Serialize as ``"p/q"`` in lowest terms, or ``"p"`` when q == 1."""
    return str(Fraction(value))


class Polynomial:
    """Univariate polynomial with rational coefficients, ascending degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[RatLike] = ()):
        cs = [to_rat(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    @classmethod
    def constant(cls, c: RatLike) -> "Polynomial":
        return cls((c,))

    @classmethod
    def linear(cls, c0: RatLike, c1: RatLike) -> "Polynomial":
        return cls((c0, c1))

    @classmethod
    def x(cls) -> "Polynomial":
        return cls((0, 1))

    def degree(self) -> int:
        # zero polynomial has degree -1
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x: RatLike) -> Fraction:
        x = to_rat(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Polynomial({[rat_str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if k == 0 else ("u" if k == 1 else f"u^{k}")
            if mono and abs(c) == 1:
                coef = "-" if c < 0 else ""
            else:
                coef = rat_str(c) + ("*" if mono else "")
            terms.append(coef + mono)
        return " + ".join(terms).replace("+ -", "- ")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Polynomial.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Polynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c: RatLike) -> "Polynomial":
        c = to_rat(c)
        return Polynomial(c * a for a in self.coeffs)

    def derivative(self) -> "Polynomial":
        return Polynomial(k * c for k, c in enumerate(self.coeffs) if k)

    def antiderivative(self) -> "Polynomial":
        return Polynomial([0] + [c / (k + 1) for k, c in enumerate(self.coeffs)])

    def compose(self, inner: "Polynomial") -> "Polynomial":
        acc = Polynomial()
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def integrate(self, a: RatLike, b: RatLike) -> Fraction:
        return definite_integral(self, a, b)

    def divmod(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dd = other.degree()
        lead = other.coeffs[-1]
        quot = [Fraction(0)] * max(len(rem) - dd, 0)
        for k in range(len(rem) - dd - 1, -1, -1):
            q = rem[k + dd] / lead
            quot[k] = q
            if q:
                for j, c in enumerate(other.coeffs):
                    rem[k + j] -= q * c
        return Polynomial(quot), Polynomial(rem[:dd] if dd > 0 else [])

    def rational_roots(self) -> list[Fraction]:
        """Distinct rational roots, sorted ascending.

        Raises :class:`NotRationalWall` when a quadratic factor has an
        irrational real root pair; higher irreducible factors are ignored
        only after the rational root test has been exhausted.
        """
        if self.is_zero():
            raise ExactNumError("zero polynomial has every number as a root")
        p = _squarefree(self)
        roots: list[Fraction] = []
        if p.coeffs and p.coeffs[0] == 0:
            roots.append(Fraction(0))
            p, _ = p.divmod(Polynomial.x())
        while p.degree() > 2:
            r = _find_rational_root(p)
            if r is None:
                break
            roots.append(r)
            p, _ = p.divmod(Polynomial.linear(-r, 1))
        if p.degree() == 1:
            roots.append(-p.coeffs[0] / p.coeffs[1])
        elif p.degree() == 2:
            c, b, a = p.coeffs
            disc = b * b - 4 * a * c
            if disc >= 0:
                s = _rational_sqrt(disc)
                if s is None:
                    raise NotRationalWall(f"irrational roots of {self}")
                roots.extend({(-b - s) / (2 * a), (-b + s) / (2 * a)})
        return sorted(set(roots))


def _gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    if a.is_zero():
        return a
    return a.scale(1 / a.coeffs[-1])


def _squarefree(p: Polynomial) -> Polynomial:
    g = _gcd(p, p.derivative())
    if g.degree() <= 0:
        return p
    return p.divmod(g)[0]


def _rational_sqrt(q: Fraction):
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small = [k for k in range(1, isqrt(n) + 1) if n % k == 0]
    return sorted(set(small + [n // k for k in small]))


def _find_rational_root(p: Polynomial):
    from math import lcm

    den = lcm(*(c.denominator for c in p.coeffs))
    ints = [int(c * den) for c in p.coeffs]
    for q in _divisors(ints[-1]):
        for r in _divisors(ints[0]):
            for cand in (Fraction(r, q), Fraction(-r, q)):
                if p(cand) == 0:
                    return cand
    return None


def poly_arith(lhs: Polynomial, rhs, op: str):
    """Dispatch for the ring operations: add, sub, mul, scale, eval."""
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        return lhs * rhs
    if op == "scale":
        return lhs.scale(rhs)
    if op == "eval":
        return lhs(rhs)
    raise ValueError(f"unknown polynomial operation {op!r}")


def poly_from_samples(points: Sequence[tuple[RatLike, RatLike]]) -> Polynomial:
    """Unique interpolating polynomial of degree < len(points).

    Newton divided differences, expanded into ascending coefficients.
    """
    if not points:
        raise ValueError("need at least one sample")
    xs = [to_rat(x) for x, _ in points]
    ys = [to_rat(y) for _, y in points]
    if len(set(xs)) != len(xs):
        raise DuplicateNode("interpolation nodes must be distinct")
    n = len(xs)
    table = list(ys)
    newton = [table[0]]
    for level in range(1, n):
        table = [
            (table[i + 1] - table[i]) / (xs[i + level] - xs[i])
            for i in range(n - level)
        ]
        newton.append(table[0])
    result = Polynomial.constant(newton[-1])
    for k in range(n - 2, -1, -1):
        result = result * Polynomial.linear(-xs[k], 1) + newton[k]
    return result


def definite_integral(p: Polynomial, a: RatLike, b: RatLike) -> Fraction:
    a, b = to_rat(a), to_rat(b)
    if a > b:
        raise InvalidInterval(f"lower limit {a} exceeds upper limit {b}")
    anti = p.antiderivative()
    return anti(b) - anti(a)


@dataclass(frozen=True)
class PiecewisePoly:
    """Polynomial pieces on closed intervals ``[b_i, b_{i+1}]``.

    At a shared breakpoint the left piece defines the value.
    """

    breakpoints: tuple[Fraction, ...]
    pieces: tuple[Polynomial, ...]
    continuous: bool = False

    def __post_init__(self):
        bps = tuple(to_rat(b) for b in self.breakpoints)
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "pieces", tuple(self.pieces))
        if len(bps) < 2:
            raise InvalidInterval("need at least two breakpoints")
        if any(b <= a for a, b in zip(bps, bps[1:])):
            raise InvalidInterval("breakpoints must be strictly increasing")
        if len(self.pieces) != len(bps) - 1:
            raise ValueError("pieces count must equal breakpoints count - 1")
        if self.continuous and not self.is_continuous():
            raise ValueError("pieces disagree at a shared breakpoint")

    @classmethod
    def zero(cls, lo: RatLike = 0, hi: RatLike = 1) -> "PiecewisePoly":
        return cls((to_rat(lo), to_rat(hi)), (Polynomial(),), continuous=True)

    def is_continuous(self) -> bool:
        return all(
            left(b) == right(b)
            for b, left, right in zip(self.breakpoints[1:-1], self.pieces, self.pieces[1:])
        )

    def discontinuities(self) -> list[Fraction]:
        return [
            b
            for b, left, right in zip(self.breakpoints[1:-1], self.pieces, self.pieces[1:])
            if left(b) != right(b)
        ]

    @property
    def domain(self) -> tuple[Fraction, Fraction]:
        return self.breakpoints[0], self.breakpoints[-1]

    def piece_index(self, x: RatLike) -> int:
        x = to_rat(x)
        lo, hi = self.domain
        if x < lo or x > hi:
            raise InvalidInterval(f"{x} outside [{lo}, {hi}]")
        for i, b in enumerate(self.breakpoints[1:]):
            if x <= b:
                return i
        return len(self.pieces) - 1

    def __call__(self, x: RatLike) -> Fraction:
        return self.pieces[self.piece_index(x)](x)

    def scale(self, c: RatLike) -> "PiecewisePoly":
        return PiecewisePoly(self.breakpoints, tuple(p.scale(c) for p in self.pieces), self.continuous)

    def integral(self) -> Fraction:
        return piecewise_definite_integral(self)


def piecewise_definite_integral(f: PiecewisePoly) -> Fraction:
    return sum(
        (definite_integral(p, a, b) for p, a, b in zip(f.pieces, f.breakpoints, f.breakpoints[1:])),
        Fraction(0),
    )


def merge_piecewise(a: PiecewisePoly, b: PiecewisePoly) -> PiecewisePoly:
    """Pointwise sum over the common refinement of two equal-domain functions."""
    if a.domain != b.domain:
        raise InvalidInterval("domains differ")
    bps = sorted(set(a.breakpoints) | set(b.breakpoints))
    pieces = []
    for lo, hi in zip(bps, bps[1:]):
        mid = (lo + hi) / 2
        pieces.append(a.pieces[a.piece_index(mid)] + b.pieces[b.piece_index(mid)])
    return PiecewisePoly(tuple(bps), tuple(pieces))
