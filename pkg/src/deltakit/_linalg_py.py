"""Pure-Python exact linear algebra kernels.

Reference implementation; ``_linalg_ext`` (Cython) must agree with it
bit-for-bit.  Matrices are sequences of rows of Fractions.  Integer work is
fraction-free (Bareiss), so intermediate values stay integral.
"""

from fractions import Fraction
from math import lcm


def _integer_rows(matrix, extra=None):
    """Scale to a common denominator; returns (int rows, denominator)."""
    den = 1
    for row in matrix:
        for x in row:
            den = lcm(den, x.denominator)
    if extra is not None:
        for x in extra:
            den = lcm(den, x.denominator)
    rows = [[x.numerator * (den // x.denominator) for x in row] for row in matrix]
    if extra is not None:
        for row, x in zip(rows, extra):
            row.append(x.numerator * (den // x.denominator))
    return rows, den


def leading_minors(matrix):
    """Leading principal minors ``[det(A[:1,:1]), ..., det(A)]``.

    Bareiss elimination without pivoting.  A vanishing pivot (never the case
    for definite matrices) falls back to one determinant per minor.
    """
    n = len(matrix)
    if n == 0:
        return []
    a, den = _integer_rows(matrix)
    minors = []
    prev = 1
    for k in range(n):
        pivot = a[k][k]
        minors.append(Fraction(pivot, den ** (k + 1)))
        if pivot == 0:
            return _minors_slow(matrix)
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i = a[i]
            row_k = a[k]
            for j in range(k + 1, n):
                row_i[j] = (pivot * row_i[j] - aik * row_k[j]) // prev
        prev = pivot
    return minors


def _minors_slow(matrix):
    return [determinant([row[: k + 1] for row in matrix[: k + 1]]) for k in range(len(matrix))]


def determinant(matrix):
    n = len(matrix)
    if n == 0:
        return Fraction(1)
    a, den = _integer_rows(matrix)
    sign = 1
    prev = 1
    for k in range(n):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        pivot = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            for j in range(k + 1, n):
                a[i][j] = (pivot * a[i][j] - aik * a[k][j]) // prev
        prev = pivot
    return Fraction(sign * a[n - 1][n - 1], den**n)


def solve(matrix, rhs):
    """Solve ``A x = b`` exactly for square nonsingular ``A``.

    Raises ZeroDivisionError on a singular system.
    """
    n = len(matrix)
    if n == 0:
        return []
    a, _ = _integer_rows(matrix, rhs)
    prev = 1
    for k in range(n):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    break
            else:
                raise ZeroDivisionError("singular system")
        pivot = a[k][k]
        row_k = a[k]
        for i in range(k + 1, n):
            row_i = a[i]
            aik = row_i[k]
            for j in range(k + 1, n + 1):
                row_i[j] = (pivot * row_i[j] - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        acc = Fraction(a[i][n])
        for j in range(i + 1, n):
            acc -= a[i][j] * x[j]
        x[i] = acc / a[i][i]
    return x


def symmetric_diagonal(matrix):
    """Diagonal of a congruent diagonal form (exact symmetric reduction).

    The multiset of signs of the result is the signature of ``matrix``.
    """
    n = len(matrix)
    a = [[Fraction(x) for x in row] for row in matrix]
    diag = []
    remaining = list(range(n))
    while remaining:
        k = next((i for i in remaining if a[i][i] != 0), None)
        if k is None:
            pair = next(
                ((i, j) for i in remaining for j in remaining if i < j and a[i][j] != 0),
                None,
            )
            if pair is None:
                diag.extend(Fraction(0) for _ in remaining)
                break
            i, j = pair
            # replace e_i by e_i + e_j so the diagonal entry becomes nonzero
            for t in range(n):
                a[i][t] += a[j][t]
            for t in range(n):
                a[t][i] += a[t][j]
            k = i
        pivot = a[k][k]
        diag.append(pivot)
        remaining.remove(k)
        for i in remaining:
            f = a[i][k] / pivot
            if f:
                for j in remaining:
                    a[i][j] -= f * a[k][j]
        for i in remaining:
            a[i][k] = a[k][i] = Fraction(0)
    return diag


def bilinear(form, a, b):
    """``a^T M b`` for a symmetric matrix ``M`` and coefficient vectors."""
    total = Fraction(0)
    for i, ai in enumerate(a):
        if ai:
            row = form[i]
            s = 0
            for j, bj in enumerate(b):
                if bj:
                    s += row[j] * bj
            total += ai * s
    return total
