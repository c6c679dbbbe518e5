# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled exact linear algebra kernels.

Same algorithms and results as ``deltakit._linalg_py``; only the loops are
compiled.  Entries stay arbitrary-precision Python integers, so nothing is
ever rounded.
"""

from fractions import Fraction
from math import lcm


cdef tuple _integer_rows(matrix, extra=None):
    cdef object den = 1
    for row in matrix:
        for x in row:
            den = lcm(den, x.denominator)
    if extra is not None:
        for x in extra:
            den = lcm(den, x.denominator)
    cdef list rows = [[x.numerator * (den // x.denominator) for x in row] for row in matrix]
    if extra is not None:
        for row, x in zip(rows, extra):
            row.append(x.numerator * (den // x.denominator))
    return rows, den


def leading_minors(matrix):
    cdef Py_ssize_t n = len(matrix), i, j, k
    if n == 0:
        return []
    rows, den = _integer_rows(matrix)
    cdef list a = rows
    cdef list minors = []
    cdef list row_i, row_k
    cdef object prev = 1, pivot, aik
    for k in range(n):
        pivot = a[k][k]
        minors.append(Fraction(pivot, den ** (k + 1)))
        if pivot == 0:
            return [determinant([r[: m + 1] for r in matrix[: m + 1]]) for m in range(n)]
        row_k = a[k]
        for i in range(k + 1, n):
            row_i = a[i]
            aik = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (pivot * row_i[j] - aik * row_k[j]) // prev
        prev = pivot
    return minors


def determinant(matrix):
    cdef Py_ssize_t n = len(matrix), i, j, k
    if n == 0:
        return Fraction(1)
    rows, den = _integer_rows(matrix)
    cdef list a = rows
    cdef int sign = 1
    cdef object prev = 1, pivot, aik
    cdef list row_i, row_k
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
        row_k = a[k]
        for i in range(k + 1, n):
            row_i = a[i]
            aik = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (pivot * row_i[j] - aik * row_k[j]) // prev
        prev = pivot
    return Fraction(sign * a[n - 1][n - 1], den ** n)


def solve(matrix, rhs):
    cdef Py_ssize_t n = len(matrix), i, j, k
    if n == 0:
        return []
    rows, _ = _integer_rows(matrix, rhs)
    cdef list a = rows
    cdef object prev = 1, pivot, aik
    cdef list row_i, row_k
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
    cdef list x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        acc = Fraction(a[i][n])
        for j in range(i + 1, n):
            acc -= a[i][j] * x[j]
        x[i] = acc / a[i][i]
    return x


def bilinear(form, a, b):
    """``a^T M b`` computed on integer numerators over one common denominator."""
    cdef Py_ssize_t n = len(a), i, j
    cdef object da = 1, db = 1, df = 1, total = 0, s
    for x in a:
        da = lcm(da, x.denominator)
    for x in b:
        db = lcm(db, x.denominator)
    for row in form:
        for x in row:
            df = lcm(df, x.denominator)
    cdef list ia = [x.numerator * (da // x.denominator) for x in a]
    cdef list ib = [x.numerator * (db // x.denominator) for x in b]
    cdef list row_i
    for i in range(n):
        if not ia[i]:
            continue
        row = form[i]
        s = 0
        for j in range(n):
            if ib[j]:
                s += row[j].numerator * (df // row[j].denominator) * ib[j]
        total += ia[i] * s
    return Fraction(total, da * db * df)
