"""Small exact linear-algebra kernels over Fractions and polynomials."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Sequence

from .poly import Polynomial


def det(matrix: Sequence[Sequence[Fraction]]) -> Fraction:
    """Determinant by Gaussian elimination with exact pivoting."""
    a = [[Fraction(x) for x in row] for row in matrix]
    n = len(a)
    sign = 1
    result = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            sign = -sign
        p = a[col][col]
        result *= p
        for r in range(col + 1, n):
            f = a[r][col]
            if f:
                f /= p
                row_r, row_c = a[r], a[col]
                for k in range(col + 1, n):
                    row_r[k] -= f * row_c[k]
    return sign * result


def poly_det(matrix: Sequence[Sequence[Polynomial]]) -> Polynomial:
    """Determinant of a square matrix of polynomials by memoized Laplace expansion."""
    n = len(matrix)
    nvars = matrix[0][0].nvars

    @lru_cache(maxsize=None)
    def minor(row: int, cols: frozenset) -> Polynomial:
        if row == n:
            return Polynomial.const(1, nvars)
        total = Polynomial.zero(nvars)
        sign = 1
        for c in sorted(cols):
            entry = matrix[row][c]
            if not entry.is_zero():
                sub = minor(row + 1, cols - {c})
                total = total + entry * sub if sign > 0 else total - entry * sub
            sign = -sign
        return total

    return minor(0, frozenset(range(n)))


def matmul(a, b):
    return [[sum((a[i][k] * b[k][j] for k in range(len(b))), Fraction(0)) for j in range(len(b[0]))]
            for i in range(len(a))]


def bareiss_det(matrix: Sequence[Sequence[int]]) -> int:
    """Fraction-free determinant of an integer matrix."""
    a = [list(row) for row in matrix]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        pivot = a[k][k]
        for i in range(k + 1, n):
            row_i, row_k, aik = a[i], a[k], a[i][k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - aik * row_k[j]) // prev
        prev = pivot
    return sign * a[n - 1][n - 1] if n else 1


def charpoly(matrix: Sequence[Sequence[Fraction]]) -> list[Fraction]:
    """Coefficients of det(x I - A), highest degree first.

    Denominators are cleared (``B = L A`` is integral), ``det(t I - B)`` is
    sampled at ``n + 1`` integers and interpolated, and the result is rescaled
    through ``det(x I - A) = det(L x I - B) / L^n``.
    """
    n = len(matrix)
    a = [[Fraction(x) for x in row] for row in matrix]
    L = 1
    for row in a:
        for x in row:
            L = L * x.denominator // gcd(L, x.denominator)
    b = [[int(x * L) for x in row] for row in a]
    ts = list(range(n + 1))
    ys = [Fraction(bareiss_det([[(t if i == j else 0) - b[i][j] for j in range(n)] for i in range(n)]))
          for t in ts]
    # Newton divided differences, then expand to monomial coefficients
    dd = ys[:]
    for k in range(1, n + 1):
        for i in range(n, k - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / (ts[i] - ts[i - k])
    poly = [Fraction(0)]  # lowest degree first
    for k in range(n, -1, -1):
        # poly = poly * (t - ts[k]) + dd[k]
        shifted = [Fraction(0)] + poly
        for i, c in enumerate(poly):
            shifted[i] -= ts[k] * c
        shifted[0] += dd[k]
        poly = shifted
    poly = poly[: n + 1]
    return [poly[k] / Fraction(L) ** (n - k) for k in range(n, -1, -1)]


def poly_mul_coeffs(p: list[Fraction], q: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def is_upper_triangular(m) -> bool:
    return all(m[i][j] == 0 for i in range(len(m)) for j in range(i))


def is_lower_triangular(m) -> bool:
    return all(m[i][j] == 0 for i in range(len(m)) for j in range(i + 1, len(m)))


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    """Exact row rank."""
    a = [[Fraction(x) for x in row] for row in rows]
    r = 0
    ncols = len(a[0]) if a else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c] / a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
    return r
