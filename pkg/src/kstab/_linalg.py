"""Exact linear algebra over the rationals.

Small dense routines on lists of ints/Fractions.  Sizes are tiny (rank <= 5),
so plain Gaussian elimination with Fractions is fast enough and never rounds.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Vector = tuple
Matrix = Sequence[Sequence]


def dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def primitive(v) -> tuple[int, ...]:
    """Scale a nonzero rational vector to the primitive integer vector on its ray."""
    v = [Fraction(x) for x in v]
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(x // g for x in ints)


def rref(rows: Matrix) -> tuple[list[list[Fraction]], list[int]]:
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    i = 0
    for j in range(ncols):
        p = next((k for k in range(i, len(m)) if m[k][j] != 0), None)
        if p is None:
            continue
        m[i], m[p] = m[p], m[i]
        piv = m[i][j]
        m[i] = [x / piv for x in m[i]]
        for k in range(len(m)):
            if k != i and m[k][j] != 0:
                f = m[k][j]
                m[k] = [a - f * b for a, b in zip(m[k], m[i])]
        pivots.append(j)
        i += 1
        if i == len(m):
            break
    return m[:i], pivots


def rank(rows: Matrix) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Matrix, ncols: int) -> list[list[Fraction]]:
    """Basis of {x : rows . x = 0}."""
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    r, piv = rref(rows)
    free = [j for j in range(ncols) if j not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(r, piv):
            x[p] = -row[f]
        basis.append(x)
    return basis


def solve(a: Matrix, b: Sequence) -> list[Fraction] | None:
    """Unique solution of a square system, or None when singular."""
    n = len(a)
    aug = [list(row) + [rhs] for row, rhs in zip(a, b)]
    r, piv = rref(aug)
    if len(piv) < n or (piv and piv[-1] == n):
        return None
    return [r[i][n] for i in range(n)]


def det(rows: Matrix) -> Fraction:
    m = [[Fraction(x) for x in r] for r in rows]
    n = len(m)
    result = Fraction(1)
    for j in range(n):
        p = next((k for k in range(j, n) if m[k][j] != 0), None)
        if p is None:
            return Fraction(0)
        if p != j:
            m[j], m[p] = m[p], m[j]
            result = -result
        piv = m[j][j]
        result *= piv
        for k in range(j + 1, n):
            if m[k][j] != 0:
                f = m[k][j] / piv
                m[k] = [a - f * b for a, b in zip(m[k], m[j])]
    return result


def int_det(rows: Matrix) -> int:
    """Bareiss fraction-free determinant of an integer matrix."""
    m = [list(map(int, r)) for r in rows]
    n = len(m)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            p = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if p is None:
                return 0
            m[k], m[p] = m[p], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def affine_rank(points: Sequence[Sequence]) -> int:
    """Dimension of the affine hull of a nonempty point set."""
    pts = list(points)
    if not pts:
        return -1
    p0 = pts[0]
    return rank([[a - b for a, b in zip(p, p0)] for p in pts[1:]]) if len(pts) > 1 else 0
