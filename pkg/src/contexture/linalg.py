"""Exact dense linear algebra over any ordered field (Fraction or QuadRat).

Matrices are lists of row lists.  Nothing here rounds.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from .scalar import QuadRat


def is_rational_vector(v) -> bool:
    return all(not isinstance(x, QuadRat) or x.radical == 0 for x in v)


def as_fraction(x) -> Fraction:
    if isinstance(x, QuadRat):
        if x.radical != 0:
            raise ValueError("irrational value")
        return x.rational
    return Fraction(x)


def rref(rows: Sequence[Sequence], ncols: int | None = None):
    """Reduced row echelon form.  Returns ``(matrix, pivot_columns)``.

    Only the first ``ncols`` columns are used for pivoting; remaining columns
    (e.g. an augmented right-hand side) are carried along.
    """
    m = [[Fraction(x) if isinstance(x, int) else x for x in r] for r in rows]
    if not m:
        return [], []
    width = len(m[0])
    ncols = width if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= len(m):
            break
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        row = [x / piv for x in m[r]]
        m[r] = row
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                mi = m[i]
                m[i] = [a - f * b for a, b in zip(mi, row)]
        pivots.append(c)
        r += 1
    return m[:r] + [row for row in m[r:] if any(x != 0 for x in row)], pivots


def rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int):
    """Basis of ``{x : rows @ x = 0}`` as a list of vectors."""
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    red, piv = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, pc in enumerate(piv):
            v[pc] = -red[i][f]
        basis.append(v)
    return basis


def solve(a: Sequence[Sequence], b: Sequence):
    """Solve a square nonsingular system exactly."""
    n = len(a)
    aug = [list(a[i]) + [b[i]] for i in range(n)]
    red, piv = rref(aug, n)
    if len(piv) < n:
        raise ZeroDivisionError("singular system")
    return [red[i][n] for i in range(n)]


def inverse(a: Sequence[Sequence]):
    n = len(a)
    aug = [list(a[i]) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    red, piv = rref(aug, n)
    if len(piv) < n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red[:n]]


def det_int(m: list[list[int]]) -> int:
    """Bareiss fraction-free determinant of an integer matrix."""
    a = [row[:] for row in m]
    n = len(a)
    if n == 0:
        return 1
    s = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            p = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if p is None:
                return 0
            a[k], a[p] = a[p], a[k]
            s = -s
        akk = a[k][k]
        rk = a[k]
        for i in range(k + 1, n):
            ai = a[i]
            aik = ai[k]
            for j in range(k + 1, n):
                ai[j] = (ai[j] * akk - aik * rk[j]) // prev
        prev = akk
    return s * a[n - 1][n - 1]


def _zmul(x, y):
    return (x[0] * y[0] + 2 * x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def _zdiv(x, y):
    """Exact quotient in Z[sqrt2]."""
    c, d = y
    n = c * c - 2 * d * d
    a = x[0] * c - 2 * x[1] * d
    b = x[1] * c - x[0] * d
    return (a // n, b // n)


def det_zsqrt2(m: list[list[tuple]]) -> tuple:
    """Bareiss determinant of a matrix over Z[sqrt2]; entries and result
    are pairs ``(a, b)`` standing for ``a + b*sqrt2``."""
    a = [row[:] for row in m]
    n = len(a)
    if n == 0:
        return (1, 0)
    s = 1
    prev = (1, 0)
    for k in range(n - 1):
        if a[k][k] == (0, 0):
            p = next((i for i in range(k + 1, n) if a[i][k] != (0, 0)), None)
            if p is None:
                return (0, 0)
            a[k], a[p] = a[p], a[k]
            s = -s
        akk = a[k][k]
        rk = a[k]
        for i in range(k + 1, n):
            ai = a[i]
            aik = ai[k]
            for j in range(k + 1, n):
                u = _zmul(ai[j], akk)
                v = _zmul(aik, rk[j])
                ai[j] = _zdiv((u[0] - v[0], u[1] - v[1]), prev)
        prev = akk
    r = a[n - 1][n - 1]
    return (s * r[0], s * r[1])


def det(m: Sequence[Sequence]):
    """Determinant over the field of the entries (Gaussian elimination)."""
    a = [[Fraction(x) if isinstance(x, int) else x for x in r] for r in m]
    n = len(a)
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            d = -d
        piv = a[c][c]
        d = d * piv
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c] / piv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return d


def integer_scale(v: Sequence) -> list[int] | None:
    """Positive multiple of a rational vector that is a primitive integer
    vector; ``None`` if any entry is irrational."""
    if not is_rational_vector(v):
        return None
    fr = [as_fraction(x) for x in v]
    den = 1
    for x in fr:
        den = lcm(den, x.denominator)
    ints = [x.numerator * (den // x.denominator) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g > 1:
        ints = [x // g for x in ints]
    return ints


def normalize_positive(v: Sequence):
    """Canonical positive rescaling of a vector: primitive integers when
    rational, otherwise first nonzero entry of absolute value one."""
    ints = integer_scale(v)
    if ints is not None:
        return [Fraction(x) for x in ints]
    lead = next(x for x in v if x != 0)
    lead = abs(lead)
    return [x / lead for x in v]


def dot(a, b):
    s = 0
    for x, y in zip(a, b):
        if x and y:
            s = s + x * y
    return s
