"""Exact ordered-field scalars.

Two fields are supported:

* ``Rat`` -- the rationals, backed by :class:`fractions.Fraction`.
* :class:`QuadRat` -- the quadratic extension ``a + b*sqrt(2)`` with rational
  ``a`` and ``b``.  Comparison is decided exactly by sign analysis.

Mixed arithmetic promotes ``int``/``Fraction`` operands to ``QuadRat``.  Values
are immutable and hashable; a ``QuadRat`` with zero radical part hashes and
compares like the corresponding rational.
"""

from __future__ import annotations

import decimal
import re
from fractions import Fraction
from numbers import Rational
from typing import Union

Rat = Fraction

__all__ = [
    "Rat",
    "QuadRat",
    "Scalar",
    "SQRT2",
    "sqrt2",
    "sign",
    "compare",
    "to_scalar",
    "format_scalar",
    "parse_scalar",
    "to_decimal",
    "to_float",
    "is_quadratic",
    "Lex",
]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    raise TypeError(f"not a rational: {x!r}")


class QuadRat:
    """The number ``rational + radical*sqrt(2)`` with rational coefficients."""

    __slots__ = ("_a", "_b")

    def __init__(self, rational=0, radical=0):
        self._a = _frac(rational)
        self._b = _frac(radical)

    @property
    def rational(self) -> Fraction:
        return self._a

    @property
    def radical(self) -> Fraction:
        return self._b

    # -- helpers -----------------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, QuadRat):
            return other
        if isinstance(other, (int, Fraction)):
            return QuadRat(other, 0)
        if isinstance(other, Rational):
            return QuadRat(_frac(other), 0)
        return None

    def sign(self) -> int:
        a, b = self._a, self._b
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return (b > 0) - (b < 0)
        if (a > 0) == (b > 0):
            return 1 if a > 0 else -1
        # opposite signs: the term with the larger square wins
        a2, b2 = a * a, 2 * b * b
        if a2 > b2:
            return 1 if a > 0 else -1
        return 1 if b > 0 else -1

    def conjugate(self) -> QuadRat:
        return QuadRat(self._a, -self._b)

    def norm(self) -> Fraction:
        return self._a * self._a - 2 * self._b * self._b

    def is_rational(self) -> bool:
        return self._b == 0

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadRat(self._a + o._a, self._b + o._b)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadRat(self._a - o._a, self._b - o._b)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadRat(o._a - self._a, o._b - self._b)

    def __neg__(self):
        return QuadRat(-self._a, -self._b)

    def __pos__(self):
        return self

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QuadRat(self._a * other, self._b * other)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b, c, d = self._a, self._b, o._a, o._b
        return QuadRat(a * c + 2 * b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("QuadRat division by zero")
            return QuadRat(self._a / other, self._b / other)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = o.norm()
        if n == 0:
            # norm vanishes only at zero since sqrt(2) is irrational
            raise ZeroDivisionError("QuadRat division by zero")
        num = self * o.conjugate()
        return QuadRat(num._a / n, num._b / n)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return (QuadRat(1) / self) ** (-k)
        result, base = QuadRat(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparison --------------------------------------------------------

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._a == o._a and self._b == o._b

    def __hash__(self):
        if self._b == 0:
            return hash(self._a)
        return hash((self._a, self._b))

    def _cmp(self, other):
        o = self._coerce(other)
        if o is None:
            return None
        return (self - o).sign()

    def __lt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c >= 0

    def __bool__(self):
        return self._a != 0 or self._b != 0

    def __float__(self):
        return float(self._a) + float(self._b) * 2.0 ** 0.5

    def __repr__(self):
        return f"QuadRat({self._a}, {self._b})"

    def __str__(self):
        return format_scalar(self)


Scalar = Union[Fraction, QuadRat]

SQRT2 = QuadRat(0, 1)


def sqrt2(approx: Fraction | None = None) -> Scalar:
    """Return sqrt(2) exactly, or the given rational stand-in for it."""
    return SQRT2 if approx is None else _frac(approx)


def is_quadratic(x) -> bool:
    return isinstance(x, QuadRat) and x.radical != 0


def sign(x) -> int:
    if isinstance(x, QuadRat):
        return x.sign()
    return (x > 0) - (x < 0)


def compare(x, y) -> str:
    """Total order on scalars: ``'less'``, ``'equal'`` or ``'greater'``."""
    s = sign(x - y)
    return "less" if s < 0 else ("greater" if s > 0 else "equal")


def to_scalar(x) -> Scalar:
    """Coerce ints, fractions, strings and QuadRats into a field element."""
    if isinstance(x, (QuadRat, Fraction)):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_scalar(x)
    if isinstance(x, float):
        raise TypeError("floats are not exact scalars; pass a string or Fraction")
    return _frac(x)


def _fmt_rat(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def format_scalar(x) -> str:
    """Serialize: ``"n/d"`` for rationals, ``"n/d + n/d*sqrt2"`` otherwise."""
    if isinstance(x, QuadRat):
        if x.radical == 0:
            return _fmt_rat(x.rational)
        return f"{_fmt_rat(x.rational)} + {_fmt_rat(x.radical)}*sqrt2"
    return _fmt_rat(_frac(x))


_RAT = r"[+-]?\s*\d+(?:\.\d+)?(?:\s*/\s*\d+)?"
_QUAD_RE = re.compile(
    rf"^\s*(?P<a>{_RAT})?\s*(?:(?P<op>[+-])\s*(?P<b>{_RAT})?\s*\*?\s*sqrt\(?2\)?)?\s*$"
)


def _parse_rat(s: str) -> Fraction:
    return Fraction(s.replace(" ", ""))


def parse_scalar(text: str) -> Scalar:
    """Inverse of :func:`format_scalar`; also accepts ``"3/4"``, ``"0.25"``,
    ``"1 - 1/2*sqrt2"`` and ``"sqrt2"``."""
    s = text.strip()
    if not s:
        raise ValueError("empty scalar")
    if re.fullmatch(r"[+-]?\s*sqrt\(?2\)?", s):
        return -SQRT2 if s.startswith("-") else SQRT2
    if "sqrt" not in s:
        try:
            return _parse_rat(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"malformed scalar {text!r}") from exc
    m = _QUAD_RE.match(s)
    if not m or m.group("op") is None:
        raise ValueError(f"malformed scalar {text!r}")
    a = _parse_rat(m.group("a")) if m.group("a") else Fraction(0)
    b = _parse_rat(m.group("b")) if m.group("b") else Fraction(1)
    if m.group("op") == "-":
        b = -b
    return QuadRat(a, b)


def to_decimal(x, digits: int = 12) -> str:
    """Fixed-point rendering rounded to ``digits`` places after the point."""
    ctx = decimal.Context(prec=digits + 30)
    if isinstance(x, QuadRat):
        a, b = x.rational, x.radical
        val = ctx.divide(decimal.Decimal(a.numerator), decimal.Decimal(a.denominator))
        if b:
            r = ctx.sqrt(decimal.Decimal(2))
            r = ctx.multiply(r, ctx.divide(decimal.Decimal(b.numerator), decimal.Decimal(b.denominator)))
            val = ctx.add(val, r)
    else:
        q = _frac(x)
        val = ctx.divide(decimal.Decimal(q.numerator), decimal.Decimal(q.denominator))
    quant = decimal.Decimal(1).scaleb(-digits)
    out = val.quantize(quant, context=ctx)
    if out == 0:
        out = abs(out)
    return f"{out:f}"


def to_float(x) -> float:
    return float(x)


class Lex:
    """``real + inf*delta`` for a positive infinitesimal ``delta``.

    Ordered lexicographically.  Only the vector-space operations are
    provided (addition and scaling by field elements), which is all a
    simplex needs to carry a symbolic right-hand side.
    """

    __slots__ = ("real", "inf")

    def __init__(self, real=0, inf=0):
        self.real = real if isinstance(real, (Fraction, QuadRat)) else Fraction(real)
        self.inf = inf if isinstance(inf, (Fraction, QuadRat)) else Fraction(inf)

    @staticmethod
    def _lift(x):
        if isinstance(x, Lex):
            return x
        if isinstance(x, (int, Fraction, QuadRat)):
            return Lex(x, 0)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return Lex(self.real + o.real, self.inf + o.inf)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return Lex(self.real - o.real, self.inf - o.inf)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return Lex(o.real - self.real, o.inf - self.inf)

    def __neg__(self):
        return Lex(-self.real, -self.inf)

    def __mul__(self, k):
        if isinstance(k, Lex):
            if k.inf:
                raise TypeError("product of two infinitesimal values")
            k = k.real
        if not isinstance(k, (int, Fraction, QuadRat)):
            return NotImplemented
        return Lex(self.real * k, self.inf * k)

    __rmul__ = __mul__

    def __truediv__(self, k):
        if not isinstance(k, (int, Fraction, QuadRat)):
            return NotImplemented
        return Lex(self.real / k, self.inf / k)

    def _key(self, other):
        o = self._lift(other)
        if o is None:
            return None
        d = sign(self.real - o.real)
        return d if d else sign(self.inf - o.inf)

    def __eq__(self, other):
        c = self._key(other)
        return NotImplemented if c is None else c == 0

    def __lt__(self, other):
        c = self._key(other)
        return NotImplemented if c is None else c < 0

    def __le__(self, other):
        c = self._key(other)
        return NotImplemented if c is None else c <= 0

    def __gt__(self, other):
        c = self._key(other)
        return NotImplemented if c is None else c > 0

    def __ge__(self, other):
        c = self._key(other)
        return NotImplemented if c is None else c >= 0

    def __hash__(self):
        return hash(self.real) if not self.inf else hash((self.real, self.inf))

    def __bool__(self):
        return bool(self.real) or bool(self.inf)

    def __repr__(self):
        return f"Lex({self.real}, {self.inf})"
