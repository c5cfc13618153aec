"""Polytope representations: inequalities/equations, vertices, unions.

All containers are immutable.  ``canonical()`` produces the normal form used
for equality tests and golden files:

* equations in reduced row echelon form, each row rescaled to primitive
  integers (or leading coefficient 1 when irrational);
* inequalities with the equation pivot variables substituted out, rescaled
  positively to primitive integers including the right-hand side (or leading
  coefficient of absolute value 1 when irrational), duplicates removed;
* both lists sorted lexicographically by coefficient vector.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .. import linalg
from ..scalar import QuadRat, format_scalar, parse_scalar, to_scalar

__all__ = [
    "InfeasibleRegion",
    "UnboundedRegion",
    "Inequality",
    "Equation",
    "HRep",
    "VRep",
    "RegionSet",
]


class InfeasibleRegion(ValueError):
    """The constraint system has no solution."""


class UnboundedRegion(ValueError):
    """The region is not bounded."""


def _vec(v) -> tuple:
    return tuple(to_scalar(x) for x in v)


def _sort_key_scalar(x):
    if isinstance(x, QuadRat):
        return (x.rational, x.radical)
    return (x, Fraction(0))


def _scale_row(coeffs, rhs):
    """Positive rescaling of ``(coeffs, rhs)`` into canonical form."""
    full = list(coeffs) + [rhs]
    ints = linalg.integer_scale(full)
    if ints is not None:
        if not any(ints):
            return tuple(Fraction(0) for _ in coeffs), Fraction(0)
        return tuple(Fraction(x) for x in ints[:-1]), Fraction(ints[-1])
    lead = next((x for x in coeffs if x != 0), rhs)
    lead = abs(lead)
    return tuple(x / lead for x in coeffs), rhs / lead


@dataclass(frozen=True)
class Inequality:
    """``coeffs . x <= rhs`` (or ``<`` when ``strict``)."""

    coeffs: tuple
    rhs: object
    strict: bool = False

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _vec(self.coeffs))
        object.__setattr__(self, "rhs", to_scalar(self.rhs))

    def value(self, x):
        return linalg.dot(self.coeffs, x)

    def holds(self, x) -> bool:
        v = self.value(x)
        return v < self.rhs if self.strict else v <= self.rhs

    def negated(self) -> "Inequality":
        """The complementary halfspace."""
        return Inequality(tuple(-a for a in self.coeffs), -self.rhs, not self.strict)

    def normalized(self) -> "Inequality":
        c, b = _scale_row(self.coeffs, self.rhs)
        return Inequality(c, b, self.strict)

    def to_json(self) -> dict:
        return {
            "coeffs": [format_scalar(x) for x in self.coeffs],
            "rhs": format_scalar(self.rhs),
            "strict": self.strict,
        }

    @classmethod
    def from_json(cls, d) -> "Inequality":
        return cls(tuple(parse_scalar(x) for x in d["coeffs"]), parse_scalar(d["rhs"]), bool(d.get("strict", False)))


@dataclass(frozen=True)
class Equation:
    """``coeffs . x == rhs``."""

    coeffs: tuple
    rhs: object

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _vec(self.coeffs))
        object.__setattr__(self, "rhs", to_scalar(self.rhs))

    def holds(self, x) -> bool:
        return linalg.dot(self.coeffs, x) == self.rhs

    def to_json(self) -> dict:
        return {"coeffs": [format_scalar(x) for x in self.coeffs], "rhs": format_scalar(self.rhs)}

    @classmethod
    def from_json(cls, d) -> "Equation":
        return cls(tuple(parse_scalar(x) for x in d["coeffs"]), parse_scalar(d["rhs"]))


@dataclass(frozen=True)
class HRep:
    """``{x in R^dim : inequalities, equations}``."""

    dim: int
    inequalities: tuple = ()
    equations: tuple = ()

    def __post_init__(self):
        ineqs = tuple(self.inequalities)
        eqs = tuple(self.equations)
        for c in ineqs + eqs:
            if len(c.coeffs) != self.dim:
                raise ValueError(f"constraint of length {len(c.coeffs)} in dimension {self.dim}")
        object.__setattr__(self, "inequalities", ineqs)
        object.__setattr__(self, "equations", eqs)

    # -- construction helpers ------------------------------------------------

    @classmethod
    def from_rows(cls, A, b, E=(), e=(), strict=None) -> "HRep":
        """``A x <= b``, ``E x = e``; ``strict`` optionally flags rows of ``A``."""
        A = list(A)
        dim = len(A[0]) if A else (len(E[0]) if E else 0)
        flags = list(strict) if strict is not None else [False] * len(A)
        return cls(
            dim,
            tuple(Inequality(a, bi, s) for a, bi, s in zip(A, b, flags)),
            tuple(Equation(a, ei) for a, ei in zip(E, e)),
        )

    @classmethod
    def box(cls, lower: Sequence, upper: Sequence) -> "HRep":
        d = len(lower)
        rows = []
        for i in range(d):
            unit = [0] * d
            unit[i] = 1
            rows.append(Inequality(unit, upper[i]))
            rows.append(Inequality([-x for x in unit], -to_scalar(lower[i])))
        return cls(d, tuple(rows))

    @classmethod
    def cube(cls, d: int, side=Fraction(1, 2)) -> "HRep":
        return cls.box([0] * d, [side] * d)

    # -- queries ------------------------------------------------------------

    @property
    def has_strict(self) -> bool:
        return any(iq.strict for iq in self.inequalities)

    def contains(self, x) -> bool:
        x = _vec(x)
        return all(e.holds(x) for e in self.equations) and all(i.holds(x) for i in self.inequalities)

    def closure(self) -> "HRep":
        if not self.has_strict:
            return self
        return HRep(self.dim, tuple(Inequality(i.coeffs, i.rhs) for i in self.inequalities), self.equations)

    def intersect(self, other: "HRep") -> "HRep":
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        return HRep(self.dim, self.inequalities + other.inequalities, self.equations + other.equations)

    def with_constraints(self, inequalities: Iterable = (), equations: Iterable = ()) -> "HRep":
        return HRep(self.dim, self.inequalities + tuple(inequalities), self.equations + tuple(equations))

    def matrices(self):
        A = [i.coeffs for i in self.inequalities]
        b = [i.rhs for i in self.inequalities]
        E = [e.coeffs for e in self.equations]
        e = [e.rhs for e in self.equations]
        return A, b, E, e

    def substitute(self, affine_map, new_dim: int) -> "HRep":
        """Pull back along ``x = M u + c`` given as ``(M, c)`` with ``M`` of
        shape ``dim x new_dim``."""
        M, c = affine_map
        cols = [[M[r][j] for r in range(self.dim)] for j in range(new_dim)]

        def pull(coeffs, rhs):
            return [linalg.dot(coeffs, col) for col in cols], rhs - linalg.dot(coeffs, c)

        ineqs = []
        for iq in self.inequalities:
            a, r = pull(iq.coeffs, iq.rhs)
            ineqs.append(Inequality(a, r, iq.strict))
        eqs = []
        for eq in self.equations:
            a, r = pull(eq.coeffs, eq.rhs)
            eqs.append(Equation(a, r))
        return HRep(new_dim, tuple(ineqs), tuple(eqs))

    # -- canonical form -----------------------------------------------------

    def canonical(self) -> "HRep":
        d = self.dim
        eq_rows = []
        pivots = []
        if self.equations:
            red, pivots = linalg.rref([list(e.coeffs) + [e.rhs] for e in self.equations], d)
            if len(red) > len(pivots):
                raise InfeasibleRegion("inconsistent equations")
            eq_rows = red
        eqs = []
        for row in eq_rows:
            c, r = _scale_row(row[:d], row[d])
            eqs.append(Equation(c, r))
        seen = {}
        for iq in self.inequalities:
            a = list(iq.coeffs)
            b = iq.rhs
            for row, pc in zip(eq_rows, pivots):
                f = a[pc]
                if f:
                    a = [x - f * y for x, y in zip(a, row[:d])]
                    b = b - f * row[d]
            c, r = _scale_row(a, b)
            key = (c, r)
            seen[key] = seen.get(key, False) or iq.strict
        ineqs = [Inequality(c, r, s) for (c, r), s in seen.items()]
        ineqs.sort(key=lambda i: (tuple(map(_sort_key_scalar, i.coeffs)), _sort_key_scalar(i.rhs), i.strict))
        eqs.sort(key=lambda e: (tuple(map(_sort_key_scalar, e.coeffs)), _sort_key_scalar(e.rhs)))
        return HRep(d, tuple(ineqs), tuple(eqs))

    def same_form(self, other: "HRep") -> bool:
        """Syntactic equality of canonical forms."""
        return self.canonical() == other.canonical()

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "schema": "contexture/1",
            "kind": "hrep",
            "dim": self.dim,
            "inequalities": [i.to_json() for i in self.inequalities],
            "equations": [e.to_json() for e in self.equations],
        }

    @classmethod
    def from_json(cls, d) -> "HRep":
        if d.get("kind", "hrep") != "hrep":
            raise ValueError(f"expected an hrep, got {d.get('kind')!r}")
        return cls(
            int(d["dim"]),
            tuple(Inequality.from_json(x) for x in d.get("inequalities", ())),
            tuple(Equation.from_json(x) for x in d.get("equations", ())),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)


@dataclass(frozen=True)
class VRep:
    """Convex hull of finitely many points."""

    points: tuple

    def __post_init__(self):
        pts = tuple(_vec(p) for p in self.points)
        if not pts:
            raise ValueError("a V-representation needs at least one point")
        d = len(pts[0])
        if any(len(p) != d for p in pts):
            raise ValueError("points of different dimensions")
        object.__setattr__(self, "points", pts)

    @property
    def dim(self) -> int:
        return len(self.points[0])

    def canonical(self) -> "VRep":
        pts = sorted(set(self.points), key=lambda p: tuple(map(_sort_key_scalar, p)))
        return VRep(tuple(pts))

    def to_json(self) -> dict:
        return {
            "schema": "contexture/1",
            "kind": "vrep",
            "dim": self.dim,
            "points": [[format_scalar(x) for x in p] for p in self.points],
        }

    @classmethod
    def from_json(cls, d) -> "VRep":
        return cls(tuple(tuple(parse_scalar(x) for x in p) for p in d["points"]))


@dataclass(frozen=True)
class RegionSet:
    """Finite union of H-represented regions (parts need not be disjoint
    unless produced by an operation that says so)."""

    dim: int
    parts: tuple = ()
    disjoint: bool = field(default=False, compare=False)

    def __post_init__(self):
        parts = tuple(self.parts)
        for p in parts:
            if p.dim != self.dim:
                raise ValueError("parts of different dimensions")
        object.__setattr__(self, "parts", parts)

    @property
    def is_empty_syntactically(self) -> bool:
        return not self.parts

    def contains(self, x) -> bool:
        return any(p.contains(x) for p in self.parts)

    def canonical(self) -> "RegionSet":
        uniq = {}
        for p in self.parts:
            c = p.canonical()
            uniq.setdefault(json.dumps(c.to_json(), sort_keys=True), c)
        keys = sorted(uniq)
        return RegionSet(self.dim, tuple(uniq[k] for k in keys), self.disjoint)

    def to_json(self) -> dict:
        return {
            "schema": "contexture/1",
            "kind": "region_set",
            "dim": self.dim,
            "disjoint": self.disjoint,
            "parts": [p.to_json() for p in self.parts],
        }

    @classmethod
    def from_json(cls, d) -> "RegionSet":
        return cls(int(d["dim"]), tuple(HRep.from_json(p) for p in d["parts"]), bool(d.get("disjoint", False)))
