"""The 2x2 binary input/output system.

Inputs ``alpha`` and ``beta`` take two levels each; outputs ``A`` and ``B`` are
``+1``/``-1``.  For every treatment ``(alpha_i, beta_j)`` the joint
distribution of ``(A_ij, B_ij)`` is an :class:`OutcomeTable`::

             B=+1   B=-1
    A=+1      p      q
    A=-1      r      s

In the homogeneous case (all marginals 1/2) the whole system is summarized
by ``p = (p11, p12, p21, p22)`` with ``p_ij = Pr[A_ij = +1, B_ij = +1]``.
Connections between outputs recorded at different levels of the other input
are summarized by ``eps``, whose entries are probabilities of *both* coupled
variables being ``+1``; the identity coupling is ``eps = 1/2``.

All predicates here are exact.  Anything involving sqrt(2) runs in
:class:`~contexture.scalar.QuadRat` arithmetic unless a rational stand-in is
passed explicitly.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .scalar import QuadRat, format_scalar, parse_scalar, sqrt2, to_scalar

__all__ = [
    "ProbabilityError",
    "OutcomeTable",
    "FactorialSystem",
    "PVector",
    "EVector",
    "SSplit",
    "ConstraintKind",
    "TREATMENTS",
    "SIGN_PATTERNS",
    "marginal_selectivity",
    "expectations",
    "chsh_combinations",
    "chsh_general",
    "s_split",
    "bell_combinations",
    "bell_chsh",
    "cirelson",
    "chaos",
    "elfp_value",
    "elfp_member",
    "gamma",
    "lambda_",
    "gamma_lambda_system",
    "closed_form_predicate",
    "table1_predicate",
    "fit_fix_bounds",
    "fit_fix_volume_polynomial",
    "in_xy_triangle",
    "s_halfspace",
]

HALF = Fraction(1, 2)
QUARTER = Fraction(1, 4)

TREATMENTS = ((1, 1), (1, 2), (2, 1), (2, 2))

# sign patterns over four components, "+" (i.e. +1) listed first
SIGN_PATTERNS = tuple(itertools.product((1, -1), repeat=4))


class ProbabilityError(ValueError):
    """A value that must be a probability (or a probability table) is not."""


def _prob(name, x, upper=Fraction(1)):
    v = to_scalar(x)
    if v < 0 or v > upper:
        raise ProbabilityError(f"{name} = {format_scalar(v)} is outside [0, {format_scalar(upper)}]")
    return v


# ---------------------------------------------------------------------------
# outcome tables and factorial systems
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OutcomeTable:
    """Joint distribution of ``(A, B)`` for one treatment."""

    p: object
    q: object
    r: object
    s: object

    def __post_init__(self):
        for name in "pqrs":
            object.__setattr__(self, name, _prob(name, getattr(self, name)))
        total = self.p + self.q + self.r + self.s
        if total != 1:
            raise ProbabilityError(f"table entries sum to {format_scalar(total)}, not 1")

    def prob(self, a: int, b: int):
        """``Pr[A = a, B = b]`` for ``a, b`` in ``{+1, -1}``."""
        return {(1, 1): self.p, (1, -1): self.q, (-1, 1): self.r, (-1, -1): self.s}[(a, b)]

    @property
    def a_plus(self):
        return self.p + self.q

    @property
    def b_plus(self):
        return self.p + self.r

    @property
    def expectation(self):
        return self.p + self.s - self.q - self.r

    def to_json(self) -> list:
        return [format_scalar(x) for x in (self.p, self.q, self.r, self.s)]

    @classmethod
    def homogeneous(cls, pij) -> "OutcomeTable":
        pij = to_scalar(pij)
        return cls(pij, HALF - pij, HALF - pij, pij)


@dataclass(frozen=True)
class FactorialSystem:
    """Four outcome tables indexed by treatment ``(i, j)``."""

    tables: tuple  # ordered as TREATMENTS

    def __post_init__(self):
        t = self.tables
        if isinstance(t, Mapping):
            t = tuple(t[k] for k in TREATMENTS)
        t = tuple(x if isinstance(x, OutcomeTable) else OutcomeTable(*x) for x in t)
        if len(t) != 4:
            raise ValueError("a 2x2 system has exactly four tables")
        object.__setattr__(self, "tables", t)

    def table(self, i: int, j: int) -> OutcomeTable:
        return self.tables[TREATMENTS.index((i, j))]

    @classmethod
    def from_pvector(cls, p: "PVector") -> "FactorialSystem":
        return cls(tuple(OutcomeTable.homogeneous(x) for x in p.values))

    def to_json(self) -> dict:
        return {
            "schema": "contexture/1",
            "kind": "factorial_system",
            "tables": {f"{i}{j}": self.table(i, j).to_json() for i, j in TREATMENTS},
        }

    @classmethod
    def from_json(cls, data: dict) -> "FactorialSystem":
        tabs = data.get("tables")
        if not isinstance(tabs, dict):
            raise ProbabilityError("field 'tables' must map '11','12','21','22' to [p, q, r, s]")
        out = []
        for i, j in TREATMENTS:
            key = f"{i}{j}"
            if key not in tabs:
                raise ProbabilityError(f"missing table '{key}'")
            cells = tabs[key]
            if len(cells) != 4:
                raise ProbabilityError(f"table '{key}' must have 4 entries")
            try:
                out.append(OutcomeTable(*(parse_scalar(str(c)) for c in cells)))
            except ProbabilityError as exc:
                raise ProbabilityError(f"table '{key}': {exc}") from None
        return cls(tuple(out))

    @classmethod
    def load(cls, path) -> "FactorialSystem":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


def marginal_selectivity(system: FactorialSystem) -> bool:
    """``Pr[A_ij = +1]`` does not depend on ``j`` and ``Pr[B_ij = +1]`` does
    not depend on ``i``."""
    t = system.table
    return all(t(i, 1).a_plus == t(i, 2).a_plus for i in (1, 2)) and all(
        t(1, j).b_plus == t(2, j).b_plus for j in (1, 2)
    )


def expectations(system: FactorialSystem) -> tuple:
    """``(E11, E12, E21, E22)`` with ``E_ij = E[A_ij B_ij]``."""
    return tuple(t.expectation for t in system.tables)


def chsh_combinations(system: FactorialSystem) -> tuple:
    """The four sums of all expectations with one of them negated, in the
    order of the negated treatment."""
    e = expectations(system)
    total = sum(e)
    return tuple(total - 2 * x for x in e)


def chsh_general(system: FactorialSystem) -> bool:
    """All four combinations of expectations lie in ``[-2, 2]``."""
    return all(-2 <= c <= 2 for c in chsh_combinations(system))


# ---------------------------------------------------------------------------
# homogeneous vectors
# ---------------------------------------------------------------------------


class _Vec4:
    _fields: tuple = ()

    def __init__(self, *values, **named):
        if named:
            values = tuple(named[f] for f in self._fields)
        if len(values) == 1 and not isinstance(values[0], (int, Fraction, QuadRat, str)):
            values = tuple(values[0])
        if len(values) != 4:
            raise ValueError(f"{type(self).__name__} needs 4 components")
        vals = tuple(_prob(f, v, HALF) for f, v in zip(self._fields, values))
        object.__setattr__(self, "_values", vals)

    def __setattr__(self, *_):
        raise AttributeError("immutable")

    def __getattr__(self, name):
        if name in type(self)._fields:
            return self._values[type(self)._fields.index(name)]
        raise AttributeError(name)

    @property
    def values(self) -> tuple:
        return self._values

    def __iter__(self):
        return iter(self._values)

    def __eq__(self, other):
        return type(self) is type(other) and self._values == other._values

    def __hash__(self):
        return hash((type(self).__name__, self._values))

    def __repr__(self):
        inner = ", ".join(f"{f}={format_scalar(v)}" for f, v in zip(self._fields, self._values))
        return f"{type(self).__name__}({inner})"

    def reflect(self, mask: Iterable[int]):
        """Apply ``x -> 1/2 - x`` on the listed component indices."""
        m = set(mask)
        return type(self)(*(HALF - v if k in m else v for k, v in enumerate(self._values)))

    def to_json(self) -> dict:
        return {f: format_scalar(v) for f, v in zip(self._fields, self._values)}

    @classmethod
    def from_json(cls, data):
        if isinstance(data, dict):
            missing = [f for f in cls._fields if f not in data]
            if missing:
                raise ProbabilityError(f"missing field(s) {', '.join(missing)}")
            return cls(*(parse_scalar(str(data[f])) for f in cls._fields))
        return cls(*(parse_scalar(str(x)) for x in data))

    @classmethod
    def parse(cls, text: str):
        """Comma-separated components, e.g. ``"1/4,1/4,1/4,1/4"``."""
        parts = [s for s in text.split(",")]
        if len(parts) != 4:
            raise ProbabilityError(f"expected 4 comma-separated values, got {len(parts)}")
        vals = []
        for f, s in zip(cls._fields, parts):
            try:
                vals.append(parse_scalar(s))
            except ValueError:
                raise ProbabilityError(f"{f}: malformed value {s.strip()!r}") from None
        return cls(*vals)


class PVector(_Vec4):
    """``(p11, p12, p21, p22)``, each in ``[0, 1/2]``."""

    _fields = ("p11", "p12", "p21", "p22")


class EVector(_Vec4):
    """Connection probabilities ``(e11, e21, e12, e22)``.

    ``e{i}1`` couples the two ``A`` outputs recorded at input level ``alpha_i``
    (over ``beta_1``, ``beta_2``); ``e{j}2`` couples the two ``B`` outputs at
    ``beta_j``.  Each entry is ``Pr[both coupled variables = +1]``.
    """

    _fields = ("e11", "e21", "e12", "e22")


CENTER = (QUARTER,) * 4


@dataclass(frozen=True)
class SSplit:
    """The 16 signed sums ``sum_k s_k (v_k - 1/4)`` split by the parity of the
    number of plus signs."""

    values: tuple  # ((sign pattern), value) in SIGN_PATTERNS order
    max_s0: object
    max_s1: object

    @property
    def max_all(self):
        return self.max_s0 if self.max_s0 >= self.max_s1 else self.max_s1

    def s0(self) -> tuple:
        return tuple(v for s, v in self.values if _parity(s) == 0)

    def s1(self) -> tuple:
        return tuple(v for s, v in self.values if _parity(s) == 1)


def _parity(pattern) -> int:
    return sum(1 for x in pattern if x > 0) % 2


def s_split(v) -> SSplit:
    vals = tuple(v.values if isinstance(v, _Vec4) else (to_scalar(x) for x in v))
    shifted = [x - QUARTER for x in vals]
    table = []
    for s in SIGN_PATTERNS:
        acc = Fraction(0)
        for sign, x in zip(s, shifted):
            acc = acc + x if sign > 0 else acc - x
        table.append((s, acc))
    m0 = max(v for s, v in table if _parity(s) == 0)
    m1 = max(v for s, v in table if _parity(s) == 1)
    return SSplit(tuple(table), m0, m1)


def s_halfspace(pattern, bound, n_before: int = 0, n_after: int = 0):
    """Coefficients and rhs of ``sum_k s_k (x_k - 1/4) <= bound`` for four
    consecutive coordinates embedded with ``n_before``/``n_after`` padding."""
    coeffs = [Fraction(0)] * n_before + [Fraction(s) for s in pattern] + [Fraction(0)] * n_after
    return coeffs, bound + Fraction(sum(pattern), 4)


def patterns(parity: int) -> tuple:
    return tuple(s for s in SIGN_PATTERNS if _parity(s) == parity)


# ---------------------------------------------------------------------------
# inequalities on p
# ---------------------------------------------------------------------------


def bell_combinations(p: PVector) -> tuple:
    """``sum(p) - 2 p_k`` for ``k`` over ``p11, p12, p21, p22``."""
    total = sum(p.values)
    return tuple(total - 2 * x for x in p.values)


def bell_chsh(p: PVector) -> bool:
    """Every combination lies in ``[0, 1]``; equivalently ``max S1 p <= 1/2``."""
    return all(0 <= c <= 1 for c in bell_combinations(p))


def cirelson(p: PVector, root2=None) -> bool:
    """Every combination lies in ``[(1 - sqrt2)/2, (1 + sqrt2)/2]``."""
    r = sqrt2(root2)
    lo, hi = (1 - r) / 2, (1 + r) / 2
    return all(lo <= c <= hi for c in bell_combinations(p))


def chaos(p: PVector) -> bool:
    """Every combination lies in ``[-1/2, 3/2]`` (always true on the cube)."""
    return all(Fraction(-1, 2) <= c <= Fraction(3, 2) for c in bell_combinations(p))


# ---------------------------------------------------------------------------
# the feasibility polytope in (p, eps)
# ---------------------------------------------------------------------------


def elfp_value(p: PVector, e: EVector):
    """``max(maxS0 p + maxS1 e, maxS1 p + maxS0 e)``."""
    sp, se = s_split(p), s_split(e)
    a = sp.max_s0 + se.max_s1
    b = sp.max_s1 + se.max_s0
    return a if a >= b else b


def elfp_member(p: PVector, e: EVector) -> bool:
    """Whether ``(p, e)`` admits a coupling (closed-form test)."""
    return elfp_value(p, e) <= Fraction(3, 2)


def gamma(e: EVector):
    """``1 - max S0 e``."""
    return 1 - s_split(e).max_s0


def lambda_(e: EVector):
    """``1/2 - max S1 e``."""
    return HALF - s_split(e).max_s1


def gamma_lambda_system(p: PVector, e: EVector) -> bool:
    """The expanded inequality system written through ``Gamma`` and
    ``Lambda``."""
    g, lam = gamma(e), lambda_(e)
    p11, p12, p21, p22 = p.values
    one_minus = (
        -p11 + p21 + p12 + p22,
        p11 - p21 + p12 + p22,
        p11 + p21 - p12 + p22,
        p11 + p21 + p12 - p22,
    )
    if not all(-g <= x <= 1 + g for x in one_minus):
        return False
    total = p11 + p12 + p21 + p22
    if not -lam <= total <= 2 + lam:
        return False
    two_minus = (
        -p11 - p21 + p12 + p22,
        -p11 + p21 - p12 + p22,
        -p11 + p21 + p12 - p22,
    )
    return all(abs(x) <= 1 + lam for x in two_minus)


# ---------------------------------------------------------------------------
# constraints on p
# ---------------------------------------------------------------------------


class ConstraintKind:
    """A convex constraint on ``p``: ``chaos``, ``quant``, ``class``,
    ``fix`` (a single vector) or ``custom`` (an H-representation over p)."""

    KINDS = ("chaos", "quant", "class", "fix", "custom")

    def __init__(self, kind: str, p: PVector | None = None, hrep=None, root2=None):
        if kind not in self.KINDS:
            raise ValueError(f"unknown constraint {kind!r}")
        if kind == "fix" and p is None:
            raise ValueError("fix needs a p vector")
        if kind == "custom" and hrep is None:
            raise ValueError("custom needs an H-representation")
        if hrep is not None and hrep.dim != 4:
            raise ValueError("custom constraints live in the 4 p coordinates")
        self.kind = kind
        self.p = p
        self.custom = hrep
        self.root2 = root2

    @classmethod
    def chaos(cls):
        return cls("chaos")

    @classmethod
    def quant(cls, root2=None):
        return cls("quant", root2=root2)

    @classmethod
    def classical(cls):
        return cls("class")

    @classmethod
    def fix(cls, p: PVector):
        return cls("fix", p=p)

    @classmethod
    def from_hrep(cls, hrep):
        return cls("custom", hrep=hrep)

    @property
    def label(self) -> str:
        if self.kind == "fix":
            return "fix(" + ",".join(format_scalar(v) for v in self.p.values) + ")"
        return self.kind

    @property
    def s1_bound(self):
        """Upper bound on ``max S1 p`` for the three benchmark kinds."""
        if self.kind == "quant":
            return sqrt2(self.root2) / 2
        if self.kind == "class":
            return HALF
        if self.kind == "chaos":
            return None
        raise ValueError(f"{self.kind} has no S1 bound")

    def holds(self, p: PVector) -> bool:
        if self.kind == "chaos":
            return True
        if self.kind in ("quant", "class"):
            return s_split(p).max_s1 <= self.s1_bound
        if self.kind == "fix":
            return p == self.p
        return self.custom.contains(p.values)

    def hrep(self):
        """H-representation over the four ``p`` coordinates, cube included."""
        from .polytope import Equation, HRep, Inequality

        cube = HRep.cube(4)
        if self.kind == "chaos":
            return cube
        if self.kind == "fix":
            eqs = []
            for k, v in enumerate(self.p.values):
                unit = [0] * 4
                unit[k] = 1
                eqs.append(Equation(unit, v))
            return cube.with_constraints(equations=eqs)
        if self.kind == "custom":
            return cube.intersect(self.custom)
        bound = self.s1_bound
        rows = [Inequality(*s_halfspace(s, bound)) for s in patterns(1)]
        return cube.with_constraints(rows)

    def __eq__(self, other):
        return (
            isinstance(other, ConstraintKind)
            and self.kind == other.kind
            and self.p == other.p
            and self.custom == other.custom
            and self.root2 == other.root2
        )

    def __hash__(self):
        return hash((self.kind, self.p, self.root2))

    def __repr__(self):
        return f"ConstraintKind({self.label})"


def _quant_level(root2=None):
    return (3 - sqrt2(root2)) / 2


def closed_form_predicate(constr: ConstraintKind, set_kind: str, e: EVector) -> bool:
    """Closed-form membership of ``e`` in the Fit/Force/Equi set of one of
    the benchmark constraints."""
    if set_kind not in ("fit", "force", "equi"):
        raise ValueError(f"unknown set kind {set_kind!r}")
    if constr.kind not in ("chaos", "quant", "class"):
        raise ValueError(f"no closed form for constraint {constr.kind!r}")
    sp = s_split(e)
    if constr.kind == "chaos":
        if set_kind == "force":
            return True
        return sp.max_all <= HALF
    if constr.kind == "quant":
        c = _quant_level(constr.root2)
        if set_kind == "fit":
            return sp.max_s0 <= c and sp.max_s1 <= HALF
        if set_kind == "force":
            return sp.max_s0 >= c
        return c in sp.s0() and sp.max_s1 <= HALF
    if set_kind == "fit":
        return sp.max_s1 <= HALF
    return 1 in sp.s0()


table1_predicate = closed_form_predicate  # interface name


# ---------------------------------------------------------------------------
# fixed p
# ---------------------------------------------------------------------------


def fit_fix_bounds(p: PVector) -> tuple:
    """Bounds ``(b1, b0)`` with ``Fit`` of fixed ``p`` equal to
    ``{maxS1 e <= b1, maxS0 e <= b0}``."""
    sp = s_split(p)
    return Fraction(3, 2) - sp.max_s0, Fraction(3, 2) - sp.max_s1


def in_xy_triangle(x, y) -> bool:
    """``(x, y)`` inside the triangle spanned by (0,0), (1/2,1), (1,1/2)."""
    return 2 * x - y >= 0 and 2 * y - x >= 0 and x + y <= Fraction(3, 2)


def _quartic(z):
    return (-1 + 8 * z - 24 * z**2 + 32 * z**3 - 16 * z**4) / Fraction(3)


def fit_fix_volume_polynomial(x, y):
    """Normalized volume of ``Fit`` for fixed ``p`` as a function of
    ``x = maxS0 p`` and ``y = maxS1 p``."""
    x, y = to_scalar(x), to_scalar(y)
    if not in_xy_triangle(x, y):
        raise ValueError(f"({format_scalar(x)}, {format_scalar(y)}) is outside the attainable triangle")
    out = Fraction(1)
    if x >= HALF:
        out += _quartic(x)
    if y >= HALF:
        out += _quartic(y)
    return out
