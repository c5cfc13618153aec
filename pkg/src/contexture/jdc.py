"""Joint-distribution feasibility systems ``M Q = P, Q >= 0``.

Columns of ``M`` enumerate value assignments to the hidden variables (tuples
of ``+1``/``-1``, lexicographic with ``+1`` first); rows enumerate the
observable events; a cell is 1 when the assignment produces the event.

* :func:`build_jdc` couples ``(A, B)`` through four hidden variables
  ``(h1_1, h1_2, h2_1, h2_2)``, one per output and input level.
* :func:`build_elfp` gives every treatment its own pair of hidden variables
  ``(H1_ij, H2_ij)`` and adds rows that pin the connection probabilities.
* :func:`build_general_lft` is the JDC construction for any number of
  factors, levels and outcome values.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from .context_data import TREATMENTS, EVector, FactorialSystem, PVector
from .linsolve import Certificate, FarkasWitness, FeasibilityProblem, feasible
from .scalar import to_scalar

__all__ = [
    "SystemSpec",
    "SpecError",
    "jdc_matrix",
    "build_jdc",
    "elfp_matrix",
    "elfp_columns",
    "elfp_row_labels",
    "elfp_affine_map",
    "build_elfp",
    "build_general_lft",
    "jdc_verdict",
    "elfp_verdict",
]

HALF = Fraction(1, 2)
SIGNS = (1, -1)
OUTCOMES = ((1, 1), (1, -1), (-1, 1), (-1, -1))


def _sgn(v: int) -> str:
    return "+" if v > 0 else "-"


# ---------------------------------------------------------------------------
# JDC
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def jdc_matrix() -> tuple:
    """The 16x16 JDC matrix; columns are ``(h1_1, h1_2, h2_1, h2_2)``."""
    cols = list(itertools.product(SIGNS, repeat=4))
    rows = []
    for i, j in TREATMENTS:
        for a, b in OUTCOMES:
            rows.append(tuple(Fraction(int(h[i - 1] == a and h[1 + j] == b)) for h in cols))
    return tuple(rows)


@lru_cache(maxsize=None)
def _jdc_labels():
    rows = tuple(f"A{i}{j}={_sgn(a)},B{i}{j}={_sgn(b)}" for i, j in TREATMENTS for a, b in OUTCOMES)
    cols = tuple("".join(_sgn(x) for x in h) for h in itertools.product(SIGNS, repeat=4))
    return rows, cols


def build_jdc(system: FactorialSystem) -> FeasibilityProblem:
    target = tuple(t.prob(a, b) for t in system.tables for a, b in OUTCOMES)
    rows, cols = _jdc_labels()
    return FeasibilityProblem(jdc_matrix(), target, rows, cols)


def jdc_verdict(system: FactorialSystem) -> Certificate | FarkasWitness:
    return feasible(build_jdc(system))


# ---------------------------------------------------------------------------
# ELFP
# ---------------------------------------------------------------------------

# hidden-variable slots: (output, i, j) -> column position
_SLOT = {}
for _t, (_i, _j) in enumerate(TREATMENTS):
    _SLOT[(1, _i, _j)] = 2 * _t
    _SLOT[(2, _i, _j)] = 2 * _t + 1


def _elfp_events():
    """Each row as a pair of ((slot, value), (slot, value)) conditions."""
    events = []
    for i, j in TREATMENTS:
        for a, b in OUTCOMES:
            events.append(((_SLOT[(1, i, j)], a), (_SLOT[(2, i, j)], b)))
    for i in (1, 2):
        for a, a2 in OUTCOMES:
            events.append(((_SLOT[(1, i, 1)], a), (_SLOT[(1, i, 2)], a2)))
    for j in (1, 2):
        for b, b2 in OUTCOMES:
            events.append(((_SLOT[(2, 1, j)], b), (_SLOT[(2, 2, j)], b2)))
    return events


@lru_cache(maxsize=None)
def elfp_columns() -> tuple:
    """The 256 columns of the ELFP matrix as 32-vectors."""
    events = _elfp_events()
    out = []
    for h in itertools.product(SIGNS, repeat=8):
        out.append(tuple(Fraction(int(h[s1] == v1 and h[s2] == v2)) for (s1, v1), (s2, v2) in events))
    return tuple(out)


@lru_cache(maxsize=None)
def elfp_matrix() -> tuple:
    """The 32x256 ELFP matrix (one shared object, so solver state is reused)."""
    cols = elfp_columns()
    return tuple(tuple(c[r] for c in cols) for r in range(32))


@lru_cache(maxsize=None)
def elfp_row_labels() -> tuple:
    labels = [f"A{i}{j}={_sgn(a)},B{i}{j}={_sgn(b)}" for i, j in TREATMENTS for a, b in OUTCOMES]
    labels += [f"A{i}1={_sgn(a)},A{i}2={_sgn(a2)}" for i in (1, 2) for a, a2 in OUTCOMES]
    labels += [f"B1{j}={_sgn(b)},B2{j}={_sgn(b2)}" for j in (1, 2) for b, b2 in OUTCOMES]
    return tuple(labels)


@lru_cache(maxsize=None)
def elfp_affine_map():
    """``(M, c)`` with ``P = M (p, e) + c`` for the 8 coordinates
    ``(p11, p12, p21, p22, e11, e21, e12, e22)``."""
    M, c = [], []
    for k in range(8):
        for a, b in OUTCOMES:
            row = [Fraction(0)] * 8
            if a == b:
                row[k] = Fraction(1)
                c.append(Fraction(0))
            else:
                row[k] = Fraction(-1)
                c.append(HALF)
            M.append(tuple(row))
    return tuple(M), tuple(c)


def _elfp_target(p: PVector, e: EVector) -> tuple:
    out = []
    for v in tuple(p.values) + tuple(e.values):
        out.extend((v, HALF - v, HALF - v, v))
    return tuple(out)


@lru_cache(maxsize=None)
def _elfp_col_labels() -> tuple:
    return tuple("".join(_sgn(x) for x in h) for h in itertools.product(SIGNS, repeat=8))


def build_elfp(p: PVector, e: EVector) -> FeasibilityProblem:
    return FeasibilityProblem(elfp_matrix(), _elfp_target(p, e), elfp_row_labels(), _elfp_col_labels())


def elfp_verdict(p: PVector, e: EVector) -> Certificate | FarkasWitness:
    return feasible(build_elfp(p, e))


# ---------------------------------------------------------------------------
# general factorial systems
# ---------------------------------------------------------------------------


class SpecError(ValueError):
    """Inconsistent system description or probabilities."""


@dataclass(frozen=True)
class SystemSpec:
    """Factors with ``levels[f]`` input levels and one output per factor
    taking ``outcomes[f]`` values; ``treatments`` lists 1-based level tuples."""

    factor_count: int
    levels: tuple
    outcomes: tuple
    treatments: tuple

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(self.levels))
        object.__setattr__(self, "outcomes", tuple(self.outcomes))
        object.__setattr__(self, "treatments", tuple(tuple(t) for t in self.treatments))
        f = self.factor_count
        if f < 1 or len(self.levels) != f or len(self.outcomes) != f:
            raise SpecError("levels and outcomes need one entry per factor")
        if any(n < 1 for n in self.levels) or any(n < 1 for n in self.outcomes):
            raise SpecError("levels and outcome counts must be positive")
        if not self.treatments:
            raise SpecError("treatment set is empty")
        for t in self.treatments:
            if len(t) != f or any(not 1 <= x <= n for x, n in zip(t, self.levels)):
                raise SpecError(f"treatment {t} is out of range")
        if len(set(self.treatments)) != len(self.treatments):
            raise SpecError("repeated treatment")

    @classmethod
    def binary_2x2(cls) -> "SystemSpec":
        return cls(2, (2, 2), (2, 2), TREATMENTS)

    def hidden_variables(self) -> tuple:
        """``(factor, level)`` pairs, factor-major."""
        return tuple((f, l) for f in range(self.factor_count) for l in range(1, self.levels[f] + 1))

    def outcome_tuples(self) -> tuple:
        """Outcome index tuples for one treatment, lexicographic (index 0 first)."""
        return tuple(itertools.product(*(range(n) for n in self.outcomes)))


def build_general_lft(spec: SystemSpec, probabilities: Mapping | Sequence) -> FeasibilityProblem:
    """JDC system for ``spec``.

    ``probabilities`` maps each treatment (or lists, in treatment order) the
    joint distribution of the outputs over :meth:`SystemSpec.outcome_tuples`.
    For binary outputs index 0 stands for ``+1``.
    """
    if isinstance(probabilities, Mapping):
        try:
            dists = [probabilities[t] for t in spec.treatments]
        except KeyError as exc:
            raise SpecError(f"no probabilities for treatment {exc.args[0]}") from None
    else:
        dists = list(probabilities)
        if len(dists) != len(spec.treatments):
            raise SpecError("one distribution per treatment is required")
    outs = spec.outcome_tuples()
    target = []
    for t, dist in zip(spec.treatments, dists):
        dist = [to_scalar(x) for x in dist]
        if len(dist) != len(outs):
            raise SpecError(f"treatment {t}: expected {len(outs)} probabilities, got {len(dist)}")
        if any(x < 0 for x in dist) or sum(dist) != 1:
            raise SpecError(f"treatment {t}: not a probability distribution")
        target.extend(dist)

    hidden = spec.hidden_variables()
    pos = {hv: k for k, hv in enumerate(hidden)}
    ranges = [range(spec.outcomes[f]) for f, _ in hidden]
    columns = list(itertools.product(*ranges))
    rows = []
    labels = []
    for t in spec.treatments:
        slots = [pos[(f, t[f])] for f in range(spec.factor_count)]
        for o in outs:
            rows.append(tuple(Fraction(int(all(h[s] == v for s, v in zip(slots, o)))) for h in columns))
            labels.append(f"{t}:{o}")
    col_labels = tuple(",".join(map(str, h)) for h in columns)
    return FeasibilityProblem(tuple(rows), tuple(target), tuple(labels), col_labels)
