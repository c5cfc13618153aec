"""All/Fit/Force/Equi sets of connection vectors for a constraint on ``p``.

Coordinates of the 8-dimensional space are
``(p11, p12, p21, p22, e11, e21, e12, e22)``.

* ``All``: pairs ``(p, e)`` admitting a coupling with ``p`` constrained.
* ``Fit``: ``e`` that admit a coupling for *every* constrained ``p``.
* ``Force``: ``e`` that admit a coupling *only* for constrained ``p``.
* ``Equi`` = ``Fit`` and ``Force``.

Volumes are normalized by the volume of ``[0, 1/2]^d``.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources

from . import polytope as pt
from .context_data import (
    ConstraintKind,
    PVector,
    in_xy_triangle,
    patterns,
    s_halfspace,
    s_split,
)
from .jdc import elfp_affine_map, elfp_columns
from .polytope import Equation, HRep, Inequality, RegionSet
from .scalar import format_scalar, parse_scalar, sqrt2, to_decimal

__all__ = [
    "P_VARS",
    "E_VARS",
    "elfp_hrep",
    "elfp_vertices",
    "all_set",
    "fit_set",
    "force_violation",
    "force_set",
    "equi_set",
    "ContextProfile",
    "profile",
    "fit_fix_volume",
    "pvector_for_split",
    "profiles_csv",
    "compute_elfp_hrep",
    "normalized_volume",
    "rhs_extrapolation",
    "closed_form",
    "golden_volumes",
]

P_VARS = (0, 1, 2, 3)
E_VARS = (4, 5, 6, 7)
HALF = Fraction(1, 2)


# ---------------------------------------------------------------------------
# the feasibility polytope
# ---------------------------------------------------------------------------


def compute_elfp_hrep() -> HRep:
    """Hull of the ELFP matrix columns pulled back to ``(p, e)``."""
    raw = pt.v_to_h(pt.VRep(elfp_columns()))
    return pt.minimize_h(raw.substitute(elfp_affine_map(), 8)).canonical()


@lru_cache(maxsize=None)
def elfp_hrep(source: str = "bundled") -> HRep:
    """Minimal H-representation of the feasibility polytope in ``(p, e)``.

    ``source="bundled"`` reads the stored result, ``"compute"`` rebuilds it
    from the matrix (about half a minute).
    """
    if source == "compute":
        return compute_elfp_hrep()
    if source != "bundled":
        raise ValueError(f"unknown source {source!r}")
    text = resources.files("contexture.data").joinpath("elfp_hrep.json").read_text()
    return HRep.from_json(json.loads(text))


@lru_cache(maxsize=None)
def elfp_vertices() -> tuple:
    return pt.h_to_v(elfp_hrep()).points


def _pad_p(iq, after=4):
    """Lift a constraint on ``p`` into the 8 coordinates."""
    zeros = (Fraction(0),) * after
    if isinstance(iq, Equation):
        return Equation(tuple(iq.coeffs) + zeros, iq.rhs)
    return Inequality(tuple(iq.coeffs) + zeros, iq.rhs, iq.strict)


def _fixed_p_map(p):
    """``x = M e + c`` embedding ``e`` with ``p`` fixed."""
    M = [[Fraction(0)] * 4 for _ in range(4)] + [[Fraction(int(i == j)) for j in range(4)] for i in range(4)]
    return M, tuple(p) + (Fraction(0),) * 4


def _elfp_at(p) -> HRep:
    return elfp_hrep().substitute(_fixed_p_map(p), 4)


def _constraint_rows(constr: ConstraintKind) -> HRep:
    """Constraint rows beyond the cube (the cube is implied by ELFP)."""
    h = constr.hrep()
    cube = set(HRep.cube(4).inequalities)
    return HRep(4, tuple(i for i in h.inequalities if i not in cube), h.equations)


# ---------------------------------------------------------------------------
# the four sets
# ---------------------------------------------------------------------------


def all_set(constr: ConstraintKind) -> HRep:
    rows = _constraint_rows(constr)
    h = elfp_hrep().with_constraints(
        [_pad_p(i) for i in rows.inequalities], [_pad_p(e) for e in rows.equations]
    )
    return pt.minimize_h(h).canonical()


def fit_set(constr: ConstraintKind) -> HRep:
    """Intersection of the ``e``-sections of ELFP over the vertices of the
    constraint polytope."""
    if constr.kind == "fix":
        verts = [constr.p.values]
    else:
        verts = pt.h_to_v(constr.hrep()).points
    rows = []
    for v in verts:
        rows.extend(_elfp_at(v).inequalities)
    return pt.minimize_h(HRep(4, tuple(rows))).canonical()


def force_violation(constr: ConstraintKind, delta=None) -> RegionSet:
    """``e`` admitting a coupling with some ``p`` that breaks the constraint.

    ``delta=None`` keeps the violated halfspaces open and is exact; a
    positive ``delta`` asks for violation by at least ``delta``.
    """
    rows = _constraint_rows(constr)
    lifted = HRep(8, tuple(_pad_p(i) for i in rows.inequalities), tuple(_pad_p(e) for e in rows.equations))
    return pt.complement_project(elfp_hrep(), lifted, P_VARS, delta=delta)


def force_set(constr: ConstraintKind, delta=None) -> RegionSet:
    if constr.kind == "fix":
        return RegionSet(4, (), True)
    viol = force_violation(constr, delta)
    return pt.region_complement(viol, HRep.cube(4))


def equi_set(constr: ConstraintKind, force: RegionSet | None = None, fit: HRep | None = None) -> RegionSet:
    if constr.kind == "fix":
        return RegionSet(4, (), True)
    force = force_set(constr) if force is None else force
    fit = fit_set(constr) if fit is None else fit
    return pt.region_intersect(force, fit)


def _s_rows(parity, bound):
    return [Inequality(*s_halfspace(s, bound)) for s in patterns(parity)]


def _s_at_least(pattern, level):
    c, b = s_halfspace(pattern, level)
    return Inequality(tuple(-x for x in c), -b)


def _s_equal(pattern, level):
    return Equation(*s_halfspace(pattern, level))


def closed_form(constr: ConstraintKind, set_kind: str) -> RegionSet:
    """The benchmark sets written directly through the S-sets of ``e``."""
    if set_kind not in ("fit", "force", "equi"):
        raise ValueError(f"unknown set kind {set_kind!r}")
    cube = HRep.cube(4)

    def one(*rows, eqs=()):
        return RegionSet(4, (cube.with_constraints(rows, eqs),))

    if constr.kind == "chaos":
        if set_kind == "force":
            return one()
        return one(*_s_rows(0, HALF), *_s_rows(1, HALF))
    if constr.kind == "quant":
        c = (3 - sqrt2(constr.root2)) / 2
        if set_kind == "fit":
            return one(*_s_rows(0, c), *_s_rows(1, HALF))
        if set_kind == "force":
            return RegionSet(4, tuple(cube.with_constraints([_s_at_least(s, c)]) for s in patterns(0)))
        return RegionSet(
            4, tuple(cube.with_constraints(_s_rows(1, HALF), [_s_equal(s, c)]) for s in patterns(0))
        )
    if constr.kind == "class":
        if set_kind == "fit":
            return one(*_s_rows(1, HALF))
        return RegionSet(4, tuple(cube.with_constraints((), [_s_equal(s, 1)]) for s in patterns(0)))
    raise ValueError(f"no closed form for constraint {constr.kind!r}")


# ---------------------------------------------------------------------------
# volumes and profiles
# ---------------------------------------------------------------------------


def normalized_volume(region):
    if isinstance(region, RegionSet):
        return pt.region_volume(region) * 2 ** region.dim
    return pt.volume(region) * 2 ** region.dim


def pvector_for_split(x, y) -> PVector:
    """A p vector of the form ``(u, u, u, w)`` with ``maxS0 p = x`` and
    ``maxS1 p = y``; ``(x, y)`` must lie in the attainable triangle."""
    if not in_xy_triangle(x, y):
        raise ValueError("point outside the attainable triangle")
    u = Fraction(1, 4) + Fraction(x + y) / 6
    w = Fraction(1, 4) + Fraction(x - y) / 2
    return PVector(u, u, u, w)


def fit_fix_volume(p: PVector):
    """Normalized volume of ``Fit`` for fixed ``p`` by triangulation."""
    return normalized_volume(fit_set(ConstraintKind.fix(p)))


@dataclass(frozen=True)
class ContextProfile:
    constraint: ConstraintKind
    all_set: HRep
    fit_set: HRep
    force_set: RegionSet
    equi_set: RegionSet
    volumes: tuple  # (vol8_all, vol4_fit, vol4_force, vol4_equi)

    def to_json(self) -> dict:
        names = ("vol8_all", "vol4_fit", "vol4_force", "vol4_equi")
        return {
            "schema": "contexture/1",
            "kind": "context_profile",
            "constraint": self.constraint.label,
            "all_set": self.all_set.to_json(),
            "fit_set": self.fit_set.to_json(),
            "force_set": self.force_set.to_json(),
            "equi_set": self.equi_set.to_json(),
            "volumes": {n: {"exact": format_scalar(v), "decimal": to_decimal(v)} for n, v in zip(names, self.volumes)},
        }

    def csv_row(self) -> list:
        return [self.constraint.label] + [to_decimal(v) for v in self.volumes]


CSV_HEADER = ["constraint", "vol8_all", "vol4_fit", "vol4_force", "vol4_equi"]


def profiles_csv(profiles) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for p in profiles:
        w.writerow(p.csv_row())
    return buf.getvalue()


def golden_volumes() -> dict:
    """Reference normalized volumes ``{constraint: {name: value}}`` shipped
    with the package for chaos, class and quant."""
    data = json.loads(resources.files("contexture.data").joinpath("volumes.json").read_text())
    return {k: {n: parse_scalar(v) for n, v in vols.items()} for k, vols in data["volumes"].items()}


def profile(constr: ConstraintKind) -> ContextProfile:
    a = all_set(constr)
    fit = fit_set(constr)
    force = force_set(constr)
    equi = equi_set(constr, force, fit)
    vols = (normalized_volume(a), normalized_volume(fit), normalized_volume(force), normalized_volume(equi))
    return ContextProfile(constr, a, fit, force, equi, vols)


# ---------------------------------------------------------------------------
# delta sweeps
# ---------------------------------------------------------------------------


def _row_key(coeffs):
    """Direction of a row, scaled so the first nonzero entry is +-1."""
    lead = next((x for x in coeffs if x != 0), None)
    if lead is None:
        return None, Fraction(1)
    s = abs(lead)
    return tuple(x / s for x in coeffs), s


def _rows_by_direction(h: HRep) -> dict:
    out = {}
    for iq in h.inequalities:
        key, s = _row_key(iq.coeffs)
        out[("le", key)] = iq.rhs / s
    for e in h.equations:
        key, s = _row_key(e.coeffs)
        out[("eq", key)] = e.rhs / s
    return out


def rhs_extrapolation(symbolic: RegionSet, sweep) -> bool:
    """Whether the ``delta``-results in ``sweep`` (pairs ``(delta, set)``)
    share the row directions of ``symbolic`` part by part, with right-hand
    sides moving affinely in ``delta`` and meeting the symbolic ones at
    ``delta = 0``."""
    base = [_rows_by_direction(p) for p in symbolic.parts]
    index = {frozenset(b): b for b in base}
    if len(index) != len(base):
        return False
    slopes = {}
    for delta, rs in sweep:
        if len(rs.parts) != len(base):
            return False
        for part in rs.parts:
            rows = _rows_by_direction(part)
            ref = index.get(frozenset(rows))
            if ref is None:
                return False
            for key, rhs in rows.items():
                slope = (rhs - ref[key]) / delta
                skey = (frozenset(ref), key)
                if slopes.setdefault(skey, slope) != slope:
                    return False
    return True
