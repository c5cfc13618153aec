"""Exact polytope operations over ``HRep``/``VRep``/``RegionSet``."""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import Iterable, Sequence

from .. import linalg
from ..linsolve import LPResult, optimize_system
from ..scalar import Lex
from .dd import extreme_rays
from .hrep import Equation, HRep, Inequality, InfeasibleRegion, RegionSet, UnboundedRegion, VRep

log = logging.getLogger(__name__)

__all__ = [
    "v_to_h",
    "h_to_v",
    "minimize_h",
    "minimize_v",
    "dimension",
    "is_empty",
    "eliminate",
    "project_points",
    "complement_project",
    "region_complement",
    "region_intersect",
    "region_minimize",
    "region_subset",
    "region_equal",
    "hrep_subset",
    "affine_parameterization",
]


# ---------------------------------------------------------------------------
# small helpers
# ---------------------------------------------------------------------------


def affine_parameterization(h: HRep):
    """``(x0, N, free)`` with ``{E x = e} = {x0 + N t}``, where ``t`` are the
    coordinates listed in ``free``.  Raises on inconsistent equations."""
    d = h.dim
    if not h.equations:
        ident = [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]
        return [Fraction(0)] * d, ident, list(range(d))
    red, piv = linalg.rref([list(e.coeffs) + [e.rhs] for e in h.equations], d)
    if len(red) > len(piv):
        raise InfeasibleRegion("inconsistent equations")
    x0 = [Fraction(0)] * d
    for r, pc in enumerate(piv):
        x0[pc] = red[r][d]
    free = [c for c in range(d) if c not in piv]
    N = [[Fraction(0)] * len(free) for _ in range(d)]
    for k, f in enumerate(free):
        N[f][k] = Fraction(1)
        for r, pc in enumerate(piv):
            N[pc][k] = -red[r][f]
    return x0, N, free


def _lp_rhs(iq: Inequality, symbolic: bool):
    if symbolic and iq.strict:
        return Lex(iq.rhs, -1)
    return iq.rhs


def _real(x):
    return x.real if isinstance(x, Lex) else x


def _maximize(objective, ineqs: Sequence[Inequality], eqs: Sequence[Equation], symbolic=False) -> LPResult:
    return optimize_system(
        objective,
        [i.coeffs for i in ineqs],
        [_lp_rhs(i, symbolic) for i in ineqs],
        [e.coeffs for e in eqs],
        [e.rhs for e in eqs],
        "max",
    )


def _drop_trivial(ineqs):
    out = []
    for iq in ineqs:
        if any(iq.coeffs):
            out.append(iq)
        elif iq.rhs < 0 or (iq.rhs == 0 and iq.strict):
            raise InfeasibleRegion("constraint 0 <= negative")
    return out


# ---------------------------------------------------------------------------
# minimal H-representation
# ---------------------------------------------------------------------------


def _max_slack(d, ineqs, eqs):
    """Maximize ``t`` subject to ``a_i x + t <= b_i`` and ``t <= 1``."""
    A = [list(i.coeffs) + [Fraction(1)] for i in ineqs]
    A.append([Fraction(0)] * d + [Fraction(1)])
    b = [i.rhs for i in ineqs] + [Fraction(1)]
    E = [list(e.coeffs) + [Fraction(0)] for e in eqs]
    return optimize_system([0] * d + [1], A, b, E, [e.rhs for e in eqs], "max")


def minimize_h(h: HRep) -> HRep:
    """Minimal H-representation of the same set, in canonical form.

    Inequalities that hold with equality on the whole region become
    equations; a constraint implied by the others is dropped.  Strict
    inequalities are handled exactly through an infinitesimal right-hand
    side.  Raises :class:`InfeasibleRegion` for an empty region.
    """
    d = h.dim
    cur = h.canonical()
    ineqs = _drop_trivial(cur.inequalities)
    eqs = list(cur.equations)
    while ineqs:
        res = _max_slack(d, ineqs, eqs)
        if res.status == "infeasible" or res.value < 0:
            raise InfeasibleRegion("empty region")
        if res.value > 0:
            break
        y = res.multipliers[: len(ineqs)]
        tight = [k for k, v in enumerate(y) if v > 0]
        if any(ineqs[k].strict for k in tight):
            raise InfeasibleRegion("strict inequality forced to equality")
        eqs += [Equation(ineqs[k].coeffs, ineqs[k].rhs) for k in tight]
        rest = [iq for k, iq in enumerate(ineqs) if k not in set(tight)]
        cur = HRep(d, tuple(rest), tuple(eqs)).canonical()
        ineqs = _drop_trivial(cur.inequalities)
        eqs = list(cur.equations)
    if not ineqs and eqs:
        HRep(d, (), tuple(eqs)).canonical()  # consistency check

    symbolic = any(i.strict for i in ineqs)
    keep = list(ineqs)
    k = 0
    while k < len(keep):
        target = keep[k]
        others = keep[:k] + keep[k + 1 :]
        res = _maximize(target.coeffs, others, eqs, symbolic)
        redundant = False
        if res.status == "optimal":
            u = res.value
            if target.strict:
                redundant = (Lex(u.real, u.inf) if isinstance(u, Lex) else Lex(u, 0)) < Lex(target.rhs, 0)
            else:
                redundant = _real(u) <= target.rhs
        elif res.status == "infeasible":  # pragma: no cover - ruled out above
            raise InfeasibleRegion("empty region")
        if redundant:
            del keep[k]
        else:
            k += 1
    return HRep(d, tuple(keep), tuple(eqs)).canonical()


def is_empty(h: HRep) -> bool:
    try:
        minimize_h(h)
    except InfeasibleRegion:
        return True
    return False


def dimension(h: HRep) -> int:
    """Affine dimension: ambient dimension minus independent equations of
    the minimal form."""
    m = minimize_h(h)
    return h.dim - len(m.equations)


# ---------------------------------------------------------------------------
# V <-> H
# ---------------------------------------------------------------------------


def _hull(points):
    """Facets of the convex hull.  Returns ``(uniq, eqs, pivots, facets)``
    where facets are ``(Inequality, tight_point_indices)``."""
    uniq = list(dict.fromkeys(tuple(p) for p in points))
    d = len(uniq[0])
    p0 = uniq[0]
    diffs = [[a - b for a, b in zip(p, p0)] for p in uniq[1:]]
    diffs = [r for r in diffs if any(r)]
    if not diffs:
        eqs = []
        for i in range(d):
            unit = [0] * d
            unit[i] = 1
            eqs.append(Equation(unit, p0[i]))
        return uniq, eqs, [], []
    _, piv = linalg.rref(diffs, d)
    eqs = [Equation(w, linalg.dot(w, p0)) for w in linalg.nullspace(diffs, d)]
    gens = [[Fraction(1)] + [p[j] for j in piv] for p in uniq]
    facets = []
    for w, zset in extreme_rays(gens):
        coeffs = [Fraction(0)] * d
        for j, c in zip(piv, w[1:]):
            coeffs[j] = -c
        facets.append((Inequality(coeffs, w[0]), zset))
    return uniq, eqs, piv, facets


def v_to_h(v: VRep) -> HRep:
    """Minimal H-representation of the convex hull of ``v.points``."""
    pts = v.points if isinstance(v, VRep) else VRep(tuple(v)).points
    _, eqs, _, facets = _hull(pts)
    return HRep(len(pts[0]), tuple(f for f, _ in facets), tuple(eqs)).canonical()


def minimize_v(v: VRep) -> VRep:
    """Keep only the extreme points."""
    uniq, _, piv, facets = _hull(v.points)
    r = len(piv)
    if r == 0:
        return VRep((uniq[0],))
    keep = []
    for i, p in enumerate(uniq):
        normals = [[f.coeffs[j] for j in piv] for f, z in facets if i in z]
        if len(normals) >= r and linalg.rank(normals) == r:
            keep.append(p)
    return VRep(tuple(keep)).canonical()


def h_to_v(h: HRep) -> VRep:
    """Vertices of a bounded H-represented region (of its closure when it
    has strict inequalities)."""
    x0, N, free = affine_parameterization(h)
    k = len(free)
    red = h.substitute((N, x0), k)
    ineqs = _drop_trivial(red.inequalities)
    if k == 0:
        if all(i.rhs >= 0 for i in ineqs):
            return VRep((tuple(x0),))
        raise InfeasibleRegion("empty region")
    A = [i.coeffs for i in ineqs]
    if not A or linalg.rank(A) < k:
        if is_empty(h):
            raise InfeasibleRegion("empty region")
        raise UnboundedRegion("region contains a line")
    rows = [[i.rhs] + [-a for a in i.coeffs] for i in ineqs]
    rows.append([Fraction(1)] + [Fraction(0)] * k)
    verts = []
    unbounded = False
    for ray, _ in extreme_rays(rows):
        lam = ray[0]
        if lam > 0:
            t = [x / lam for x in ray[1:]]
            verts.append(tuple(x0[r] + linalg.dot(N[r], t) for r in range(h.dim)))
        else:
            unbounded = True
    if not verts:
        raise InfeasibleRegion("empty region")
    if unbounded:
        raise UnboundedRegion("region is unbounded")
    return VRep(tuple(verts)).canonical()


def vertex_facet_incidence(h: HRep, minimal: bool = False):
    """``(vertices, minimal_hrep, incidences)`` where ``incidences[i]`` is
    the frozenset of vertex indices tight on inequality ``i``.  Pass
    ``minimal=True`` when ``h`` is already minimal."""
    m = h if minimal else minimize_h(h)
    verts = list(h_to_v(m).points)
    inc = []
    for iq in m.inequalities:
        inc.append(frozenset(j for j, v in enumerate(verts) if iq.value(v) == iq.rhs))
    return verts, m, inc


# ---------------------------------------------------------------------------
# elimination
# ---------------------------------------------------------------------------


def project_points(points, keep: Sequence[int]):
    return [tuple(p[j] for j in keep) for p in points]


def _fm_step(h: HRep, var: int) -> HRep:
    """Remove variable ``var`` (its column stays, with zero coefficients)."""
    eqs = list(h.equations)
    pivot_eq = next((e for e in eqs if e.coeffs[var] != 0), None)
    if pivot_eq is not None:
        c = pivot_eq.coeffs[var]

        def sub(coeffs, rhs):
            f = coeffs[var] / c
            if not f:
                return coeffs, rhs
            return [a - f * b for a, b in zip(coeffs, pivot_eq.coeffs)], rhs - f * pivot_eq.rhs

        new_i = []
        for iq in h.inequalities:
            a, r = sub(iq.coeffs, iq.rhs)
            new_i.append(Inequality(a, r, iq.strict))
        new_e = []
        for e in eqs:
            if e is pivot_eq:
                continue
            a, r = sub(e.coeffs, e.rhs)
            new_e.append(Equation(a, r))
        return HRep(h.dim, tuple(new_i), tuple(new_e))
    pos, neg, zero = [], [], []
    for iq in h.inequalities:
        c = iq.coeffs[var]
        (pos if c > 0 else neg if c < 0 else zero).append(iq)
    out = list(zero)
    for p in pos:
        cp = p.coeffs[var]
        for q in neg:
            cq = -q.coeffs[var]
            coeffs = [cq * a + cp * b for a, b in zip(p.coeffs, q.coeffs)]
            out.append(Inequality(coeffs, cq * p.rhs + cp * q.rhs, p.strict or q.strict))
    return HRep(h.dim, tuple(out), tuple(eqs))


def _drop_columns(h: HRep, keep: Sequence[int]) -> HRep:
    return HRep(
        len(keep),
        tuple(Inequality([i.coeffs[j] for j in keep], i.rhs, i.strict) for i in h.inequalities),
        tuple(Equation([e.coeffs[j] for j in keep], e.rhs) for e in h.equations),
    )


def eliminate(h: HRep, variables: Iterable[int], method: str = "auto") -> HRep:
    """Projection of ``h`` onto the coordinates not in ``variables``.

    ``method="fm"`` runs Fourier-Motzkin, pruning redundancy with LPs after
    each step.  ``method="vertices"`` enumerates vertices, projects them and
    takes the hull; it needs a bounded region without strict inequalities.
    ``"auto"`` uses vertices when applicable and Fourier-Motzkin otherwise.
    The result is minimal and lives in the remaining coordinates, in their
    original order.  Raises :class:`InfeasibleRegion` for an empty input.
    """
    elim = sorted(set(variables))
    if any(v < 0 or v >= h.dim for v in elim):
        raise ValueError("variable index out of range")
    keep = [j for j in range(h.dim) if j not in elim]
    if method not in ("auto", "fm", "vertices"):
        raise ValueError(f"unknown method {method!r}")
    if not elim:
        return minimize_h(h)
    if method in ("auto", "vertices") and not h.has_strict:
        try:
            verts = h_to_v(h).points
        except UnboundedRegion:
            if method == "vertices":
                raise
        else:
            if not keep:
                return HRep(0)
            return v_to_h(VRep(tuple(project_points(verts, keep))))
    cur = minimize_h(h)
    for v in elim:
        cur = minimize_h(_fm_step(cur, v))
    return minimize_h(_drop_columns(cur, keep))


# ---------------------------------------------------------------------------
# complement projection
# ---------------------------------------------------------------------------


def _negations(constr: HRep):
    """Halfspaces whose union is the complement of ``constr``."""
    out = []
    for iq in constr.inequalities:
        out.append(iq.negated())
    for e in constr.equations:
        out.append(Inequality(e.coeffs, e.rhs, True))
        out.append(Inequality(tuple(-a for a in e.coeffs), -e.rhs, True))
    return out


def _project_violation(verts, keep, viol: Inequality, delta=None):
    """Projection of ``conv(verts)`` intersected with the failure set of
    ``viol``, or with ``{a.x >= b + delta}`` when ``delta`` is given.  Works
    in the hull of the lifted points ``(y, g)`` where ``g = a.x - b``
    measures the violation, then drops ``g``."""
    gvals = [viol.value(v) - viol.rhs for v in verts]
    top = max(gvals)
    if delta is None:
        strict = not viol.strict
        level = Fraction(0)
    else:
        strict = False
        level = delta
    if top < level or (strict and top == level):
        return None
    lifted = [tuple(v[j] for j in keep) + (gv,) for v, gv in zip(verts, gvals)]
    q = v_to_h(VRep(tuple(lifted)))
    n = len(keep)
    cut = Inequality([Fraction(0)] * n + [Fraction(-1)], -level, strict)
    try:
        return eliminate(q.with_constraints([cut]), [n], method="fm")
    except InfeasibleRegion:
        return None


def complement_project(base: HRep, constr: HRep, vars_to_eliminate: Iterable[int], delta=None) -> RegionSet:
    """Union over the halfspaces violating ``constr`` of the projection of
    ``base`` intersected with that halfspace.

    With ``delta=None`` the violated halfspaces stay strict and are handled
    exactly.  A positive ``delta`` replaces ``a.x > b`` by ``a.x >= b + delta``.
    """
    if constr.dim != base.dim:
        raise ValueError("dimension mismatch")
    if delta is not None and not delta > 0:
        raise ValueError("delta must be positive")
    elim = sorted(set(vars_to_eliminate))
    keep = [j for j in range(base.dim) if j not in elim]
    parts = []
    pieces = _negations(constr)
    if not base.has_strict:
        try:
            verts = h_to_v(base).points
        except InfeasibleRegion:
            return RegionSet(len(keep), ())
        except UnboundedRegion:
            verts = None
        if verts is not None:
            for piece in pieces:
                part = _project_violation(verts, keep, piece.negated(), delta)
                if part is not None:
                    parts.append(part)
            return RegionSet(len(keep), tuple(parts)).canonical()
    for piece in pieces:
        if delta is not None:
            piece = Inequality(piece.coeffs, piece.rhs - delta)
        try:
            parts.append(eliminate(base.with_constraints([piece]), elim))
        except InfeasibleRegion:
            continue
    return RegionSet(len(keep), tuple(parts)).canonical()


# ---------------------------------------------------------------------------
# region-set algebra
# ---------------------------------------------------------------------------


def region_minimize(rs: RegionSet) -> RegionSet:
    parts = []
    for p in rs.parts:
        try:
            parts.append(minimize_h(p))
        except InfeasibleRegion:
            continue
    return RegionSet(rs.dim, tuple(parts), rs.disjoint).canonical()


def _complement_parts(h: HRep, within: HRep):
    """Disjoint pieces of ``within - h``."""
    out = []
    prefix = []
    cons = list(h.inequalities)
    for e in h.equations:
        cons.append(Inequality(e.coeffs, e.rhs))
        cons.append(Inequality(tuple(-a for a in e.coeffs), -e.rhs))
    for c in cons:
        piece = within.with_constraints(prefix + [c.negated()])
        try:
            out.append(minimize_h(piece))
        except InfeasibleRegion:
            pass
        prefix.append(c)
    return out


def region_complement(rs: RegionSet, within: HRep) -> RegionSet:
    """``within - union(rs.parts)`` as a union of pairwise disjoint parts."""
    current = [minimize_h(within)] if not is_empty(within) else []
    for part in rs.parts:
        nxt = []
        for piece in current:
            nxt.extend(_complement_parts(part, piece))
        current = nxt
        if not current:
            break
    return RegionSet(rs.dim, tuple(current), True).canonical()


def region_intersect(a: RegionSet, b) -> RegionSet:
    """Pairwise intersections of parts; ``b`` may be a single ``HRep``."""
    bparts = (b,) if isinstance(b, HRep) else b.parts
    out = []
    for p in a.parts:
        for q in bparts:
            try:
                out.append(minimize_h(p.intersect(q)))
            except InfeasibleRegion:
                continue
    disjoint = a.disjoint and (isinstance(b, HRep) or b.disjoint)
    return RegionSet(a.dim, tuple(out), disjoint).canonical()


def hrep_subset(a: HRep, b: HRep) -> bool:
    """Whether region ``a`` is contained in region ``b`` (exact LPs)."""
    if is_empty(a):
        return True
    symbolic = a.has_strict
    for eq in b.equations:
        for sign in (1, -1):
            co = tuple(sign * x for x in eq.coeffs)
            res = _maximize(co, a.inequalities, a.equations, symbolic)
            if res.status != "optimal" or _real(res.value) > sign * eq.rhs:
                return False
            if isinstance(res.value, Lex) and res.value.real == sign * eq.rhs and res.value.inf > 0:
                return False
    for iq in b.inequalities:
        res = _maximize(iq.coeffs, a.inequalities, a.equations, symbolic)
        if res.status != "optimal":
            return False
        u = res.value
        u0 = _real(u)
        if u0 > iq.rhs:
            return False
        if iq.strict and u0 == iq.rhs:
            # attained (no infinitesimal slack) means a point on the boundary
            if not (isinstance(u, Lex) and u.inf < 0):
                return False
    return True


def region_subset(a, b) -> bool:
    """``union(a) <= union(b)``.  Either side may be an ``HRep``."""
    aparts = (a,) if isinstance(a, HRep) else a.parts
    bparts = (b,) if isinstance(b, HRep) else b.parts
    for part in aparts:
        # part - union(b) must be empty
        rest = [part] if not is_empty(part) else []
        for q in bparts:
            nxt = []
            for piece in rest:
                if hrep_subset(piece, q):
                    continue
                nxt.extend(_complement_parts(q, piece))
            rest = nxt
            if not rest:
                break
        if rest:
            return False
    return True


def region_equal(a, b) -> bool:
    return region_subset(a, b) and region_subset(b, a)
