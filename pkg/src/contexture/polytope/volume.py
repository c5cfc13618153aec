"""Exact volume of polytopes and finite unions of polytopes.

Volume is computed from a pulling triangulation: the lowest-indexed vertex of
every face is joined to the triangulations of the facets of that face not
containing it.  Faces are vertex bitsets derived from the vertex/facet
incidences, so no coordinates are touched until the final determinants.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial, lcm

from .. import linalg
from ..scalar import QuadRat
from .hrep import HRep, InfeasibleRegion, RegionSet
from .ops import _complement_parts, affine_parameterization, minimize_h, vertex_facet_incidence

__all__ = ["volume", "region_volume", "triangulate"]


def _maximal(sets):
    sets = sorted(set(sets), key=int.bit_count, reverse=True)
    out = []
    for s in sets:
        if not any(s & m == s for m in out):
            out.append(s)
    return out


def triangulate(n_vertices: int, facet_sets, dim: int):
    """Simplices (tuples of ``dim + 1`` vertex indices) of a pulling
    triangulation of a ``dim``-polytope given by its facet vertex sets."""
    facets = [sum(1 << v for v in f) if not isinstance(f, int) else f for f in facet_sets]
    memo = {}

    def faces_below(face):
        return _maximal(face & g for g in facets if face & g and face & g != face)

    def tri(face, k):
        key = face
        hit = memo.get(key)
        if hit is not None:
            return hit
        apex_bit = face & -face
        apex = apex_bit.bit_length() - 1
        if k == 0:
            out = [(apex,)]
        else:
            out = []
            for g in faces_below(face):
                if g & apex_bit:
                    continue
                for s in tri(g, k - 1):
                    out.append((apex,) + s)
        memo[key] = out
        return out

    return tri((1 << n_vertices) - 1, dim)


def _simplex_volumes(verts, simplices, d):
    """Sum of ``|det|/d!`` over the simplices, in integer arithmetic after
    clearing denominators (over Z[sqrt2] when coordinates are irrational)."""
    rational = all(isinstance(x, (int, Fraction)) for v in verts for x in v)
    if rational:
        den = 1
        for v in verts:
            for x in v:
                den = lcm(den, Fraction(x).denominator)
        iv = [[int(Fraction(x) * den) for x in v] for v in verts]
        acc = 0
        for s in simplices:
            base = iv[s[0]]
            m = [[a - b for a, b in zip(iv[k], base)] for k in s[1:]]
            acc += abs(linalg.det_int(m))
        return Fraction(acc, den**d * factorial(d))
    parts = [[_quad_parts(x) for x in v] for v in verts]
    den = 1
    for v in parts:
        for a, b in v:
            den = lcm(den, a.denominator, b.denominator)
    iv = [[(int(a * den), int(b * den)) for a, b in v] for v in parts]
    acc = QuadRat(0, 0)
    for s in simplices:
        base = iv[s[0]]
        m = [[(a[0] - b[0], a[1] - b[1]) for a, b in zip(iv[k], base)] for k in s[1:]]
        r = linalg.det_zsqrt2(m)
        acc = acc + abs(QuadRat(r[0], r[1]))
    return acc / (den**d * factorial(d))


def _quad_parts(x):
    if isinstance(x, QuadRat):
        return x.rational, x.radical
    return Fraction(x), Fraction(0)


def volume(h: HRep, intrinsic: bool = False):
    """Lebesgue volume of ``h`` (strict inequalities do not matter).

    A region with implicit equations has volume 0 unless ``intrinsic`` is
    set, in which case it is measured in the coordinates left free by the
    equations (its projection onto those coordinates).  Empty regions have
    volume 0.
    """
    closed = h.closure()
    try:
        m = minimize_h(closed)
    except InfeasibleRegion:
        return Fraction(0)
    if m.equations:
        if not intrinsic:
            return Fraction(0)
        x0, N, free = affine_parameterization(m)
        return volume(m.substitute((N, x0), len(free)))
    d = m.dim
    if d == 0:
        return Fraction(1)
    verts, m, inc = vertex_facet_incidence(m, minimal=True)
    simplices = triangulate(len(verts), [sum(1 << v for v in f) for f in inc], d)
    return _simplex_volumes(verts, simplices, d)


def region_volume(rs: RegionSet, intrinsic: bool = False):
    """Volume of a union; overlapping parts are split into disjoint pieces
    first unless the set is flagged disjoint."""
    if rs.disjoint:
        return sum((volume(p, intrinsic) for p in rs.parts), Fraction(0))
    total = Fraction(0)
    seen = []
    for part in rs.parts:
        pieces = [part]
        for q in seen:
            nxt = []
            for piece in pieces:
                nxt.extend(_complement_parts(q, piece))
            pieces = nxt
            if not pieces:
                break
        for piece in pieces:
            total = total + volume(piece, intrinsic)
        seen.append(part)
    return total
