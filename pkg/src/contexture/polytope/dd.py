"""Double description method for pointed polyhedral cones.

Given constraint rows ``a_i``, compute the extreme rays of
``C = {x : a_i . x >= 0 for all i}``.  ``C`` must be pointed, i.e. the rows must
span the whole space.  Rows with rational entries are rescaled to integers and
the iteration runs in exact integer arithmetic; rows with sqrt(2) entries run
in :class:`~contexture.scalar.QuadRat` arithmetic.

Adjacency of rays is decided combinatorially (no other ray is tight on all
constraints the pair is jointly tight on), which is exact for the minimal
generating set maintained by the iteration.
"""

from __future__ import annotations

import operator
from fractions import Fraction
from math import gcd
from typing import Sequence

from .. import linalg

__all__ = ["ConeError", "extreme_rays"]


class ConeError(ValueError):
    pass


def _int_dot(a, r):
    return sum(map(operator.mul, a, r))


def _field_dot(a, r):
    s = 0
    for x, y in zip(a, r):
        if x and y:
            s = s + x * y
    return s


def _int_normalize(v):
    g = 0
    for x in v:
        if x:
            g = gcd(g, x)
            if g == 1:
                return v
    if g > 1:
        return [x // g for x in v]
    return v


def _field_normalize(v):
    lead = next((x for x in v if x != 0), None)
    if lead is None:
        return v
    lead = abs(lead)
    return [x / lead for x in v]


def _independent_rows(rows, n):
    """Greedy choice of ``n`` linearly independent rows (by index)."""
    basis = []  # (pivot column, reduced row)
    chosen = []
    for idx, row in enumerate(rows):
        v = [Fraction(x) if isinstance(x, int) else x for x in row]
        for pc, b in basis:
            if v[pc] != 0:
                f = v[pc]
                v = [x - f * y for x, y in zip(v, b)]
        pc = next((c for c in range(n) if v[c] != 0), None)
        if pc is None:
            continue
        piv = v[pc]
        v = [x / piv for x in v]
        basis.append((pc, v))
        chosen.append(idx)
        if len(chosen) == n:
            break
    return chosen


def extreme_rays(rows: Sequence[Sequence], order: Sequence[int] | None = None):
    """Extreme rays of ``{x : rows @ x >= 0}``.

    Returns a list of ``(ray, zero_set)`` pairs where ``ray`` is a list of
    scalars (primitive integers when possible) and ``zero_set`` is a frozenset
    of indices of the rows tight at the ray.
    """
    rows = [list(r) for r in rows]
    if not rows:
        raise ConeError("no constraints: cone is not pointed")
    n = len(rows[0])
    int_mode = all(linalg.is_rational_vector(r) for r in rows)
    if int_mode:
        work = [linalg.integer_scale(r) for r in rows]
        dot, normalize = _int_dot, _int_normalize
    else:
        work = rows
        dot, normalize = _field_dot, _field_normalize

    basis_idx = _independent_rows(work, n)
    if len(basis_idx) < n:
        raise ConeError("constraint rows do not span the space: cone is not pointed")

    inv = linalg.inverse([[Fraction(x) if isinstance(x, int) else x for x in work[i]] for i in basis_idx])
    rays = []
    zsets = []
    all_basis = 0
    for i in basis_idx:
        all_basis |= 1 << i
    for j in range(n):
        col = [inv[k][j] for k in range(n)]
        if int_mode:
            col = [int(x) for x in linalg.integer_scale(col)]
        else:
            col = normalize(col)
        rays.append(col)
        zsets.append(all_basis & ~(1 << basis_idx[j]))

    in_basis = set(basis_idx)
    remaining = [i for i in (order if order is not None else range(len(work))) if i not in in_basis]
    target_rank = n - 2

    for i in remaining:
        a = work[i]
        bit = 1 << i
        vals = [dot(a, r) for r in rays]
        pos = [k for k, v in enumerate(vals) if v > 0]
        neg = [k for k, v in enumerate(vals) if v < 0]
        if not neg:
            for k, v in enumerate(vals):
                if v == 0:
                    zsets[k] |= bit
            continue
        new_rays = []
        new_z = []
        if pos:
            # row -> bitset of rays tight on it, for the adjacency test
            tight = {}
            for k, z in enumerate(zsets):
                zz = z
                while zz:
                    low = zz & -zz
                    j = low.bit_length() - 1
                    tight[j] = tight.get(j, 0) | (1 << k)
                    zz ^= low
            all_rays = (1 << len(rays)) - 1
            for p in pos:
                zp = zsets[p]
                vp = vals[p]
                rp = rays[p]
                for q in neg:
                    common = zp & zsets[q]
                    if common.bit_count() < target_rank:
                        continue
                    members = all_rays
                    cc = common
                    while cc:
                        low = cc & -cc
                        members &= tight[low.bit_length() - 1]
                        if members.bit_count() <= 2:
                            break
                        cc ^= low
                    if members.bit_count() > 2:
                        continue
                    vq = vals[q]
                    rq = rays[q]
                    nr = [vp * y - vq * x for x, y in zip(rp, rq)]
                    new_rays.append(normalize(nr))
                    new_z.append(common | bit)
        keep_rays = []
        keep_z = []
        for k, v in enumerate(vals):
            if v > 0:
                keep_rays.append(rays[k])
                keep_z.append(zsets[k])
            elif v == 0:
                keep_rays.append(rays[k])
                keep_z.append(zsets[k] | bit)
        rays = keep_rays + new_rays
        zsets = keep_z + new_z

    out = []
    for r, z in zip(rays, zsets):
        if int_mode:
            r = [Fraction(x) for x in r]
        idx = []
        zz = z
        while zz:
            low = zz & -zz
            idx.append(low.bit_length() - 1)
            zz ^= low
        out.append((r, frozenset(idx)))
    return out
