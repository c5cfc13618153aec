import itertools
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from contexture.context_data import ConstraintKind, bell_chsh
from contexture.polytope import (
    Equation,
    HRep,
    Inequality,
    InfeasibleRegion,
    RegionSet,
    UnboundedRegion,
    VRep,
    complement_project,
    dimension,
    eliminate,
    h_to_v,
    hrep_subset,
    is_empty,
    minimize_h,
    minimize_v,
    region_complement,
    region_equal,
    region_intersect,
    region_subset,
    region_volume,
    triangulate,
    v_to_h,
    volume,
)
from contexture.polytope.dd import extreme_rays
from contexture.scalar import SQRT2

HALF = F(1, 2)
SQUARE = HRep.box([0, 0], [1, 1])


def test_square_hull():
    h = v_to_h(VRep(((0, 0), (1, 0), (0, 1), (1, 1))))
    assert not h.equations
    assert len(h.inequalities) == 4
    assert region_equal(h, SQUARE)


def test_segment_hull_has_equation():
    h = v_to_h(VRep(((0, 0), (1, 1))))
    assert len(h.equations) == 1
    eq = h.equations[0]
    assert eq.coeffs[0] == -eq.coeffs[1] and eq.rhs == 0
    assert len(h.inequalities) == 2
    assert dimension(h) == 1


def test_triangle_vertices():
    h = HRep.from_rows([(-1, 0), (0, -1), (1, 1)], [0, 0, 1])
    assert set(h_to_v(h).points) == {(0, 0), (1, 0), (0, 1)}


def test_xy_triangle_vertices():
    h = HRep.from_rows([(-2, 1), (1, -2), (1, 1)], [0, 0, F(3, 2)])
    assert set(h_to_v(h).points) == {(0, 0), (HALF, 1), (1, HALF)}


def test_implicit_equations_detected():
    m = minimize_h(HRep.from_rows([(-1, 0), (0, -1), (1, 1)], [0, 0, 0]))
    assert not m.inequalities
    assert len(m.equations) == 2
    assert dimension(m) == 0


def test_redundant_row_removed():
    m = minimize_h(HRep.from_rows([(1,), (1,)], [1, 2]))
    assert len(m.inequalities) == 1 and m.inequalities[0].rhs == 1


def test_empty_and_unbounded():
    empty = HRep.from_rows([(1,), (-1,)], [0, -1])
    assert is_empty(empty)
    with pytest.raises(InfeasibleRegion):
        minimize_h(empty)
    with pytest.raises(UnboundedRegion):
        h_to_v(HRep.from_rows([(-1, 0), (0, -1)], [0, 0]))


def test_point_dimension_zero():
    assert dimension(HRep(2, (), (Equation((1, 0), 0), Equation((0, 1), 0)))) == 0


def test_bell_polytope_vertices():
    h = minimize_h(ConstraintKind.classical().hrep())
    verts = h_to_v(h).points
    assert all(bell_chsh_tuple(v) for v in verts)
    assert (F(1, 4),) * 4 not in verts
    assert (HALF, HALF, HALF, 0) not in verts
    assert region_equal(v_to_h(VRep(verts)), h)
    assert minimize_v(VRep(verts + ((F(1, 4),) * 4,))).points == VRep(verts).canonical().points


def test_bell_polytope_is_projected_joint_distribution_system():
    from contexture.jdc import jdc_matrix

    M = jdc_matrix()
    eqs = []
    for r, row in enumerate(M):
        k, cell = divmod(r, 4)
        # target p, 1/2 - p, 1/2 - p, p for treatment k
        pcoef = [0] * 4
        pcoef[k] = -1 if cell in (0, 3) else 1
        rhs = 0 if cell in (0, 3) else HALF
        eqs.append(Equation(tuple(pcoef) + tuple(row), rhs))
    ineqs = [Inequality(tuple(-int(i == j) for i in range(20)), 0) for j in range(4, 20)]
    lifted = HRep(20, tuple(ineqs), tuple(eqs))
    proj = eliminate(lifted, range(4, 20))
    assert region_equal(proj, ConstraintKind.classical().hrep())
    assert len(h_to_v(proj).points) == len(h_to_v(minimize_h(ConstraintKind.classical().hrep())).points)


def bell_chsh_tuple(v):
    from contexture.context_data import PVector

    return bell_chsh(PVector(*v))


def test_cone_extreme_rays():
    # x >= 0, y >= 0, x + y >= 0 redundant
    rays = extreme_rays([(1, 0), (0, 1), (1, 1)])
    assert sorted(tuple(r) for r, _ in rays) == [(0, 1), (1, 0)]


def test_unit_square_and_simplex_volume():
    assert volume(SQUARE) == 1
    simplex = HRep.from_rows([(-1, 0, 0), (0, -1, 0), (0, 0, -1), (1, 1, 1)], [0, 0, 0, 1])
    assert volume(simplex) == F(1, 6)


def test_flat_region_volume():
    seg = v_to_h(VRep(((0, 0), (1, 1))))
    assert volume(seg) == 0
    assert volume(seg, intrinsic=True) == 1


def test_irrational_volume():
    h = HRep.box([0, 0], [SQRT2, 1])
    assert volume(h) == SQRT2
    tri = HRep.from_rows([(-1, 0), (0, -1), (1, 1)], [0, 0, SQRT2])
    assert volume(tri) == 1


def _random_poly(rng, d):
    pts = {tuple(F(rng.randint(0, 6), 6) for _ in range(d)) for _ in range(d + 4)}
    return VRep(tuple(pts))


def test_volume_against_hull_of_random_points_monte_carlo():
    rng = random.Random(5)
    v = _random_poly(rng, 3)
    h = v_to_h(v)
    exact = volume(h)
    n = 20000
    hits = 0
    for _ in range(n):
        x = tuple(F(rng.random()).limit_denominator(10**6) for _ in range(3))
        hits += h.contains(x)
    sigma = (float(exact) * (1 - float(exact)) / n) ** 0.5
    assert abs(hits / n - float(exact)) < 4 * sigma + 1e-3


def test_volume_symmetries():
    rng = random.Random(9)
    for _ in range(5):
        v = _random_poly(rng, 3)
        base = volume(v_to_h(v))
        perm = VRep(tuple((p[2], p[0], p[1]) for p in v.points))
        assert volume(v_to_h(perm)) == base
        refl = VRep(tuple((HALF - p[0], p[1], HALF - p[2]) for p in v.points))
        assert volume(v_to_h(refl)) == base


def test_triangulation_counts():
    # square: 2 triangles; cube: 6 simplices
    sq = [{0, 1}, {2, 3}, {0, 2}, {1, 3}]
    assert len(triangulate(4, sq, 2)) == 2


def test_eliminate_simple():
    h = HRep.from_rows([(0, -1), (0, 1), (1, -1), (-1, 0), (1, 0)], [0, 1, 0, 0, 1])
    for method in ("auto", "fm"):
        proj = eliminate(h, [1], method=method)
        assert proj.dim == 1
        assert region_equal(proj, HRep.box([0], [1]))


@settings(max_examples=25, deadline=None)
@given(st.randoms(use_true_random=False))
def test_eliminate_methods_agree(r):
    v = _random_poly(r, 3)
    h = v_to_h(v)
    if h.equations:
        return
    a = eliminate(h, [1], method="vertices")
    b = eliminate(h, [1], method="fm")
    assert a.canonical() == b.canonical()


def test_complement_project_square():
    rs = complement_project(SQUARE, HRep.from_rows([(1, 0)], [HALF]), [0])
    assert rs.dim == 1
    assert region_equal(rs, HRep.box([0], [1]))
    inner = complement_project(SQUARE, HRep.from_rows([(1, 0)], [2]), [0])
    assert not inner.parts


def test_complement_project_strictness():
    # base: triangle; violation of y <= x forces y > x with x eliminated
    tri = HRep.from_rows([(-1, 0), (0, -1), (1, 1)], [0, 0, 1])
    rs = complement_project(tri, HRep.from_rows([(-1, 1)], [0]), [0])
    assert rs.contains((HALF,)) and not rs.contains((0,))
    assert rs.contains((F(1, 10**6),)) and not rs.contains((F(11, 10),))


def test_complement_project_delta():
    rs = complement_project(SQUARE, HRep.from_rows([(1, 1)], [1]), [0], delta=F(1, 10))
    assert rs.contains((F(1, 10),)) and not rs.contains((0,))
    assert rs.contains((1,))


def test_region_set_algebra():
    left = HRep.box([0, 0], [HALF, 1])
    right = HRep.box([HALF, 0], [1, 1])
    union = RegionSet(2, (left, right))
    assert region_equal(union, SQUARE)
    comp = region_complement(RegionSet(2, (left,)), SQUARE)
    assert comp.disjoint
    assert region_volume(comp) == HALF
    assert region_subset(comp, right)
    assert region_volume(union) == 1
    inter = region_intersect(union, HRep.box([0, 0], [1, HALF]))
    assert region_volume(inter) == HALF
    assert hrep_subset(left, SQUARE) and not hrep_subset(SQUARE, left)


def test_strict_subset():
    open_half = HRep(1, (Inequality((1,), HALF, True), Inequality((-1,), 0)))
    closed_half = HRep.box([0], [HALF])
    assert hrep_subset(open_half, closed_half)
    assert not hrep_subset(closed_half, open_half)


def test_canonical_serialization_round_trip():
    h = minimize_h(ConstraintKind.quant().hrep())
    assert HRep.from_json(h.to_json()) == h
    rs = RegionSet(4, (h,))
    assert RegionSet.from_json(rs.to_json()) == rs
