import itertools
import json
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from contexture.context_data import FactorialSystem
from contexture.jdc import build_jdc
from contexture.linsolve import (
    Certificate,
    DimensionError,
    FarkasWitness,
    FeasibilityProblem,
    feasible,
    optimize,
    optimize_system,
    simplex,
)
from contexture.polytope import HRep
from contexture.scalar import Lex

from .helpers import bundled_system


def test_identity_system():
    prob = FeasibilityProblem(((1, 0), (0, 1)), (F(1, 2), F(1, 2)))
    for method in ("auto", "exact"):
        v = feasible(prob, method)
        assert isinstance(v, Certificate)
        assert v.solution == (F(1, 2), F(1, 2))
        assert v.verify(prob)


def test_inconsistent_equalities():
    prob = FeasibilityProblem(((1,), (1,)), (1, 0))
    for method in ("auto", "exact"):
        v = feasible(prob, method)
        assert isinstance(v, FarkasWitness)
        assert v.verify(prob)


def test_jdc_of_violating_system_is_infeasible():
    prob = build_jdc(bundled_system("eq5"))
    v = feasible(prob, "exact")
    assert not v.feasible and v.verify(prob)


def test_certificates_reject_wrong_answers():
    prob = FeasibilityProblem(((1, 0), (0, 1)), (F(1, 2), F(1, 2)))
    assert not Certificate((F(1, 2), F(1, 3))).verify(prob)
    assert not Certificate((F(-1, 2), F(1, 2))).verify(prob)
    assert not FarkasWitness((1, -1)).verify(prob)


def test_shape_errors():
    with pytest.raises(DimensionError):
        FeasibilityProblem(((1, 0), (0, 1)), (1,))


def test_serialization_round_trip():
    prob = build_jdc(bundled_system("eq6"))
    back = FeasibilityProblem.from_json(json.loads(prob.dumps()))
    assert back.matrix == prob.matrix and back.target == prob.target
    sparse = prob.to_sparse_json()
    assert len(sparse["entries"]) == 64


def _brute_feasible(M, P):
    """Feasibility of M Q = P, Q >= 0 for tiny systems over vertices of the
    solution polyhedron: some basic solution must be nonnegative."""
    m, n = len(M), len(M[0])
    for k in range(0, m + 1):
        for cols in itertools.combinations(range(n), k):
            sub = [[M[i][c] for c in cols] + [P[i]] for i in range(m)]
            sol = _solve(sub, k)
            if sol is not None and all(x >= 0 for x in sol):
                return True
    return False


def _solve(aug, k):
    rows = [list(map(F, r)) for r in aug]
    piv_cols = []
    r = 0
    for c in range(k):
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            return None
        rows[r], rows[p] = rows[p], rows[r]
        rows[r] = [x / rows[r][c] for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                rows[i] = [a - rows[i][c] * b for a, b in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
    if any(row[-1] != 0 for row in rows[r:]):
        return None
    return [rows[i][-1] for i in range(k)]


small = st.integers(min_value=-2, max_value=2)


@settings(max_examples=60, deadline=None)
@given(
    st.integers(1, 3).flatmap(
        lambda m: st.tuples(
            st.lists(st.lists(small, min_size=3, max_size=3), min_size=m, max_size=m),
            st.lists(small, min_size=m, max_size=m),
        )
    )
)
def test_verdict_matches_enumeration(data):
    M, P = data
    prob = FeasibilityProblem(tuple(map(tuple, M)), tuple(P))
    for method in ("auto", "exact"):
        v = feasible(prob, method)
        assert v.verify(prob)
        assert v.feasible == _brute_feasible(M, P)


def test_simplex_standard_form():
    res = simplex([[1, 1, 1]], [1], [-1, -2, 0])
    assert res.status == "optimal" and res.value == -2
    assert simplex([[1, -1]], [1], [0, -1]).status == "unbounded"
    assert simplex([[1, 1]], [-1]).status == "infeasible"


def test_optimize_interval():
    res = optimize((1,), HRep.box([0], [1]))
    assert res.status == "optimal" and res.value == 1 and res.point == (1,)
    assert optimize((1,), HRep.box([0], [1]), "min").value == 0


def test_optimize_with_equations():
    # max x + y on the segment x = y within the unit square
    res = optimize_system((1, 1), [(1, 0), (0, 1), (-1, 0), (0, -1)], [1, 1, 0, 0], [(1, -1)], [0])
    assert res.value == 2 and res.point == (1, 1)
    assert optimize_system((1,), [(1,)], [1], [(1,)], [2]).status == "infeasible"


def test_optimize_unbounded_and_infeasible():
    assert optimize((1, 0), HRep.from_rows([(-1, 0)], [0])).status == "unbounded"
    assert optimize((1,), HRep.from_rows([(1,), (-1,)], [0, -1])).status == "infeasible"


def test_infinitesimal_rhs():
    res = optimize_system((1,), [(1,)], [Lex(1, -1)])
    assert res.value == Lex(1, -1)


def test_bell_bound_over_classical_polytope():
    from contexture.context_data import ConstraintKind

    h = ConstraintKind.classical().hrep()
    res = optimize((1, 1, 1, -1), h)
    assert res.value == 1  # shifted: maxS1 p = 1/2


def test_shifted_combination_over_projected_feasibility_polytope():
    from contexture.context_sets import E_VARS, elfp_hrep
    from contexture.polytope import eliminate

    proj = eliminate(elfp_hrep(), E_VARS)
    assert optimize((1, 1, 1, -1), proj).value - F(1, 2) == 1
