"""Exact linear programming.

Two entry points:

* :func:`feasible` decides ``M Q = P, Q >= 0`` and returns either a
  :class:`Certificate` (a verified nonnegative solution) or a
  :class:`FarkasWitness` (a verified ``y`` with ``y^T M >= 0`` and
  ``y^T P < 0``).
* :func:`optimize` maximizes or minimizes a linear functional over an
  H-represented region.

The exact engine is a dense two-phase tableau simplex with Bland's rule; it
works over any ordered field (``Fraction`` or ``QuadRat``) and tolerates
objective/right-hand-side entries from an ordered vector space such as
``Lex`` (values with an infinitesimal part).  For rational problems a HiGHS
float solve may be used to *guess* the answer, which is then certified in
exact arithmetic; whenever certification fails the exact engine runs.
Nothing returned by this module is unverified.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence

from . import linalg
from .scalar import QuadRat, format_scalar, parse_scalar, to_scalar

log = logging.getLogger(__name__)

__all__ = [
    "DimensionError",
    "FeasibilityProblem",
    "Certificate",
    "FarkasWitness",
    "LPResult",
    "feasible",
    "optimize",
    "optimize_system",
    "simplex",
]


class DimensionError(ValueError):
    pass


# ---------------------------------------------------------------------------
# exact two-phase simplex on standard form  min c.x  s.t.  A x = b,  x >= 0
# ---------------------------------------------------------------------------


@dataclass
class SimplexResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: list | None = None
    value: object = None
    duals: list | None = None  # simplex multipliers, one per row of A
    farkas: list | None = None  # y with y^T A >= 0, y^T b < 0
    ray: list | None = None  # improving direction when unbounded
    pivots: int = 0


def _field(x):
    return Fraction(x) if isinstance(x, int) else x


def _pivot(T, r, e):
    row = T[r]
    piv = row[e]
    if piv != 1:
        row = [x / piv if x else x for x in row]
        T[r] = row
    nz = [j for j, x in enumerate(row) if x]
    for i, ti in enumerate(T):
        if i == r:
            continue
        f = ti[e]
        if not f:
            continue
        for j in nz:
            ti[j] = ti[j] - f * row[j]


def _objective_row(T, basis, cost, width):
    """Reduced costs ``cost_j - c_B . T_j`` and the current value."""
    d = list(cost) + [0]
    for i, bi in enumerate(basis):
        cb = cost[bi]
        if not cb:
            continue
        ti = T[i]
        for j in range(width):
            if ti[j]:
                d[j] = d[j] - cb * ti[j]
    # d[width] is minus the objective value
    return d


def _bland(T, basis, d, n_enter, rhs):
    """Run Bland's rule pivots until optimal/unbounded.  ``d`` is updated in
    place alongside the tableau."""
    pivots = 0
    while True:
        e = next((j for j in range(n_enter) if d[j] < 0), None)
        if e is None:
            return "optimal", pivots, None
        best = None
        for i, ti in enumerate(T):
            a = ti[e]
            if a > 0:
                ratio = ti[rhs] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return "unbounded", pivots, e
        r = best[1]
        _pivot(T, r, e)
        row = T[r]
        f = d[e]
        if f:
            for j, x in enumerate(row):
                if x:
                    d[j] = d[j] - f * x
        basis[r] = e
        pivots += 1


def simplex(A: Sequence[Sequence], b: Sequence, c: Sequence | None = None) -> SimplexResult:
    """Minimize ``c.x`` subject to ``A x = b, x >= 0`` exactly.

    With ``c`` omitted only feasibility is decided.  Right-hand side ``b``
    must be field scalars; ``c`` may hold any ordered-vector-space values.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    if len(b) != m:
        raise DimensionError("row count and right-hand side length differ")
    flips = [(-1 if bi < 0 else 1) for bi in b]
    width = n + m
    rhs = width
    T = []
    for i in range(m):
        s = flips[i]
        row = [_field(-x if s < 0 else x) for x in A[i]]
        row += [Fraction(int(k == i)) for k in range(m)]
        row.append(_field(-b[i] if s < 0 else b[i]))
        T.append(row)
    basis = [n + i for i in range(m)]

    # phase one: minimize the sum of artificials
    d = [0] * n + [Fraction(0)] * m + [0]
    for ti in T:
        for j in range(n):
            if ti[j]:
                d[j] = d[j] - ti[j]
        d[rhs] = d[rhs] - ti[rhs]
    _, piv1, _ = _bland(T, basis, d, n, rhs)
    infeas = -d[rhs]
    if infeas > 0:
        y = [1 - d[n + i] for i in range(m)]
        farkas = [-(y[i] * flips[i]) for i in range(m)]
        return SimplexResult("infeasible", farkas=farkas, pivots=piv1)

    # drive zero-level artificials out of the basis; drop redundant rows
    i = 0
    while i < len(T):
        if basis[i] >= n:
            e = next((j for j in range(n) if T[i][j] != 0), None)
            if e is None:
                del T[i]
                del basis[i]
                continue
            _pivot(T, i, e)
            basis[i] = e
        i += 1

    if c is None:
        x = [Fraction(0)] * n
        for i, bi in enumerate(basis):
            x[bi] = T[i][rhs]
        return SimplexResult("optimal", x=x, value=Fraction(0), pivots=piv1)

    cost = list(c) + [0] * m
    d = _objective_row(T, basis, cost, width)
    d[rhs] = 0
    for i, bi in enumerate(basis):
        cb = cost[bi]
        if cb:
            d[rhs] = d[rhs] - cb * T[i][rhs]
    status, piv2, e = _bland(T, basis, d, n, rhs)
    if status == "unbounded":
        ray = [Fraction(0)] * n
        ray[e] = Fraction(1)
        for i, bi in enumerate(basis):
            if bi < n:
                ray[bi] = -T[i][e]
        return SimplexResult("unbounded", ray=ray, pivots=piv1 + piv2)
    x = [Fraction(0)] * n
    for i, bi in enumerate(basis):
        x[bi] = T[i][rhs]
    value = -d[rhs]
    duals = [-(d[n + i]) * flips[i] for i in range(m)]
    return SimplexResult("optimal", x=x, value=value, duals=duals, pivots=piv1 + piv2)


# ---------------------------------------------------------------------------
# feasibility of M Q = P, Q >= 0
# ---------------------------------------------------------------------------


def _norm_vec(v):
    return tuple(to_scalar(x) for x in v)


@dataclass(frozen=True, eq=False)
class FeasibilityProblem:
    """The linear system ``matrix @ Q = target`` with ``Q >= 0``."""

    matrix: tuple
    target: tuple
    row_labels: tuple | None = field(default=None, compare=False)
    col_labels: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        mat = self.matrix
        if not (isinstance(mat, tuple) and all(isinstance(r, tuple) for r in mat)):
            object.__setattr__(self, "matrix", tuple(_norm_vec(r) for r in mat))
        if not isinstance(self.target, tuple):
            object.__setattr__(self, "target", _norm_vec(self.target))
        if len(self.matrix) != len(self.target):
            raise DimensionError(
                f"matrix has {len(self.matrix)} rows but target has {len(self.target)} entries"
            )
        if self.matrix:
            w = len(self.matrix[0])
            if any(len(r) != w for r in self.matrix):
                raise DimensionError("ragged matrix")

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.matrix), (len(self.matrix[0]) if self.matrix else 0)

    def to_json(self) -> dict:
        return {
            "schema": "contexture/1",
            "kind": "feasibility_problem",
            "matrix": [[format_scalar(x) for x in r] for r in self.matrix],
            "target": [format_scalar(x) for x in self.target],
        }

    def to_sparse_json(self) -> dict:
        """Triplet format: ``entries`` lists ``[row, col, value]`` for the
        nonzero cells; rows and columns are 0-based."""
        rows, cols = self.shape
        entries = [
            [i, j, format_scalar(x)]
            for i, r in enumerate(self.matrix)
            for j, x in enumerate(r)
            if x != 0
        ]
        out = {
            "schema": "contexture/1",
            "kind": "sparse_matrix",
            "rows": rows,
            "cols": cols,
            "entries": entries,
            "target": [format_scalar(x) for x in self.target],
        }
        if self.row_labels is not None:
            out["row_labels"] = list(self.row_labels)
        if self.col_labels is not None:
            out["col_labels"] = list(self.col_labels)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "FeasibilityProblem":
        if data.get("kind") == "sparse_matrix":
            mat = [[Fraction(0)] * data["cols"] for _ in range(data["rows"])]
            for i, j, v in data["entries"]:
                mat[i][j] = parse_scalar(v)
            return cls(tuple(tuple(r) for r in mat), tuple(parse_scalar(v) for v in data["target"]))
        return cls(
            tuple(tuple(parse_scalar(x) for x in r) for r in data["matrix"]),
            tuple(parse_scalar(x) for x in data["target"]),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json())


_SPARSE: dict[int, tuple] = {}


def _sparse(mat):
    """Nonzero pattern of ``mat`` as row lists and column lists of
    ``(index, value)`` pairs; cached per matrix object."""
    hit = _SPARSE.get(id(mat))
    if hit is not None and hit[0] is mat:
        return hit[1], hit[2]
    rows = [[(j, a) for j, a in enumerate(r) if a] for r in mat]
    cols = [[] for _ in range(len(mat[0]) if mat else 0)]
    for i, r in enumerate(rows):
        for j, a in r:
            cols[j].append((i, a))
    if len(_SPARSE) > 32:
        _SPARSE.clear()
    _SPARSE[id(mat)] = (mat, rows, cols)
    return rows, cols


_INT_SPARSE: dict[int, tuple] = {}


def _int_sparse(mat):
    """Row and column lists of :func:`_sparse` with ``int`` values, or
    ``None`` when some entry is not an integer."""
    hit = _INT_SPARSE.get(id(mat))
    if hit is not None and hit[0] is mat:
        return hit[1]
    rows, cols = _sparse(mat)
    out = None
    if all(isinstance(a, (int, Fraction)) and Fraction(a).denominator == 1 for r in rows for _, a in r):
        out = (
            [[(j, int(a)) for j, a in r] for r in rows],
            [[(i, int(a)) for i, a in c] for c in cols],
        )
    if len(_INT_SPARSE) > 32:
        _INT_SPARSE.clear()
    _INT_SPARSE[id(mat)] = (mat, out)
    return out


def _scaled(*vectors):
    """Integer numerators over a common denominator ``L`` for rational
    vectors: ``([ints, ...], L)``, or ``None`` if an entry is irrational."""
    L = 1
    for v in vectors:
        for x in v:
            if not isinstance(x, (int, Fraction)):
                return None
            if isinstance(x, Fraction):
                L = lcm(L, x.denominator)
    return [[x * L if isinstance(x, int) else x.numerator * (L // x.denominator) for x in v] for v in vectors], L


def _matvec(mat, v):
    out = []
    for r in _sparse(mat)[0]:
        s = Fraction(0)
        for j, a in r:
            x = v[j]
            if x:
                s = s + a * x
        out.append(s)
    return out


@dataclass(frozen=True)
class Certificate:
    """Nonnegative ``Q`` with ``M Q = P``."""

    solution: tuple
    feasible = True

    def verify(self, problem: FeasibilityProblem) -> bool:
        q = self.solution
        if len(q) != problem.shape[1]:
            return False
        isp = _int_sparse(problem.matrix)
        scaled = _scaled(q, problem.target) if isp is not None else None
        if scaled is not None:
            (qi, ti), _ = scaled
            if min(qi) < 0:
                return False
            for r, t in zip(isp[0], ti):
                if sum(a * qi[j] for j, a in r) != t:
                    return False
            return True
        if any(x < 0 for x in q):
            return False
        return all(lhs == rhs for lhs, rhs in zip(_matvec(problem.matrix, q), problem.target))

    def to_json(self) -> dict:
        return {"schema": "contexture/1", "kind": "certificate", "solution": [format_scalar(x) for x in self.solution]}


@dataclass(frozen=True)
class FarkasWitness:
    """``y`` with ``y^T M >= 0`` componentwise and ``y^T P < 0``."""

    multipliers: tuple
    feasible = False

    def verify(self, problem: FeasibilityProblem) -> bool:
        y = self.multipliers
        rows, cols = problem.shape
        if len(y) != rows:
            return False
        isp = _int_sparse(problem.matrix)
        scaled = _scaled(y, problem.target) if isp is not None else None
        if scaled is not None:
            (yi, ti), _ = scaled
            for col in isp[1]:
                if sum(a * yi[i] for i, a in col) < 0:
                    return False
            return sum(a * t for a, t in zip(yi, ti)) < 0
        for col in _sparse(problem.matrix)[1]:
            s = Fraction(0)
            for i, a in col:
                if y[i]:
                    s = s + y[i] * a
            if s < 0:
                return False
        val = Fraction(0)
        for yi, pi in zip(y, problem.target):
            if yi and pi:
                val = val + yi * pi
        return val < 0

    def to_json(self) -> dict:
        return {
            "schema": "contexture/1",
            "kind": "farkas_witness",
            "multipliers": [format_scalar(x) for x in self.multipliers],
        }


class _HighsGuide:
    """Warm-started HiGHS model per constraint matrix, used only to guess a
    support or a dual vector that is then certified exactly."""

    def __init__(self, int_matrix):
        import numpy as np
        import highspy
        import scipy.sparse as sp

        self.np = np
        m = len(int_matrix)
        n = len(int_matrix[0])
        self.m, self.n = m, n
        self.M = np.array(int_matrix, dtype=np.int64)
        A = np.hstack([self.M.astype(float), np.eye(m), -np.eye(m)])
        h = highspy.Highs()
        h.setOptionValue("output_flag", False)
        lp = highspy.HighsLp()
        N = A.shape[1]
        lp.num_col_ = N
        lp.num_row_ = m
        lp.col_cost_ = np.r_[np.zeros(n), np.ones(2 * m)]
        lp.col_lower_ = np.zeros(N)
        lp.col_upper_ = np.full(N, highspy.kHighsInf)
        lp.row_lower_ = np.zeros(m)
        lp.row_upper_ = np.zeros(m)
        csc = sp.csc_matrix(A)
        lp.a_matrix_.format_ = highspy.MatrixFormat.kColwise
        lp.a_matrix_.start_ = csc.indptr
        lp.a_matrix_.index_ = csc.indices
        lp.a_matrix_.value_ = csc.data
        h.passModel(lp)
        self.h = h
        self.rows = np.arange(m)

    def solve(self, target_float):
        np = self.np
        P = np.asarray(target_float, dtype=float)
        self.h.changeRowsBounds(self.m, self.rows, P, P)
        self.h.run()
        sol = self.h.getSolution()
        x = np.asarray(sol.col_value)[: self.n]
        y = np.asarray(sol.row_dual)
        obj = self.h.getInfo().objective_function_value
        return x, y, obj


_GUIDES: dict[int, tuple] = {}


def _guide_for(matrix):
    key = id(matrix)
    hit = _GUIDES.get(key)
    if hit is not None and hit[0] is matrix:
        return hit[1]
    ints = []
    for r in matrix:
        row = []
        for x in r:
            if isinstance(x, QuadRat) or Fraction(x).denominator != 1:
                return None
            row.append(int(x))
        ints.append(row)
    try:
        guide = _HighsGuide(ints)
    except ImportError:  # pragma: no cover - highspy missing
        return None
    if len(_GUIDES) > 32:
        _GUIDES.clear()
    _GUIDES[key] = (matrix, guide)
    return guide


def _rationalize(v, max_den):
    return [Fraction(float(x)).limit_denominator(max_den) for x in v]


def _round_primal(guide, x, den_bound):
    """Rounded candidate solution from the float optimum (checked by the caller)."""
    q = [Fraction(0)] * guide.n
    for j in range(guide.n):
        if x[j] > 1e-11:
            q[j] = Fraction(float(x[j])).limit_denominator(den_bound)
    return Certificate(tuple(q))


def _certify_dual(problem, guide, y, den_bound):
    np = guide.np
    # HiGHS duals of the phase-one model satisfy M^T y <= 0, y.P > 0
    yr = _rationalize(-np.asarray(y), den_bound)
    L = 1
    for v in yr:
        L = lcm(L, v.denominator)
    yi = [int(v * L) for v in yr]
    if max(abs(v) for v in yi) > 2**40:
        return None
    cols = np.asarray(yi, dtype=np.int64) @ guide.M
    if (cols < 0).any():
        return None
    val = Fraction(0)
    for a, t in zip(yr, problem.target):
        if a and t:
            val += a * t
    if val >= 0:
        return None
    return FarkasWitness(tuple(yr))


def _exact_feasible(problem):
    res = simplex(problem.matrix, problem.target)
    if res.status == "infeasible":
        return FarkasWitness(tuple(res.farkas))
    return Certificate(tuple(res.x))


def feasible(problem: FeasibilityProblem, method: str = "auto") -> Certificate | FarkasWitness:
    """Decide ``M Q = P, Q >= 0``.

    ``method="exact"`` runs the exact simplex only.  ``"auto"`` first asks a
    floating-point solver for a candidate answer on integer matrices and
    certifies it exactly, falling back to the exact simplex on any doubt.
    The returned object always passes ``verify(problem)``.
    """
    if not isinstance(problem, FeasibilityProblem):
        raise TypeError("expected a FeasibilityProblem")
    rows, cols = problem.shape
    if rows == 0 or cols == 0:
        raise DimensionError("empty problem")
    result = None
    if method == "auto" and all(not isinstance(t, QuadRat) for t in problem.target):
        guide = _guide_for(problem.matrix)
        if guide is not None:
            x, y, obj = guide.solve([float(t) for t in problem.target])
            den = 1
            for t in problem.target:
                den = lcm(den, Fraction(t).denominator)
            bound = max(10**6, den * 10**4)
            if obj < 1e-7:
                result = _round_primal(guide, x, bound)
                if not result.verify(problem):
                    result = None
            if result is None and obj > 1e-12:
                result = _certify_dual(problem, guide, y, 10**4)
                if result is not None and not result.verify(problem):
                    result = None
            if result is not None:
                return result
            log.debug("float guide could not be certified; running exact simplex")
    elif method not in ("auto", "exact"):
        raise ValueError(f"unknown method {method!r}")
    if result is None:
        result = _exact_feasible(problem)
    if not result.verify(problem):  # pragma: no cover - would be a solver bug
        raise AssertionError("feasibility answer failed exact verification")
    return result


# ---------------------------------------------------------------------------
# optimization over {x : A x <= b, E x = e}
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    value: object = None
    point: tuple | None = None
    multipliers: tuple | None = None  # one nonnegative weight per inequality

    @property
    def bounded(self) -> bool:
        return self.status == "optimal"


def _find_point(A, b, E, e):
    """Some point of ``{A x <= b, E x = e}`` or ``None`` (exact)."""
    n = len(A[0]) if A else (len(E[0]) if E else 0)
    # x = u - v, slack s:  A u - A v + s = b,  E u - E v = e
    rows = []
    rhs = []
    m = len(A)
    for i, a in enumerate(A):
        rows.append(list(a) + [-x for x in a] + [Fraction(int(k == i)) for k in range(m)])
        rhs.append(b[i])
    for i, a in enumerate(E):
        rows.append(list(a) + [-x for x in a] + [Fraction(0)] * m)
        rhs.append(e[i])
    if not rows:
        return [Fraction(0)] * n
    res = simplex(rows, rhs)
    if res.status == "infeasible":
        return None
    return [res.x[j] - res.x[n + j] for j in range(n)]


def _affine_param(E, e, n):
    """``(x0, N)`` with ``{x : E x = e} = {x0 + N t}``; ``None`` if empty."""
    if not E:
        return [Fraction(0)] * n, [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    red, piv = linalg.rref([list(E[i]) + [e[i]] for i in range(len(E))], n)
    if len(red) > len(piv):
        return None  # a leftover row reads 0 = nonzero
    x0 = [Fraction(0)] * n
    for r, pc in enumerate(piv):
        x0[pc] = red[r][n]
    free = [c for c in range(n) if c not in piv]
    N = [[Fraction(0)] * len(free) for _ in range(n)]
    for k, f in enumerate(free):
        N[f][k] = Fraction(1)
        for r, pc in enumerate(piv):
            N[pc][k] = -red[r][f]
    return x0, N


def optimize_system(objective, A, b, E=(), e=(), sense: str = "max") -> LPResult:
    """Optimize ``objective . x`` over ``{A x <= b, E x = e}``, ``x`` free.

    Equations are eliminated by parameterizing their solution set.  ``b``
    may carry infinitesimal parts (:class:`~contexture.scalar.Lex`).  The
    inequality system is solved through its dual standard form, whose
    simplex multipliers are the primal optimum.
    """
    if sense not in ("max", "min"):
        raise ValueError("sense must be 'max' or 'min'")
    c = [to_scalar(x) for x in objective]
    n = len(c)
    param = _affine_param(list(E), list(e), n)
    if param is None:
        return LPResult("infeasible")
    x0, N = param
    k = len(N[0]) if N else 0
    c0 = linalg.dot(c, x0)
    ct = [linalg.dot(c, [N[r][j] for r in range(n)]) for j in range(k)]
    At = [[linalg.dot(a, [N[r][j] for r in range(n)]) for j in range(k)] for a in A]
    bt = [bi - linalg.dot(a, x0) for a, bi in zip(A, b)]
    res = _optimize_free(ct, At, bt, sense)
    if res.status != "optimal":
        return res
    t = res.point
    x = tuple(x0[r] + linalg.dot(N[r], t) for r in range(n))
    return LPResult("optimal", res.value + c0, x, res.multipliers)


def _optimize_free(c, A, b, sense):
    n = len(c)
    if n == 0 or not A:
        if any(bi < 0 for bi in b):
            return LPResult("infeasible")
        if any(c):
            return LPResult("unbounded")
        return LPResult("optimal", Fraction(0), tuple(Fraction(0) for _ in c), tuple(Fraction(0) for _ in A))
    if sense == "min":
        c = [-x for x in c]
    # dual: min b.y  s.t.  A^T y = c,  y >= 0
    D = [[a[j] for a in A] for j in range(n)]
    res = simplex(D, c, b)
    if res.status == "optimal":
        val = res.value
        return LPResult("optimal", -val if sense == "min" else val, tuple(res.duals), tuple(res.x))
    if res.status == "unbounded":
        return LPResult("infeasible")
    # dual infeasible: primal is unbounded or infeasible
    if _find_point(A, [_real_part(x) for x in b], [], []) is None:
        return LPResult("infeasible")
    return LPResult("unbounded")


def _real_part(x):
    return x.real if hasattr(x, "inf") else x


def optimize(objective, region, sense: str = "max") -> LPResult:
    """Exact optimum of ``objective . x`` over an ``HRep`` region.

    Strict inequalities are relaxed to their closures, so the value returned
    is the supremum/infimum.
    """
    A = [iq.coeffs for iq in region.inequalities]
    b = [iq.rhs for iq in region.inequalities]
    E = [eq.coeffs for eq in region.equations]
    e = [eq.rhs for eq in region.equations]
    if len(objective) != region.dim:
        raise DimensionError("objective length differs from region dimension")
    if not A and not E:
        if all(x == 0 for x in objective):
            return LPResult("optimal", Fraction(0), tuple(Fraction(0) for _ in objective))
        return LPResult("unbounded")
    return optimize_system(objective, A, b, E, e, sense)
