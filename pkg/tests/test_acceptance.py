"""End-to-end acceptance criteria, one test per criterion.

Each test prints a single ``acceptance N: PASS|FAIL`` line (repeated in the
terminal summary) before asserting.  Run alone with
``pytest tests/test_acceptance.py -s``.
"""

import itertools
import random
import sys
import time
from fractions import Fraction as F

import numpy as np
import pytest

from contexture import polytope as pt
from contexture.context_data import (
    TREATMENTS,
    ConstraintKind,
    EVector,
    FactorialSystem,
    OutcomeTable,
    PVector,
    bell_chsh,
    bell_combinations,
    chsh_general,
    cirelson,
    elfp_member,
    fit_fix_volume_polynomial,
    gamma_lambda_system,
    in_xy_triangle,
    marginal_selectivity,
    s_split,
)
from contexture.context_sets import (
    all_set,
    closed_form,
    compute_elfp_hrep,
    elfp_hrep,
    equi_set,
    fit_fix_volume,
    fit_set,
    force_set,
    force_violation,
    golden_volumes,
    normalized_volume,
    pvector_for_split,
    rhs_extrapolation,
)
from contexture.jdc import build_elfp, build_jdc, elfp_columns, elfp_verdict, jdc_verdict
from contexture.quantum import AngleConfig, chsh_value, pvector_from_angles
from contexture.scalar import SQRT2, format_scalar, to_decimal

from .helpers import bundled_system

HALF = F(1, 2)
CONSTRAINTS = {"chaos": ConstraintKind.chaos(), "quant": ConstraintKind.quant(), "class": ConstraintKind.classical()}


def test_01_dichotomy(criterion):
    t0 = time.perf_counter()
    eq5, eq6 = bundled_system("eq5"), bundled_system("eq6")
    v5, v6 = jdc_verdict(eq5), jdc_verdict(eq6)
    ok5 = not v5.feasible and v5.verify(build_jdc(eq5))
    ok6 = v6.feasible and v6.verify(build_jdc(eq6))
    dt = time.perf_counter() - t0
    ok = ok5 and ok6 and dt < 1
    assert criterion(1, ok, f"violating system infeasible={ok5}, compatible system feasible={ok6}, {dt:.3f} s < 1 s")


def _random_selective_system(rng):
    den = rng.choice((2, 3, 4, 6, 12, 60))
    a = {i: F(rng.randint(0, den), den) for i in (1, 2)}
    b = {j: F(rng.randint(0, den), den) for j in (1, 2)}
    tables = []
    for i, j in TREATMENTS:
        lo, hi = max(F(0), a[i] + b[j] - 1), min(a[i], b[j])
        mode = rng.random()
        if mode < 0.3:
            p = lo
        elif mode < 0.6:
            p = hi
        else:
            p = lo + (hi - lo) * F(rng.randint(0, den), den)
        tables.append(OutcomeTable(p, a[i] - p, b[j] - p, 1 - a[i] - b[j] + p))
    return FactorialSystem(tuple(tables))


def test_02_joint_distribution_equals_chsh(criterion):
    rng = random.Random(2)
    n, agree, infeasible, certified = 10**4, 0, 0, 0
    t0 = time.perf_counter()
    for _ in range(n):
        system = _random_selective_system(rng)
        assert marginal_selectivity(system)
        v = jdc_verdict(system)
        certified += v.verify(build_jdc(system))
        infeasible += not v.feasible
        agree += v.feasible == chsh_general(system)
    dt = time.perf_counter() - t0
    ok = agree == n and certified == n and dt < 60
    assert criterion(2, ok, f"{agree}/{n} agree ({infeasible} infeasible), {certified}/{n} certified, {dt:.1f} s < 60 s")


def test_03_feasibility_polytope_facets(criterion):
    t0 = time.perf_counter()
    h = compute_elfp_hrep()
    dim = pt.dimension(h)
    dt = time.perf_counter() - t0
    same = h.canonical() == elfp_hrep().canonical()
    ok = len(h.inequalities) == 144 and not h.equations and h.dim == 8 and dim == 8 and dt <= 600
    assert criterion(
        3,
        ok and same,
        f"{len(h.inequalities)} inequalities, {len(h.equations)} equations, dimension {dim}, "
        f"bundled copy identical={same}, {dt:.1f} s <= 600 s",
    )


def _random_point(rng):
    """Rational coordinates in [0, 1/2], biased towards the boundary values."""
    den = rng.choice((4, 8, 12, 60, 1000))
    out = []
    for _ in range(8):
        if rng.random() < 0.3:
            out.append(rng.choice((F(0), F(1, 4), HALF)))
        else:
            out.append(F(rng.randint(0, den // 2), den))
    return PVector(*out[:4]), EVector(*out[4:])


def test_04_compact_form_equivalence(criterion):
    rng = random.Random(4)
    n, agree, feasible_count, verified = 10**5, 0, 0, 0
    t0 = time.perf_counter()
    for k in range(n):
        p, e = _random_point(rng)
        v = elfp_verdict(p, e)
        if k % 100 == 0:
            verified += v.verify(build_elfp(p, e))
        member = elfp_member(p, e)
        feasible_count += v.feasible
        agree += v.feasible == member == gamma_lambda_system(p, e)
    dt = time.perf_counter() - t0
    ok = agree == n and verified == n // 100 and dt < 600
    assert criterion(
        4, ok, f"{agree}/{n} agree ({feasible_count} feasible), {verified} certificates re-verified, {dt:.0f} s < 600 s"
    )


def test_05_table_cells(criterion):
    t0 = time.perf_counter()
    results = {}
    for name, constr in CONSTRAINTS.items():
        fit = fit_set(constr)
        force = force_set(constr)
        equi = equi_set(constr, force, fit)
        for kind, got in (("fit", fit), ("force", force), ("equi", equi)):
            results[f"{kind}_{name}"] = pt.region_equal(got, closed_form(constr, kind))
    force_class_vol = normalized_volume(force_set(CONSTRAINTS["class"]))
    dt = time.perf_counter() - t0
    ok = all(results.values()) and force_class_vol == 0
    failed = [k for k, v in results.items() if not v]
    assert criterion(
        5,
        ok,
        f"{sum(results.values())}/9 cells equal their closed forms{' (failed: ' + ', '.join(failed) + ')' if failed else ''}, "
        f"vol(force_class) = {format_scalar(force_class_vol)}, {dt:.0f} s",
    )


def test_06_fixed_p_fit_polynomial(criterion):
    t0 = time.perf_counter()
    grid = [F(k, 20) for k in range(21)]
    points = [(x, y) for x in grid for y in grid if in_xy_triangle(x, y)]
    mismatches = []
    for x, y in points:
        if fit_fix_volume(pvector_for_split(x, y)) != fit_fix_volume_polynomial(x, y):
            mismatches.append((x, y))
    # other p vectors with the same split values
    rng = random.Random(6)
    extra = 0
    for _ in range(20):
        p = PVector(*(F(rng.randint(0, 20), 40) for _ in range(4)))
        sp = s_split(p)
        extra += 1
        if fit_fix_volume(p) != fit_fix_volume_polynomial(sp.max_s0, sp.max_s1):
            mismatches.append(tuple(p.values))
    dt = time.perf_counter() - t0
    ok = not mismatches and dt < 600
    assert criterion(
        6, ok, f"{len(points)} grid points + {extra} random p, {len(mismatches)} mismatches, {dt:.0f} s < 600 s"
    )


def test_07_identity_coupling_reduction(criterion):
    ident = EVector(HALF, HALF, HALF, HALF)
    grid = [F(k, 40) for k in range(21)]
    n = agree = 0
    for v in itertools.product(grid, repeat=4):
        p = PVector(*v)
        n += 1
        agree += elfp_member(p, ident) == bell_chsh(p)
    assert criterion(7, agree == n == 21**4, f"{agree}/{n} grid points agree")


def test_08_tsirelson_saturation(criterion):
    cfg = AngleConfig(0, np.pi / 2, np.pi / 4, -np.pi / 4)
    err = abs(chsh_value(cfg) - 2 * np.sqrt(2))
    p = pvector_from_angles(cfg)
    exact = isinstance(p, PVector)
    on_boundary = exact and (1 + SQRT2) / 2 in bell_combinations(p)
    ok = err < 1e-12 and exact and cirelson(p) and on_boundary and not bell_chsh(p)
    assert criterion(
        8,
        ok,
        f"|chsh - 2sqrt2| = {err:.1e}, cirelson={cirelson(p)}, combination (1+sqrt2)/2 attained={on_boundary}, "
        f"bell={bell_chsh(p)}",
    )


def _monte_carlo_all(n, seed=9, chunk=10**6):
    """Fractions of uniform points of [0,1/2]^8 in All_class, All_quant and
    All_chaos, from the closed-form membership test."""
    rng = np.random.default_rng(seed)
    signs = np.array(list(itertools.product((1, -1), repeat=4)), dtype=float)
    even = (signs > 0).sum(axis=1) % 2 == 0
    hits = np.zeros(3, dtype=np.int64)
    done = 0
    while done < n:
        m = min(chunk, n - done)
        x = rng.random((m, 8)) * 0.5
        sp = (x[:, :4] - 0.25) @ signs.T
        se = (x[:, 4:] - 0.25) @ signs.T
        sp0, sp1 = sp[:, even].max(axis=1), sp[:, ~even].max(axis=1)
        se0, se1 = se[:, even].max(axis=1), se[:, ~even].max(axis=1)
        chaos = np.maximum(sp0 + se1, sp1 + se0) <= 1.5
        hits += (chaos & (sp1 <= 0.5)).sum(), (chaos & (sp1 <= np.sqrt(2) / 2)).sum(), chaos.sum()
        done += m
    return hits / n


def test_09_volume_sanity(criterion):
    t0 = time.perf_counter()
    exact = {
        "class": normalized_volume(all_set(CONSTRAINTS["class"])),
        "quant": normalized_volume(all_set(CONSTRAINTS["quant"])),
        "chaos": normalized_volume(all_set(CONSTRAINTS["chaos"])),
    }
    golden = golden_volumes()
    matches_golden = all(exact[k] == golden[k]["vol8_all"] for k in exact)
    ordered = exact["class"] <= exact["quant"] <= exact["chaos"]
    n = 10**7
    est = dict(zip(("class", "quant", "chaos"), _monte_carlo_all(n)))
    z = {}
    for k, v in exact.items():
        f = float(v)
        sigma = (f * (1 - f) / n) ** 0.5
        z[k] = abs(est[k] - f) / sigma
    dt = time.perf_counter() - t0
    ok = ordered and matches_golden and all(zk <= 3 for zk in z.values())
    detail = ", ".join(f"{k} {to_decimal(exact[k], 6)} (MC {est[k]:.6f}, {z[k]:.2f} sigma)" for k in exact)
    assert criterion(9, ok, f"{detail}; ordered={ordered}, golden={matches_golden}, {dt:.0f} s")


def test_10_delta_sweep(criterion):
    quant = CONSTRAINTS["quant"]
    t0 = time.perf_counter()
    symbolic = force_violation(quant)
    sweep = [(F(1, 10**k), force_violation(quant, F(1, 10**k))) for k in (3, 4, 5, 6)]
    last_two = rhs_extrapolation(symbolic, sweep[-2:])
    whole = rhs_extrapolation(symbolic, sweep)
    # the delta-force sets shrink towards the symbolic one from above
    cube = pt.HRep.cube(4)
    smallest = pt.region_complement(sweep[-1][1], cube)
    force_sym = pt.region_complement(symbolic, cube)
    nested = pt.region_subset(force_sym, smallest)
    literal = sweep[-1][1].canonical() == sweep[-2][1].canonical()
    dt = time.perf_counter() - t0
    ok = last_two and whole and nested and pt.region_equal(force_sym, closed_form(quant, "force"))
    assert criterion(
        10,
        ok,
        f"two smallest delta extrapolate to symbolic={last_two}, whole sweep={whole}, "
        f"symbolic force inside delta force={nested}, rhs literally equal across delta={literal}, {dt:.0f} s",
    )


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-s", "-q"]))
