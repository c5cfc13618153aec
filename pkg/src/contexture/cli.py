"""``contexture`` command line.

Exit status is 0 whenever a command ran (PASS/FAIL verdicts are in the
payload), 2 for bad input and 3 when an internal consistency check fails.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from importlib import resources

from . import context_data as cd
from . import context_sets as cs
from .context_data import ConstraintKind, EVector, FactorialSystem, PVector, ProbabilityError
from .jdc import build_jdc
from .linsolve import feasible
from .polytope import HRep
from .quantum import FLOAT_TOL, AngleConfig, chsh_value, parse_angle, pvector_from_angles
from .scalar import format_scalar, parse_scalar, sqrt2, to_decimal

SWEEP = tuple(Fraction(1, 10**k) for k in (3, 4, 5, 6))


class InputError(Exception):
    pass


def _scalar(x) -> dict:
    return {"exact": format_scalar(x), "decimal": to_decimal(x)}


def _bundled(name: str):
    path = resources.files("contexture.data").joinpath(f"{name}.json")
    if not path.is_file():
        return None
    return json.loads(path.read_text())


def _load_json(ref: str):
    """A JSON file, or a bundled data file by name (``eq5`` or ``eq5.json``).
    An existing local file takes precedence."""
    if not os.path.exists(ref) and "/" not in ref:
        data = _bundled(ref[:-5] if ref.endswith(".json") else ref)
        if data is not None:
            return data
    try:
        with open(ref) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {ref}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{ref} is not valid JSON: {exc}") from None


def _pvector(text: str) -> PVector:
    if "," not in text:
        data = _load_json(text)
        if data.get("kind") != "pvector":
            raise InputError(f"--p: {text} does not hold a p vector")
        return PVector.from_json(data["p"])
    return PVector.parse(text)


def _system(ref: str) -> FactorialSystem:
    return FactorialSystem.from_json(_load_json(ref))


def _root2(args):
    if getattr(args, "sqrt2", None) is None:
        return None
    try:
        return Fraction(args.sqrt2)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"--sqrt2: malformed rational {args.sqrt2!r}") from None


def _emit(payload, args):
    text = json.dumps(payload, indent=1) + "\n"
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# check
# ---------------------------------------------------------------------------


def _items(values, names, lo, hi):
    out = []
    for name, v in zip(names, values):
        out.append({"name": name, "value": _scalar(v), "lower": format_scalar(lo), "upper": format_scalar(hi), "pass": bool(lo <= v <= hi)})
    return out


P_COMBOS = (
    "-p11+p12+p21+p22",
    "p11-p12+p21+p22",
    "p11+p12-p21+p22",
    "p11+p12+p21-p22",
)
E_COMBOS = ("-E11+E12+E21+E22", "E11-E12+E21+E22", "E11+E12-E21+E22", "E11+E12+E21-E22")


def cmd_check(args):
    which = args.which
    report = {"schema": "contexture/1", "kind": "check_report", "which": which}
    if which == "bell-general":
        if not args.system:
            raise InputError("--which bell-general needs --system")
        system = _system(args.system)
        items = _items(cd.chsh_combinations(system), E_COMBOS, Fraction(-2), Fraction(2))
        ms = cd.marginal_selectivity(system)
        report["marginal_selectivity"] = ms
        report["items"] = items
        report["verdict"] = "PASS" if ms and all(i["pass"] for i in items) else "FAIL"
        return report
    if not args.p:
        raise InputError(f"--which {which} needs --p")
    p = _pvector(args.p)
    report["p"] = p.to_json()
    combos = cd.bell_combinations(p)
    if which == "bell":
        items = _items(combos, P_COMBOS, Fraction(0), Fraction(1))
    elif which == "cirelson":
        r = sqrt2(_root2(args))
        items = _items(combos, P_COMBOS, (1 - r) / 2, (1 + r) / 2)
    elif which == "chaos":
        items = _items(combos, P_COMBOS, Fraction(-1, 2), Fraction(3, 2))
    else:
        if not args.eps:
            raise InputError("--which elfp needs --eps")
        e = EVector.parse(args.eps)
        report["eps"] = e.to_json()
        sp, se = cd.s_split(p), cd.s_split(e)
        report["s_sets"] = {
            "maxS0p": _scalar(sp.max_s0),
            "maxS1p": _scalar(sp.max_s1),
            "maxS0e": _scalar(se.max_s0),
            "maxS1e": _scalar(se.max_s1),
        }
        bound = Fraction(3, 2)
        items = [
            {"name": "maxS0p+maxS1e", "value": _scalar(sp.max_s0 + se.max_s1), "upper": "3/2", "pass": sp.max_s0 + se.max_s1 <= bound},
            {"name": "maxS1p+maxS0e", "value": _scalar(sp.max_s1 + se.max_s0), "upper": "3/2", "pass": sp.max_s1 + se.max_s0 <= bound},
        ]
        report["value"] = _scalar(cd.elfp_value(p, e))
    report["items"] = items
    report["verdict"] = "PASS" if all(i["pass"] for i in items) else "FAIL"
    return report


# ---------------------------------------------------------------------------
# jdc
# ---------------------------------------------------------------------------


def cmd_jdc(args):
    system = _system(args.system)
    problem = build_jdc(system)
    answer = feasible(problem, method=args.method)
    if not answer.verify(problem):
        raise AssertionError("certificate failed verification")
    cert = answer.to_json()
    if args.certificate:
        with open(args.certificate, "w") as fh:
            json.dump(cert, fh, indent=1)
            fh.write("\n")
    if args.matrix:
        with open(args.matrix, "w") as fh:
            json.dump(problem.to_sparse_json(), fh)
            fh.write("\n")
    return {
        "schema": "contexture/1",
        "kind": "jdc_report",
        "verdict": "feasible" if answer.feasible else "infeasible",
        "marginal_selectivity": cd.marginal_selectivity(system),
        "chsh_combinations": [_scalar(v) for v in cd.chsh_combinations(system)],
        "certificate": cert,
    }


# ---------------------------------------------------------------------------
# sets
# ---------------------------------------------------------------------------


def _constraint(args) -> ConstraintKind:
    spec = args.constraint
    if spec.startswith("fix"):
        text = spec[4:] if spec.startswith("fix:") else args.p
        if not text:
            raise InputError("fix needs a p vector (fix:<p> or --p)")
        return ConstraintKind.fix(_pvector(text))
    if spec.startswith("custom"):
        ref = spec[7:] if spec.startswith("custom:") else args.hrep
        if not ref:
            raise InputError("custom needs an H-representation file (custom:<file> or --hrep)")
        try:
            return ConstraintKind.from_hrep(HRep.from_json(_load_json(ref)))
        except (KeyError, ValueError) as exc:
            raise InputError(f"custom constraint: {exc}") from None
    if spec == "chaos":
        return ConstraintKind.chaos()
    if spec == "quant":
        return ConstraintKind.quant(_root2(args))
    if spec == "class":
        return ConstraintKind.classical()
    raise InputError(f"unknown constraint {spec!r}")


def _set_payload(kind, region, vol):
    return {"set": kind, "region": region.to_json(), "volume": _scalar(vol)}


def cmd_sets(args):
    constr = _constraint(args)
    which = args.which
    out = {"schema": "contexture/1", "kind": "sets_report", "constraint": constr.label, "which": which}
    if constr.kind == "fix" and which in ("force", "equi"):
        out["empty"] = True
        out["note"] = "Force and Equi are empty for a fixed p"
        out["volume"] = _scalar(Fraction(0))
        return out
    if which == "profile":
        prof = cs.profile(constr)
        if args.format == "csv":
            return cs.profiles_csv([prof])
        out["profile"] = prof.to_json()
        return out
    if which == "all":
        region = cs.all_set(constr)
    elif which == "fit":
        region = cs.fit_set(constr)
        if constr.kind == "fix":
            b1, b0 = cd.fit_fix_bounds(constr.p)
            out["bounds"] = {"maxS1e": format_scalar(b1), "maxS0e": format_scalar(b0)}
    elif which == "force":
        if args.delta == "sweep":
            sym = cs.force_violation(constr)
            sweep = [(d, cs.force_violation(constr, d)) for d in SWEEP]
            out["sweep"] = [{"delta": format_scalar(d), "violation": rs.to_json()} for d, rs in sweep]
            out["converged"] = cs.rhs_extrapolation(sym, sweep[-2:])
        region = cs.force_set(constr)
    else:
        region = cs.equi_set(constr)
    out.update(_set_payload(which, region, cs.normalized_volume(region)))
    return out


def cmd_fitfix_grid(args):
    """Plot-ready (maxS0p, maxS1p, volume) samples over the attainable triangle."""
    n = args.n
    rows = ["x,y,volume_exact,volume_decimal,polynomial_exact"]
    for a in range(n + 1):
        for b in range(n + 1):
            x, y = Fraction(a, n), Fraction(b, n)
            if not cd.in_xy_triangle(x, y):
                continue
            p = cs.pvector_for_split(x, y)
            vol = cs.fit_fix_volume(p)
            poly = cd.fit_fix_volume_polynomial(x, y)
            rows.append(",".join((format_scalar(x), format_scalar(y), format_scalar(vol), to_decimal(vol), format_scalar(poly))))
    return "\n".join(rows) + "\n"


# ---------------------------------------------------------------------------
# quantum
# ---------------------------------------------------------------------------


def cmd_quantum(args):
    parts = args.angles.split(",")
    if len(parts) != 4:
        raise InputError("--angles needs alpha1,alpha2,beta1,beta2")
    try:
        cfg = AngleConfig(*(parse_angle(s) for s in parts))
    except ValueError as exc:
        raise InputError(f"--angles: {exc}") from None
    p = pvector_from_angles(cfg)
    out = {"schema": "contexture/1", "kind": "quantum_report", "chsh": chsh_value(cfg)}
    if isinstance(p, PVector):
        out["exact"] = True
        out["p"] = p.to_json()
        out["bell"] = "PASS" if cd.bell_chsh(p) else "FAIL"
        out["cirelson"] = "PASS" if cd.cirelson(p) else "FAIL"
    else:
        out["exact"] = False
        out["p"] = dict(zip(PVector._fields, p))
        combos = [sum(p) - 2 * x for x in p]
        r = 2**0.5
        out["bell"] = "PASS" if all(-FLOAT_TOL <= c <= 1 + FLOAT_TOL for c in combos) else "FAIL"
        ok = all((1 - r) / 2 - FLOAT_TOL <= c <= (1 + r) / 2 + FLOAT_TOL for c in combos)
        out["cirelson"] = "PASS" if ok else "FAIL"
    return out


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="contexture", description="Contextuality analysis of 2x2 binary systems.")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="evaluate Bell/CHSH, Cirel'son, chaos or ELFP inequalities")
    c.add_argument("--p", help="p11,p12,p21,p22 or a bundled/JSON p vector")
    c.add_argument("--eps", help="e11,e21,e12,e22")
    c.add_argument("--system", help="outcome-table JSON file or bundled name (eq5, eq6, uniform)")
    c.add_argument("--which", required=True, choices=["bell", "cirelson", "chaos", "elfp", "bell-general"])
    c.add_argument("--sqrt2", help="rational stand-in for sqrt(2)")
    c.add_argument("--output")
    c.set_defaults(func=cmd_check)

    j = sub.add_parser("jdc", help="joint distribution feasibility of an outcome-table system")
    j.add_argument("system")
    j.add_argument("--method", choices=["auto", "exact"], default="auto")
    j.add_argument("--certificate", help="write the certificate or Farkas witness here")
    j.add_argument("--matrix", help="write the system in sparse triplet JSON here")
    j.add_argument("--output")
    j.set_defaults(func=cmd_jdc)

    s = sub.add_parser("sets", help="All/Fit/Force/Equi sets and volume profiles")
    s.add_argument("constraint", help="chaos, quant, class, fix[:p] or custom[:file]")
    s.add_argument("--which", choices=["all", "fit", "force", "equi", "profile"], default="profile")
    s.add_argument("--p")
    s.add_argument("--hrep")
    s.add_argument("--delta", choices=["symbolic", "sweep"], default="symbolic")
    s.add_argument("--sqrt2", help="rational stand-in for sqrt(2)")
    s.add_argument("--format", choices=["json", "csv"], default="json")
    s.add_argument("--output")
    s.set_defaults(func=cmd_sets)

    g = sub.add_parser("fitfix-grid", help="CSV of fixed-p Fit volumes over the (maxS0p, maxS1p) triangle")
    g.add_argument("--n", type=int, default=20, help="grid step 1/n")
    g.add_argument("--output")
    g.set_defaults(func=cmd_fitfix_grid)

    q = sub.add_parser("quantum", help="singlet-state p vector for detector angles")
    q.add_argument("--angles", required=True, help="alpha1,alpha2,beta1,beta2 in radians or as k/n pi")
    q.add_argument("--output")
    q.set_defaults(func=cmd_quantum)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = args.func(args)
    except (InputError, ProbabilityError, ValueError) as exc:
        print(f"contexture: error: {exc}", file=sys.stderr)
        return 2
    except AssertionError as exc:
        print(f"contexture: internal error: {exc}", file=sys.stderr)
        return 3
    if isinstance(result, str):
        if args.output:
            with open(args.output, "w") as fh:
                fh.write(result)
        else:
            sys.stdout.write(result)
    else:
        _emit(result, args)
    return 0


if __name__ == "__main__":
    sys.exit(main())
