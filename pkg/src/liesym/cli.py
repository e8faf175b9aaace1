"""Command-line front end.

Exit codes: 0 success, 1 a verification failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from . import _catalog
from .cases import ALL_CASE_IDS, CaseError, ParamCase, classify
from .determining import build_determining_system, check_candidate, heat_family, solve_reduced
from .flows import (
    FlowError,
    SolutionFn,
    closed_form_flow,
    integrate_flow,
    residual_sweep,
    transform_solution,
)
from .generators import basis_for, heat_basis, published_basis
from .jet import VectorField
from .liealg import (
    LieAlgebraError,
    case_structure,
    commutator_table,
    published_table,
    structure_report,
    table_diff,
)
from .symexpr import ParseError, parse

SCHEMA = "liesym/1"


class UsageError(Exception):
    pass


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"malformed rational {text!r}") from None


def _positive(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError("tolerances must be positive")
    return value


# -- case selection ----------------------------------------------------------


def _case_from_args(args, allow_heat: bool = False) -> ParamCase | str:
    values = [getattr(args, k, None) for k in ("a", "b", "d", "e")]
    case_id = getattr(args, "case", None)
    if case_id == "heat":
        if not allow_heat:
            raise UsageError("this command does not support the heat fixture")
        return "heat"
    if case_id == "any":
        case_id = "1.1"
    if case_id is not None:
        try:
            case = ParamCase.from_id(case_id)
        except CaseError as exc:
            raise UsageError(str(exc)) from None
        if any(v is not None for v in values):
            sample = tuple(v if v is not None else s for v, s in zip(values, case.sample))
            try:
                case = case.with_sample(sample)
            except CaseError as exc:
                raise UsageError(str(exc)) from None
        return case
    if any(v is None for v in values):
        raise UsageError("give --case or all of --a --d --b --e")
    a, b, d, e = values
    return classify(a, d, b, e)


def _expected(case_id: str) -> tuple[str, str | None]:
    return _catalog.EXPECTED_STRUCTURE[case_id]


# -- commands ----------------------------------------------------------------


def cmd_classify(args) -> tuple[dict, str, int]:
    case = _case_from_args(args)
    basis = basis_for(case).numeric()
    report = case_structure(case, basis)
    data = {**case.as_dict(), "dimension": basis.dimension, "structure": report.matched}
    if report.center_quotient is not None:
        data["center_quotient"] = report.center_quotient.matched
    text = "\n".join([
        f"case {case.case_id} ({case.describe()})",
        f"dimension: {basis.dimension}",
        f"structure: {report.summary()}",
    ] + ([f"center quotient: {report.center_quotient.summary()}"]
         if report.center_quotient is not None and report.matched == "unknown" else []))
    return data, text, 0


def cmd_determine(args) -> tuple[dict, str, int]:
    family = heat_family() if args.heat else None
    system = build_determining_system(family)
    rows = system.to_json()
    width = max(len(m) for m in system.monomials())
    text = "\n".join(f"{m.ljust(width)}  {row['coefficient']}" for m, row in zip(system.monomials(), rows))
    return {"family": system.family.name, "rows": rows, "row_count": len(rows)}, text, 0


def cmd_basis(args) -> tuple[dict, str, int]:
    case = _case_from_args(args, allow_heat=True)
    if case == "heat":
        basis = heat_basis()
    elif args.source == "reduced":
        basis = solve_reduced(case)
    elif args.source == "published":
        basis = published_basis(case)
    else:
        basis = basis_for(case)
    lines = [f"{label}: {f}" for label, f in zip(basis.labels, basis.fields)]
    for i, note in sorted(basis.notes.items()):
        lines.append(f"note on v{i + 1}: {note}")
    data = basis.to_json()
    data["labels"] = list(basis.labels)
    data["source"] = basis.source
    return data, "\n".join([f"dimension: {basis.dimension}"] + lines), 0


def cmd_bracket_table(args) -> tuple[dict, str, int]:
    case = _case_from_args(args, allow_heat=True)
    if case == "heat":
        sc = commutator_table(heat_basis())
        return {"case_id": "heat", "table": sc.to_json()}, sc.to_text(), 0
    basis = basis_for(case)
    sc = commutator_table(basis.numeric() if args.numeric else basis)
    data = {**case.as_dict(), "table": sc.to_json(),
            "antisymmetric": sc.check_antisymmetry(), "jacobi": sc.check_jacobi()}
    text = [f"case {case.case_id}: recomputed", sc.to_text()]
    if args.paper_tables:
        theirs = published_table(case)
        diffs = table_diff(case)
        data["published_table"] = theirs.to_json()
        data["diff"] = diffs
        text += ["", "transcribed", theirs.to_text(), "", f"differences: {len(diffs)}"]
        text += [f"  [{d['row']}, {d['column']}]: transcribed {d['published']}, recomputed {d['recomputed']}"
                 for d in diffs]
    return data, "\n".join(text), 0


def cmd_structure(args) -> tuple[dict, str, int]:
    case = _case_from_args(args, allow_heat=True)
    if case == "heat":
        report = structure_report(commutator_table(heat_basis()))
        return {"case_id": "heat", **report.as_dict()}, report.to_text(), 0
    report = case_structure(case)
    return {**case.as_dict(), **report.as_dict()}, f"case {case.case_id}\n" + report.to_text(), 0


_TAMPER = VectorField(xi=parse("x"))


def _verify_case(case, args) -> dict:
    failures = []
    if case == "heat":
        basis, system, check_case = heat_basis(), build_determining_system(heat_family()), None
    else:
        basis, system, check_case = basis_for(case), build_determining_system(), case
    fields = list(zip(basis.labels, basis.fields))
    if args.tamper:
        fields.append(("tamper (x d/dx)", _TAMPER))
    worst = 0.0
    for label, v in fields:
        verdict = check_candidate(v, system, check_case, seed=args.seed)
        worst = max(worst, verdict.numeric_max_residual)
        if not verdict.symbolic_pass:
            entries = ", ".join(f.monomial for f in verdict.failures)
            failures.append(f"{label}: Lie criterion fails at {entries}")
        elif verdict.numeric_max_residual >= args.tol_sym:
            failures.append(f"{label}: numeric residual {verdict.numeric_max_residual:.3g}")
    out = {"generators": len(basis), "numeric_max_residual": worst}
    try:
        sc = commutator_table(basis)
        closed = sc.check_antisymmetry() and sc.check_jacobi()
        if not closed:
            failures.append("structure constants violate antisymmetry or Jacobi")
    except LieAlgebraError as exc:
        failures.append(f"closure: {exc}")
        sc = None
    if sc is not None:
        if case == "heat":
            report = structure_report(sc)
            expected = ("sl2_semidirect_h3", None)
        else:
            report = case_structure(case)
            expected = _expected(case.case_id)
        got = (report.matched, report.center_quotient.matched if expected[1] else None)
        out["structure"] = report.matched
        if got != expected:
            failures.append(f"structure {got} differs from expected {expected}")
    if args.flows and case != "heat":
        worst_fd = 0.0
        for i in range(1, len(basis) + 1):
            try:
                sweep = residual_sweep(case, i, 0.05, tol=args.tol_fd)
            except FlowError as exc:
                failures.append(f"flow v{i}: {exc}")
                continue
            worst_fd = max(worst_fd, sweep["max_residual"])
            if sweep["violations"]:
                failures.append(f"flow v{i}: residual {sweep['max_residual']:.3g}")
        out["flow_max_residual"] = worst_fd
    out["failures"] = failures
    out["passed"] = not failures
    return out


def cmd_verify(args) -> tuple[dict, str, int]:
    if args.all:
        cases = [ParamCase.from_id(cid) for cid in ALL_CASE_IDS]
    else:
        cases = [_case_from_args(args, allow_heat=True)]
    results, lines = {}, []
    for case in cases:
        cid = "heat" if case == "heat" else case.case_id
        res = _verify_case(case, args)
        results[cid] = res
        status = "pass" if res["passed"] else "FAIL"
        lines.append(f"{cid}: {status} ({res['generators']} generators, "
                     f"numeric residual {res['numeric_max_residual']:.2g})")
        lines += [f"  {f}" for f in res["failures"]]
    passed = sum(r["passed"] for r in results.values())
    lines.append(f"{passed}/{len(results)} cases pass")
    ok = passed == len(results)
    return {"cases": results, "passed": passed, "total": len(results)}, "\n".join(lines), 0 if ok else 1


def _point(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed point {text!r}") from None
    if len(values) != 4:
        raise argparse.ArgumentTypeError("a point is x,y,t,u")
    return values


def cmd_flow(args) -> tuple[dict, str, int]:
    case = _case_from_args(args, allow_heat=True)
    flow = closed_form_flow(case, args.gen)
    point = args.point
    if not flow.valid(point, args.eps):
        raise UsageError("point and eps lie outside the validity domain of the flow")
    closed = tuple(float(v) for v in flow(point, args.eps))
    rk4 = integrate_flow(flow.generator, point, args.eps, positive=flow.positive)
    diff = max(abs(a - b) for a, b in zip(closed, rk4))
    data = {"case_id": getattr(case, "case_id", case), "generator": flow.label, "kind": flow.kind,
            "eps": args.eps, "point": list(point), "closed_form": list(closed), "rk4": list(rk4),
            "max_difference": diff}
    text = "\n".join([
        flow.describe(),
        "closed form: " + ", ".join(f"{v:.12g}" for v in closed),
        "rk4:         " + ", ".join(f"{v:.12g}" for v in rk4),
        f"max difference: {diff:.3g}",
    ])
    return data, text, 0


def _heat_kernel(x, t):
    return np.exp(-x * x / (4 * t)) / np.sqrt(4 * np.pi * t)


def cmd_transform(args) -> tuple[dict, str, int]:
    case = _case_from_args(args, allow_heat=True)
    if args.solution == "one":
        solution = SolutionFn.one()
    else:
        try:
            params = None if case == "heat" else case.sample_map
            solution = SolutionFn.from_expr(args.solution, params)
        except ParseError as exc:
            raise UsageError(f"cannot parse solution: {exc}") from None
    shift = -1 / (4 * args.eps) if args.shift_t else 0.0
    bounds = ((-2.0, 2.0), (0.0, 0.0), (0.5, 2.0)) if case == "heat" else \
        ((0.5, 5.0), (0.5, 5.0), (-1.0, 1.0))
    try:
        report = residual_sweep(case, args.gen, args.eps, solution, n=args.grid, bounds=bounds,
                                tol=args.tol_fd, shift_t=shift)
    except FlowError as exc:
        return {"error": str(exc)}, f"error: {exc}", 1
    text = [f"{report['case_id']} {report['generator']} ({report['kind']}), eps = {args.eps:g}",
            f"max residual:  {report['max_residual']:.3e}",
            f"mean residual: {report['mean_residual']:.3e}"]
    if case == "heat" and args.shift_t:
        # u-scaling by sqrt(eps/pi) turns the shifted image of u = 1 into the unit-mass kernel
        flow = closed_form_flow("heat", args.gen)
        u = transform_solution(flow, solution, args.eps).shifted(shift)
        scale = np.sqrt(abs(args.eps) / np.pi)
        xs, ts = np.meshgrid(np.linspace(-2, 2, 21), np.linspace(0.5, 2, 16))
        err = np.max(np.abs(scale * u(xs, 0.0 * xs, ts) - _heat_kernel(xs, ts)))
        value = float(scale * u(1.0, 0.0, 1.0))
        report["value_at_x1_t1"] = value
        report["kernel_at_x1_t1"] = float(_heat_kernel(1.0, 1.0))
        report["kernel_max_error"] = float(err)
        text.append(f"sqrt(eps/pi) * u(x=1, t=1) = {value:.10f}  (heat kernel {report['kernel_at_x1_t1']:.10f})")
        text.append(f"max deviation from the heat kernel: {err:.2e}")
    for p in report["violations"]:
        text.append(f"violation at {p}")
    return report, "\n".join(text), 1 if report["violations"] else 0


# -- parser ------------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol-sym", type=_positive, default=1e-10,
                        help="bound on the numeric cross-check of symbolic checks")
    common.add_argument("--tol-fd", type=_positive, default=1e-5,
                        help="bound on finite-difference PDE residuals")
    common.add_argument("--out", help="write the output to this file")

    params = argparse.ArgumentParser(add_help=False)
    params.add_argument("--case", help="case id such as 3.2, or 'heat'")
    for name in ("a", "b", "d", "e"):
        params.add_argument(f"--{name}", type=_rational, help="rational such as 1/4")

    parser = argparse.ArgumentParser(prog="liesym", description="Lie point symmetries of a two-factor "
                                     "Kolmogorov backward equation.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("classify", parents=[common, params], help="case, dimension and structure")
    p = sub.add_parser("determine", parents=[common], help="dump the determining system")
    p.add_argument("--heat", action="store_true", help="use the heat equation instead")
    p = sub.add_parser("basis", parents=[common, params], help="generator basis of a case")
    p.add_argument("--source", choices=("catalog", "reduced", "published"), default="catalog")
    p = sub.add_parser("bracket-table", parents=[common, params], help="commutator table")
    p.add_argument("--paper-tables", action="store_true",
                   help="also print the transcribed table and the entry-wise differences")
    p.add_argument("--numeric", action="store_true", help="evaluate at the case sample")
    sub.add_parser("structure", parents=[common, params], help="structure report with witness maps")
    p = sub.add_parser("verify", parents=[common, params], help="verify generators and structure")
    p.add_argument("--all", action="store_true", help="all sixteen cases")
    p.add_argument("--tamper", action="store_true", help="add x d/dx, which must be rejected")
    p.add_argument("--flows", action="store_true", help="also sweep transformed-solution residuals")
    p = sub.add_parser("flow", parents=[common, params], help="closed form against RK4 at a point")
    p.add_argument("--gen", required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--point", type=_point, default=(1.0, 1.0, 0.0, 1.0), help="x,y,t,u")
    p = sub.add_parser("transform", parents=[common, params], help="residual sweep of u^{eps,v}")
    p.add_argument("--gen", required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--solution", default="one", help="'one' or an expression in x, y, t")
    p.add_argument("--shift-t", action="store_true", help="evaluate at t - 1/(4 eps) (heat kernel)")
    p.add_argument("--grid", type=int, default=10)
    return parser


_COMMANDS = {
    "classify": cmd_classify,
    "determine": cmd_determine,
    "basis": cmd_basis,
    "bracket-table": cmd_bracket_table,
    "structure": cmd_structure,
    "verify": cmd_verify,
    "flow": cmd_flow,
    "transform": cmd_transform,
}


def main(argv: list[str] | None = None) -> int:
    parser = _parser()
    args = parser.parse_args(argv)
    try:
        data, text, code = _COMMANDS[args.command](args)
    except (UsageError, CaseError, FlowError) as exc:
        print(f"liesym: error: {exc}", file=sys.stderr)
        return 2
    if args.format == "json":
        output = json.dumps({"schema": SCHEMA, "command": args.command, **data}, indent=2, sort_keys=True,
                            default=str)
    else:
        output = text
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(output + "\n")
    else:
        print(output)
    return code


if __name__ == "__main__":
    sys.exit(main())
