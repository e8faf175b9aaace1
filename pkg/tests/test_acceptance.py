"""End-to-end acceptance criteria, one test per criterion.

Each test records its outcome; the pass/fail lines are printed in the
terminal summary of the pytest run."""

import math
import time

import numpy as np

from conftest import ACCEPTANCE
from liesym.cases import ALL_CASE_IDS, ParamCase
from liesym.cli import main
from liesym.determining import build_determining_system, check_candidate, heat_family
from liesym.flows import (
    SolutionFn,
    cataloged_flows,
    closed_form_flow,
    integrate_flow,
    residual_sweep,
    transform_solution,
)
from liesym.generators import basis_for, heat_basis
from liesym.jet import VectorField
from liesym.liealg import (
    case_structure,
    check_morphism,
    commutator_table,
    find_isomorphism,
    inclusion_check,
    table_diff,
)
from liesym.symexpr import parse


def record(number, passed, detail):
    ACCEPTANCE[number] = (bool(passed), detail)
    print(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")
    assert passed, detail


def test_criterion_1_heat_fixture():
    start = time.perf_counter()
    system = build_determining_system(heat_family())
    basis = heat_basis()
    generators_ok = all(check_candidate(v, system).symbolic_pass for v in basis)
    rng = np.random.default_rng(11)
    bumps = ["x", "x^2", "t*x", "t^2", "x*t^2", "exp(t)", "x^3"]
    rejected = 0
    for _ in range(20):
        v = basis[int(rng.integers(6))]
        bump = parse(bumps[int(rng.integers(len(bumps)))]) * parse(str(int(rng.integers(1, 4))))
        slot = int(rng.integers(3))
        w = VectorField(v.xi + bump if slot == 0 else v.xi, v.gamma,
                        v.tau + bump if slot == 1 else v.tau,
                        v.phi + bump * parse("u^2") if slot == 2 else v.phi)
        rejected += not check_candidate(w, system).passed
    elapsed = time.perf_counter() - start
    record(1, generators_ok and rejected == 20 and elapsed < 5,
           f"6/6 generators pass: {generators_ok}, perturbed fields rejected: {rejected}/20, {elapsed:.2f} s")


DIMENSIONS = {
    "1.1": 6, "1.2": 9, "1.3": 9, "1.4": 9,
    "2.1": 2, "2.2": 4, "2.3": 4, "2.4": 4,
    "3.1": 4, "3.2": 6, "3.3": 6, "3.4": 6,
    "4.1": 4, "4.2": 6, "4.3": 6, "4.4": 6,
}


def test_criterion_2_dimensions():
    got = {c: basis_for(ParamCase.from_id(c)).dimension for c in ALL_CASE_IDS}
    bad = {c: d for c, d in got.items() if d != DIMENSIONS[c]}
    record(2, not bad, f"16 cases, mismatches: {bad or 'none'}")


def test_criterion_3_round_trip(capsys):
    system = build_determining_system()
    worst, failures, fields = 0.0, [], 0
    for cid in ALL_CASE_IDS:
        case = ParamCase.from_id(cid)
        for i, v in enumerate(basis_for(case)):
            verdict = check_candidate(v, system, case, n_points=128)
            fields += 1
            worst = max(worst, verdict.numeric_max_residual)
            if not verdict.symbolic_pass or verdict.numeric_max_residual >= 1e-10:
                failures.append(f"{cid} v{i + 1}")
    start = time.perf_counter()
    code = main(["verify", "--all"])
    elapsed = time.perf_counter() - start
    capsys.readouterr()
    record(3, not failures and code == 0 and elapsed < 60,
           f"{fields} fields, failures: {failures or 'none'}, numeric max {worst:.1e}, "
           f"verify --all exit {code} in {elapsed:.1f} s")


# transcription inconsistencies in the published tables, by case
LOGGED_DIFFS = {
    "1.1": {("v1", "v3"), ("v1", "v4"), ("v1", "v5"), ("v1", "v6"),
            ("v3", "v4"), ("v3", "v5"), ("v4", "v6"), ("v5", "v6")},
    "1.3": {("v4", "v7")},
    "1.4": {("v1", "v3")},
    "2.3": {("v1", "v2"), ("v2", "v3")},
    "4.4": {("v1", "v3")},
}


def test_criterion_4_closure():
    problems = []
    ndiff = 0
    for cid in ALL_CASE_IDS:
        sc = commutator_table(basis_for(cid))
        if not (sc.check_antisymmetry() and sc.check_jacobi()):
            problems.append(f"{cid} constants")
        diffs = {(d["row"], d["column"]) for d in table_diff(cid)}
        ndiff += len(diffs)
        if diffs != LOGGED_DIFFS.get(cid, set()):
            problems.append(f"{cid} diff {sorted(diffs)}")
    record(4, not problems, f"16 tables closed exactly, {ndiff} logged transcription diffs, "
                            f"problems: {problems or 'none'}")


def test_criterion_5_structure():
    expected = {
        "2.1": "abelian_n",
        **{c: "sl2_x_R" for c in ("2.2", "2.3", "2.4")},
        **{c: "sl2_semidirect_h3" for c in ("3.2", "3.3", "3.4", "4.2", "4.3", "4.4")},
    }
    problems = []
    for cid, name in expected.items():
        r = case_structure(cid)
        if r.matched != name or not r.witness_verified:
            problems.append(cid)
    if case_structure("2.1").dimension != 2:
        problems.append("2.1 dimension")
    for cid in ("3.1", "4.1"):
        q = case_structure(cid).center_quotient
        if q is None or q.matched != "iso2" or not q.witness_verified:
            problems.append(f"{cid} center quotient")
    for cid in ("1.2", "1.3", "1.4"):
        r = case_structure(cid)
        q = r.radical_quotient
        if r.radical_dim != 6 or q is None or q.matched != "sl2" or not q.witness_verified:
            problems.append(f"{cid} sl2 quotient")
    record(5, not problems, f"13 cases identified with verified witnesses, problems: {problems or 'none'}")


def test_criterion_6_isomorphism_grid():
    groups = [["2.2", "2.3", "2.4"], ["3.2", "3.3", "3.4", "4.2", "4.3", "4.4"], ["3.1", "4.1"],
              ["1.2", "1.3", "1.4"]]
    table = lambda c: commutator_table(basis_for(c).numeric())
    problems, witnesses = [], 0
    for group in groups:
        first = table(group[0])
        for other in group[1:]:
            sc = table(other)
            images = find_isomorphism(first, sc)
            if images is None or not check_morphism(images, first, sc):
                problems.append(f"{group[0]}~{other}")
            witnesses += 1
    inclusions = 0
    for i in (3, 4):
        for j in (1, 2, 3, 4):
            small, mid, large = (basis_for(c) for c in (f"2.{j}", f"{i}.{j}", f"1.{j}"))
            for a, b in ((small, mid), (mid, large)):
                inclusions += 1
                if not inclusion_check(a, b):
                    problems.append(f"{a.case.case_id}<{b.case.case_id}")
    record(6, not problems, f"{witnesses} witness morphisms, {inclusions} inclusions, "
                            f"problems: {problems or 'none'}")


def _relative(a, b):
    return max(float(np.max(np.abs(p - q) / np.maximum(1.0, np.abs(p)))) for p, q in zip(a, b))


def test_criterion_7_flows():
    start = time.perf_counter()
    worst_rk4 = worst_group = 0.0
    flows = cataloged_flows()
    for n, (cid, index) in enumerate(flows):
        flow = closed_form_flow(cid, index)
        rng = np.random.default_rng(n)
        pts = []
        while len(pts) < 50:
            x, y = rng.uniform(0.5, 3.0, 2)
            t, u, eps = rng.uniform(-1, 1), rng.uniform(0.5, 2.0), rng.uniform(-0.15, 0.15)
            if flow.valid((x, y, t, u), eps) and flow.valid((x, y, t, u), 2 * eps):
                pts.append((x, y, t, u, eps))
        x, y, t, u, eps = np.array(pts).T
        v, pos = flow.generator, flow.positive
        rk4 = integrate_flow(v, (x, y, t, u), eps, positive=pos)
        worst_rk4 = max(worst_rk4, _relative(flow((x, y, t, u), eps), rk4))
        two = integrate_flow(v, integrate_flow(v, (x, y, t, u), eps / 2, positive=pos), eps / 3, positive=pos)
        worst_group = max(worst_group, _relative(two, integrate_flow(v, (x, y, t, u), 5 * eps / 6,
                                                                     positive=pos)))
    elapsed = time.perf_counter() - start
    record(7, worst_rk4 < 1e-7 and worst_group < 1e-7 and elapsed < 30,
           f"{len(flows)} flows x 50 samples, RK4 vs closed form {worst_rk4:.1e}, "
           f"group law {worst_group:.1e}, {elapsed:.1f} s")


def test_criterion_8_transport():
    worst, bad = 0.0, []
    count = 0
    for cid, index in cataloged_flows():
        if cid == "heat":
            continue
        report = residual_sweep(cid, index, 0.05, n=10, bounds=((0.5, 5), (0.5, 5), (-1, 1)), tol=1e-5)
        count += 1
        worst = max(worst, report["max_residual"])
        if report["violations"]:
            bad.append(f"{cid} v{index}")
    record(8, not bad, f"{count} transformed solutions on a 10x10x10 grid, max residual {worst:.1e}, "
                       f"failures: {bad or 'none'}")


def test_criterion_9_heat_kernel():
    eps = math.pi
    u = transform_solution(closed_form_flow("heat", 6), SolutionFn.one(), eps).shifted(-1 / (4 * eps))
    rng = np.random.default_rng(5)
    x, t = rng.uniform(-3, 3, 100), rng.uniform(0.2, 3, 100)
    kernel = np.exp(-x * x / (4 * t)) / np.sqrt(4 * np.pi * t)
    err = float(np.max(np.abs(u(x, 0 * x, t) - kernel)))
    at_one = float(u(1.0, 0.0, 1.0))
    record(9, err < 1e-8, f"100 points, max error {err:.1e}, u(1, 1) = {at_one:.10f}")
