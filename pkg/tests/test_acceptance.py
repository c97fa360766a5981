"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

The lines are also repeated in the terminal summary (see conftest.py).
"""
import itertools
import time
from dataclasses import replace

import pytest

from corpus import hrq_corpus, restricted_formulas, scdc_corpus, set_cover_instances, shuffled_master_list
from oracles import all_outcomes, has_cover, naive_min_to_max, satisfying_assignments, scdc_feasible, scdc_stable
from quotamatch import (
    Matching,
    SearchStatus,
    augment_with_null,
    check_fair_by_master_list,
    check_feasible_hrq,
    check_feasible_scdc,
    eliminate_min_quotas,
    enumerate_feasible,
    find_stable,
    find_waste,
    gadget_from_3sat,
    gadget_from_set_cover,
    is_stable_hrq,
    is_stable_scdc,
    lift_matching,
    outcome_from_assignment,
    reduce_scdc_to_hrq,
    sd_school_choice,
)
from quotamatch.io import dumps
from quotamatch.reductions import GadgetNames, variable_outcome

RESULTS: dict[int, str] = {}


def report(n: int, status: str, detail: str) -> None:
    line = f"criterion {n}: {status} - {detail}"
    RESULTS[n] = line
    print(line)


def verdict(n: int, ok: bool, detail: str, elapsed: float, limit: float) -> None:
    in_time = elapsed < limit
    report(n, "PASS" if ok and in_time else "FAIL", f"{detail}; {elapsed:.2f}s (limit {limit:g}s)")
    assert ok, detail
    assert in_time, f"took {elapsed:.2f}s, limit {limit}s"


def test_criterion_1_golden_reduction(example1, data_dir):
    start = time.perf_counter()
    hrq, _ = reduce_scdc_to_hrq(example1)
    produced = dumps(hrq).encode()
    elapsed = time.perf_counter() - start
    golden = (data_dir / "example1.hrq.json").read_bytes()
    caps = sorted(h.capacity for h in hrq.hospitals.values())
    quotas = [(r.max_quota, r.min_quota) for r in hrq.regions]
    ok = produced == golden and caps == [2, 2, 2, 2] and quotas == [(2, 0), (1, 1), (1, 0)]
    verdict(1, ok, f"byte-identical to golden file: {produced == golden}", elapsed, 1)


def test_criterion_2_reduction_equivalence():
    start = time.perf_counter()
    outcomes = feas_bad = stab_bad = cross_bad = checked = 0
    for _, inst in scdc_corpus(500):
        hrq, rmap = reduce_scdc_to_hrq(inst)
        for pairs in all_outcomes(inst):
            x = Matching(pairs)
            y = lift_matching(rmap, x)
            outcomes += 1
            f_scdc = check_feasible_scdc(inst, x).feasible
            f_hrq = check_feasible_hrq(hrq, y).feasible
            feas_bad += f_scdc != f_hrq
            if f_scdc and f_hrq:
                checked += 1
                s_scdc = is_stable_scdc(inst, x)
                stab_bad += s_scdc != is_stable_hrq(hrq, y)
                cross_bad += s_scdc != is_stable_hrq(hrq, y, cross_hospital=True)
    elapsed = time.perf_counter() - start
    detail = (f"{outcomes} outcomes, feasibility mismatches {feas_bad}, "
              f"stability mismatches {stab_bad} of {checked} feasible "
              f"(cross-hospital displacement: {cross_bad})")
    verdict(2, feas_bad == 0 and stab_bad == 0, detail, elapsed, 300)


def test_criterion_3_min_quota_transform(example2):
    start = time.perf_counter()
    outcomes = bad = unreachable = 0
    for _, inst in hrq_corpus(500):
        if any(r.min_quota > len(inst.doctors) for r in inst.regions):
            # the transform refuses; the original must have no feasible outcome
            unreachable += 1
            bad += any(check_feasible_hrq(inst, Matching(y)).feasible for y in all_outcomes(inst))
            continue
        plus, h0 = eliminate_min_quotas(inst)
        for pairs in all_outcomes(inst):
            y = Matching(pairs)
            outcomes += 1
            bad += (check_feasible_hrq(inst, y).feasible
                    != check_feasible_hrq(plus, augment_with_null(plus, y, h0)).feasible)
    plus, h0 = eliminate_min_quotas(example2)
    empty = Matching()
    regression = (not check_feasible_hrq(example2, empty).feasible
                  and not check_feasible_hrq(plus, augment_with_null(plus, empty, h0)).feasible
                  and check_feasible_hrq(naive_min_to_max(example2), empty).feasible)
    elapsed = time.perf_counter() - start
    detail = (f"{outcomes} outcomes, mismatches {bad}, refused instances {unreachable}; "
              f"two-region regression reproduced: {regression}")
    verdict(3, bad == 0 and regression, detail, elapsed, 300)


def test_criterion_4_set_cover():
    start = time.perf_counter()
    count = bad = 0
    for sc in set_cover_instances(max_universe=4, max_family=5):
        count += 1
        gadget_has = next(iter(enumerate_feasible(gadget_from_set_cover(sc))), None) is not None
        bad += gadget_has != has_cover(sc.universe, sc.family, sc.budget)
    elapsed = time.perf_counter() - start
    verdict(4, bad == 0, f"{count} instances, mismatches {bad}", elapsed, 120)


def gadget_violations(formula, x: Matching) -> list[str]:
    names = GadgetNames(formula)
    problems = []
    for v in formula.variables:
        part = x.restricted_to(names.variable_students(v))
        if part not in (variable_outcome(names, v, True), variable_outcome(names, v, False)):
            problems.append(f"{v}: pattern")
        for lit in ("t1", "t2", "f1", "f2"):
            sid = names.student(v, lit)
            top_two = (names.school(v, "c" + lit), names.link(v, lit))
            if x.assignment(sid) not in top_two:
                problems.append(f"{v}: {lit} outside its first two choices")
        t1 = (names.student(v, "t1"), names.school(v, "ct1")) in x
        f1 = (names.student(v, "f1"), names.school(v, "cf1")) in x
        if t1 == f1:
            problems.append(f"{v}: exclusivity")
        if t1 and (names.student(v, "t2"), names.school(v, "ct2")) not in x:
            problems.append(f"{v}: t pairing")
        if f1 and (names.student(v, "f2"), names.school(v, "cf2")) not in x:
            problems.append(f"{v}: f pairing")
    return problems


def test_criterion_5_sat_forward():
    start = time.perf_counter()
    formulas = [f for f in restricted_formulas(3, seed=5)
                if next(satisfying_assignments(f), None) is not None][:20]
    checked, problems = 0, []
    for f in formulas:
        gadget = gadget_from_3sat(f)
        for alpha in satisfying_assignments(f):
            x = outcome_from_assignment(f, gadget, alpha)
            checked += 1
            if not check_feasible_scdc(gadget, x).feasible or not is_stable_scdc(gadget, x):
                problems.append("not feasible and stable")
            problems += gadget_violations(f, x)
    # the patterns hold for every stable outcome, including ones the search finds
    for f in formulas[:5]:
        found = find_stable(gadget_from_3sat(f), "first")
        problems += gadget_violations(f, found.matching)
    elapsed = time.perf_counter() - start
    detail = f"{len(formulas)} formulas, {checked} assignments, problems {len(problems)}"
    verdict(5, len(formulas) >= 20 and not problems, detail, elapsed, 60)


def test_criterion_6_sat_reverse():
    start = time.perf_counter()
    unsat = [f for f in restricted_formulas(3, seed=7)
             if next(satisfying_assignments(f), None) is None]
    statuses = [find_stable(gadget_from_3sat(f), "exists").status for f in unsat]
    elapsed = time.perf_counter() - start
    counts = {s.value: statuses.count(s) for s in SearchStatus}
    detail = f"{len(unsat)} unsatisfiable formulas, outcomes {counts}"
    if len(unsat) >= 3 and SearchStatus.BUDGET_EXCEEDED in statuses:
        report(6, "INCONCLUSIVE", detail)
        pytest.skip("search budget exceeded")
    report(6, "PASS" if len(unsat) >= 3 and all(s is SearchStatus.NONE_EXISTS for s in statuses)
           else "FAIL", f"{detail}; {elapsed:.2f}s")
    assert len(unsat) >= 3
    assert all(s is SearchStatus.NONE_EXISTS for s in statuses)


def misreport_instance(inst, sid, report_):
    students = dict(inst.students)
    students[sid] = replace(students[sid], preferences=report_)
    schools = {
        c: sc if c in report_ else replace(sc, priority=tuple(a for a in sc.priority if a != sid))
        for c, sc in inst.schools.items()
    }
    return replace(inst, students=students, schools=schools)


def test_criterion_7_serial_dictatorship():
    start = time.perf_counter()
    unfair = 0
    for seed, inst in scdc_corpus(500, min_quotas=False):
        ml = shuffled_master_list(inst.students, seed)
        x = sd_school_choice(inst, ml)
        if (not check_feasible_scdc(inst, x).feasible or find_waste(inst, x)
                or check_fair_by_master_list(inst, x, ml)):
            unfair += 1
    runs = gains = 0
    for seed, inst in scdc_corpus(500, max_students=5, min_quotas=False):
        ml = shuffled_master_list(inst.students, seed)
        x = sd_school_choice(inst, ml)
        for sid, st in inst.students.items():
            truth = list(st.preferences)
            rank = lambda c: len(truth) if c is None else truth.index(c)  # noqa: E731
            honest = rank(x.assignment(sid))
            for k in range(len(truth) + 1):
                for lie in itertools.permutations(truth, k):
                    runs += 1
                    z = sd_school_choice(misreport_instance(inst, sid, lie), ml)
                    gains += rank(z.assignment(sid)) < honest
    elapsed = time.perf_counter() - start
    detail = f"500 instances, failing outputs {unfair}; {runs} misreports, profitable {gains}"
    verdict(7, unfair == 0 and gains == 0, detail, elapsed, 300)


def test_criterion_8_checker_cross_validation(example1):
    start = time.perf_counter()
    res = find_stable(example1, "all")
    elapsed = time.perf_counter() - start
    oracle = {x for x in all_outcomes(example1) if scdc_feasible(example1, x) and scdc_stable(example1, x)}
    expected = {frozenset({("s1", "c"), ("s3", "c")})}
    got = {m.pairs for m in res.matchings}
    verdict(8, got == expected == oracle, f"stable set {sorted(map(sorted, got))}", elapsed, 1)
