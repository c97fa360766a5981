from dataclasses import replace

import pytest

from corpus import hrq_corpus, restricted_formulas, scdc_corpus, shuffled_master_list
from oracles import all_outcomes, hrq_feasible, hrq_stable, scdc_feasible, scdc_stable
from quotamatch import (
    Doctor,
    Hospital,
    HrqInstance,
    MasterList,
    Matching,
    RegionSpec,
    School,
    ScdcInstance,
    SearchBudget,
    SearchStatus,
    Student,
    check_fair_by_master_list,
    check_feasible,
    enumerate_feasible,
    find_stable,
    find_waste,
    gadget_from_3sat,
    is_stable_hrq,
    order_regions_by_master_list,
    sd_school_choice,
    serial_dictatorship,
)
from quotamatch.reductions import GadgetNames, variable_outcome

ML4 = MasterList(("s1", "s2", "s3", "s4"))


class TestEnumeration:
    def test_example1(self, example1):
        got = list(enumerate_feasible(example1))
        assert got == [
            Matching.of([("s1", "c"), ("s3", "c")]),
            Matching.of([("s1", "c"), ("s4", "c")]),
            Matching.of([("s2", "c"), ("s3", "c")]),
            Matching.of([("s3", "c")]),
            Matching.of([("s4", "c")]),
        ]

    def test_no_contracts(self):
        inst = ScdcInstance(("t",), {"s1": Student((1,), ())}, {"c": School(1, (1,), (0,), ())})
        assert list(enumerate_feasible(inst)) == [Matching()]

    def test_example2(self, example2):
        assert set(enumerate_feasible(example2)) == {
            Matching.of([("d1", "h1"), ("d2", "h2")]),
            Matching.of([("d2", "h1"), ("d1", "h2")]),
        }

    def test_matches_oracle(self):
        for _, inst in scdc_corpus(80):
            want = {x for x in all_outcomes(inst) if scdc_feasible(inst, x)}
            got = [m.pairs for m in enumerate_feasible(inst)]
            assert len(got) == len(set(got)) and set(got) == want
        for _, inst in hrq_corpus(80):
            want = {y for y in all_outcomes(inst) if hrq_feasible(inst, y)}
            assert {m.pairs for m in enumerate_feasible(inst)} == want

    def test_truncation(self, example1):
        enum = enumerate_feasible(example1, SearchBudget(max_nodes=3))
        assert list(enum) == [] and enum.truncated
        enum = enumerate_feasible(example1)
        list(enum)
        assert not enum.truncated and enum.nodes_explored > 0


class TestFindStable:
    def test_example1(self, example1):
        res = find_stable(example1, "all")
        assert res.status is SearchStatus.FOUND
        assert res.matchings == (Matching.of([("s1", "c"), ("s3", "c")]),)
        assert find_stable(example1, "exists").matching == res.matching

    def test_nothing_acceptable(self):
        inst = ScdcInstance(("t",), {"s1": Student((1,), ()), "s2": Student((0,), ())},
                            {"c": School(2, (2,), (0,), ())})
        res = find_stable(inst)
        assert res.status is SearchStatus.FOUND and res.matching == Matching()

    def test_no_feasible_outcome(self, example2):
        inst = replace(example2, regions=tuple(replace(r, max_quota=2, min_quota=2)
                                               for r in example2.regions))
        assert find_stable(inst).status is SearchStatus.NONE_EXISTS

    def test_budget(self, example1):
        res = find_stable(example1, budget=SearchBudget(max_nodes=2))
        assert res.status is SearchStatus.BUDGET_EXCEEDED
        with pytest.raises(ValueError):
            SearchBudget(max_nodes=0)
        with pytest.raises(ValueError):
            find_stable(example1, mode="some")

    def test_oracle_completeness(self):
        for _, inst in scdc_corpus(120):
            want = {x for x in all_outcomes(inst) if scdc_feasible(inst, x) and scdc_stable(inst, x)}
            res = find_stable(inst, "all")
            assert {m.pairs for m in res.matchings} == want
            assert (find_stable(inst, "exists").status is SearchStatus.FOUND) == bool(want)
        for _, inst in hrq_corpus(120):
            want = {y for y in all_outcomes(inst) if hrq_feasible(inst, y) and hrq_stable(inst, y)}
            assert {m.pairs for m in find_stable(inst, "all").matchings} == want

    def test_determinism(self):
        for _, inst in scdc_corpus(30):
            a, b = find_stable(inst, "all"), find_stable(inst, "all")
            assert a == b

    def test_master_list_target(self, example1_no_min):
        res = find_stable(example1_no_min, "all", master_list=ML4)
        for x in res.matchings:
            assert not find_waste(example1_no_min, x)
            assert not check_fair_by_master_list(example1_no_min, x, ML4)
        assert sd_school_choice(example1_no_min, ML4) in res.matchings

    def test_gadget_patterns(self):
        f = next(f for f in restricted_formulas(3, seed=3) if _satisfiable(f))
        gadget = gadget_from_3sat(f)
        res = find_stable(gadget, "exists")
        assert res.status is SearchStatus.FOUND
        names = GadgetNames(f)
        for v in f.variables:
            part = res.matching.restricted_to(names.variable_students(v))
            assert part in (variable_outcome(names, v, True), variable_outcome(names, v, False))


def _satisfiable(f):
    from oracles import satisfying_assignments
    return next(satisfying_assignments(f), None) is not None


class TestSerialDictatorship:
    def test_induced_example1(self, example1_hrq):
        hrq = example1_hrq[0]
        hrq = replace(hrq, regions=tuple(replace(r, min_quota=0) for r in hrq.regions))
        ml = MasterList(("d_s1", "d_s2", "d_s3", "d_s4"))
        ordered = order_regions_by_master_list(hrq, ml)
        y = serial_dictatorship(ordered, ml)
        # the school region caps the total at 2
        assert y == Matching.of([("d_s1", "h_c_00"), ("d_s2", "h_c_01")])
        assert is_stable_hrq(ordered, y)
        rev = MasterList(tuple(reversed(ml.order)))
        ordered = order_regions_by_master_list(hrq, rev)
        y = serial_dictatorship(ordered, rev)
        assert y == Matching.of([("d_s4", "h_c_11"), ("d_s1", "h_c_00")])
        assert is_stable_hrq(ordered, y)

    def test_single_doctor(self):
        inst = HrqInstance({"d": Doctor(("h",))}, {"h": Hospital(1, ("d",))},
                           (RegionSpec("r", frozenset({"h"}), 1, 0, (("d", "h"),)),))
        assert serial_dictatorship(inst, MasterList(("d",))) == Matching.of([("d", "h")])

    def test_errors(self, example2, example1):
        with pytest.raises(ValueError):
            serial_dictatorship(example2, MasterList(("d1", "d2")))
        free = replace(example2, regions=())
        with pytest.raises(ValueError):
            serial_dictatorship(free, MasterList(("d1",)))
        with pytest.raises(ValueError):
            sd_school_choice(example1, ML4)

    def test_school_choice_examples(self, example1_no_min):
        assert sd_school_choice(example1_no_min, ML4) == Matching.of([("s1", "c"), ("s2", "c")])
        rev = MasterList(("s4", "s3", "s2", "s1"))
        assert sd_school_choice(example1_no_min, rev) == Matching.of([("s4", "c"), ("s1", "c")])
        empty = ScdcInstance((), {}, {})
        assert sd_school_choice(empty, MasterList(())) == Matching()

    def test_stable_when_priorities_follow_master_list(self):
        for seed, inst in hrq_corpus(300):
            inst = replace(inst, regions=tuple(replace(r, min_quota=0) for r in inst.regions))
            ml = shuffled_master_list(inst.doctors, seed)
            unified = order_regions_by_master_list(inst, ml, hospitals=True)
            y = serial_dictatorship(unified, ml)
            assert check_feasible(unified, y).feasible
            assert is_stable_hrq(unified, y)

    def test_uncovered_hospital_keeps_own_priority(self):
        # h is in no region and prefers d2; d1 comes first on the master list
        inst = HrqInstance({"d1": Doctor(("h",)), "d2": Doctor(("h",))},
                           {"h": Hospital(1, ("d2", "d1"))})
        ml = MasterList(("d1", "d2"))
        y = serial_dictatorship(order_regions_by_master_list(inst, ml), ml)
        assert not is_stable_hrq(inst, y)
        unified = order_regions_by_master_list(inst, ml, hospitals=True)
        assert is_stable_hrq(unified, serial_dictatorship(unified, ml))
