import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quotamatch import InvalidInstanceError, MasterList, Matching, SetCoverInstance, reduce_scdc_to_hrq
from quotamatch.generate import RandomHrqParams, RandomScdcParams, gen_random_hrq, gen_random_scdc
from quotamatch.io import FormatError, dumps, format_dimacs, load, loads, parse_dimacs, save

seeds = st.integers(0, 2**64 - 1)


@settings(max_examples=50, deadline=None)
@given(seeds, st.integers(1, 6), st.integers(1, 3))
def test_scdc_round_trip(seed, n, m):
    inst = gen_random_scdc(RandomScdcParams(n, m, 1 + seed % n, 0.7, "random", seed))
    assert loads(dumps(inst)) == inst
    hrq, rmap = reduce_scdc_to_hrq(inst)
    assert loads(dumps(hrq)) == hrq
    assert loads(dumps(rmap)) == rmap


@settings(max_examples=50, deadline=None)
@given(seeds, st.integers(1, 5), st.integers(1, 4), st.integers(0, 4))
def test_hrq_round_trip(seed, n, m, r):
    inst = gen_random_hrq(RandomHrqParams(n, m, r, 0.7, "random", seed))
    assert loads(dumps(inst)) == inst


@given(st.sets(st.tuples(st.sampled_from("abc"), st.sampled_from("xyz"))))
def test_matching_round_trip(pairs):
    m = Matching(frozenset(pairs))
    assert loads(dumps(m)) == m


def test_other_documents(tmp_path):
    ml = MasterList(("b", "a"))
    sc = SetCoverInstance.of(["u1", "u2"], [{"u1"}, {"u1", "u2"}], 1)
    for obj in (ml, sc):
        path = tmp_path / "doc.json"
        save(obj, str(path))
        assert load(str(path)) == obj


def test_canonical_output(example1):
    text = dumps(example1)
    assert text.endswith("\n")
    assert text == json.dumps(json.loads(text), sort_keys=True, indent=2) + "\n"


@pytest.mark.parametrize("text", [
    "not json",
    "[]",
    '{"kind": "nope"}',
    '{"kind": "scdc", "students": {}, "schools": {}}',
    '{"kind": "matching", "pairs": [["a"]]}',
    '{"kind": "master_list", "order": ["a", "a"]}',
    '{"kind": "scdc", "type_names": [], "students": {}, '
    '"schools": {"c": {"capacity": true, "max_quotas": [], "min_quotas": [], "priority": []}}}',
])
def test_format_errors(text):
    with pytest.raises(FormatError):
        loads(text)


def test_validation_on_load(example1):
    data = json.loads(dumps(example1))
    data["schools"]["c"]["min_quotas"] = [2, 0]
    with pytest.raises(InvalidInstanceError):
        loads(json.dumps(data))
    assert loads(json.dumps(data), validate=False).schools["c"].min_quotas == (2, 0)


DIMACS = """c restricted formula
p cnf 3 4
1 2 3 0
1 -2 -3 0
-1 2 -3 0
-1 -2 3 0
"""


def test_dimacs():
    f = parse_dimacs(DIMACS)
    assert f.variables == ("1", "2", "3")
    assert f.clauses[1] == (("1", True), ("2", False), ("3", False))
    assert parse_dimacs(format_dimacs(f)) == f


@pytest.mark.parametrize("text", [
    "1 2 3 0\n",
    "p cnf 3 2\n1 2 3 0\n",
    "p cnf 3 4\n1 2 3 0\n1 -2 -3 0\n-1 2 -3 0\n-1 -2 3\n",
    "p cnf 2 1\n1 2 5 0\n",
    "p cnf 3 1\n1 2 3 0\n",
    "p cnf x 1\n",
])
def test_dimacs_errors(text):
    with pytest.raises(FormatError):
        parse_dimacs(text)
