import sys
from dataclasses import replace
from pathlib import Path

import pytest

from quotamatch import Doctor, Hospital, HrqInstance, RegionSpec, reduce_scdc_to_hrq
from quotamatch.io import load

DATA = Path(__file__).parent / "data"


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture
def example1():
    return load(str(DATA / "example1.scdc.json"))


@pytest.fixture
def example1_hrq(example1):
    return reduce_scdc_to_hrq(example1)


@pytest.fixture
def example1_no_min(example1):
    school = example1.schools["c"]
    return replace(example1, schools={"c": replace(school, min_quotas=(0, 0))})


@pytest.fixture
def example2():
    """Two doctors, two hospitals, each hospital its own region with quota exactly 1."""
    doctors = {"d1": Doctor(("h1", "h2")), "d2": Doctor(("h2", "h1"))}
    hospitals = {"h1": Hospital(1, ("d1", "d2")), "h2": Hospital(1, ("d2", "d1"))}
    regions = (
        RegionSpec("r1", frozenset({"h1"}), 1, 1, (("d1", "h1"), ("d2", "h1"))),
        RegionSpec("r2", frozenset({"h2"}), 1, 1, (("d2", "h2"), ("d1", "h2"))),
    )
    return HrqInstance(doctors, hospitals, regions)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(module.RESULTS):
        terminalreporter.write_line(module.RESULTS[n])
