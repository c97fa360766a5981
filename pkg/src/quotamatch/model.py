"""Instance and matching types for both matching models.

Two markets are modelled:

* ``ScdcInstance`` -- school choice with diversity constraints. Students
  carry 0/1 type vectors, schools carry a capacity plus per-type minimum
  and maximum quotas.
* ``HrqInstance`` -- hospital-doctor matching with regional quotas.
  Regions are arbitrary (possibly overlapping) subsets of hospitals with
  min/max quotas and a priority over the contracts they contain.

A contract ``(agent, institution)`` exists iff each side lists the other.
All identifiers are opaque strings and every ordering is an explicit list.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Mapping, Sequence

MAX_QUOTA = 10**6

Pair = tuple[str, str]


class InvalidInstanceError(ValueError):
    """Raised when an instance fails structural validation."""

    def __init__(self, report: "ValidationReport"):
        self.report = report
        super().__init__("; ".join(report.errors))


class UnknownContractError(KeyError):
    pass


class InfeasibleOutcomeError(ValueError):
    """Stability is only defined for feasible outcomes."""


@dataclass(frozen=True)
class Student:
    types: tuple[int, ...]
    preferences: tuple[str, ...]


@dataclass(frozen=True)
class School:
    capacity: int
    max_quotas: tuple[int, ...]
    min_quotas: tuple[int, ...]
    priority: tuple[str, ...]


@dataclass(frozen=True)
class ScdcInstance:
    type_names: tuple[str, ...]
    students: Mapping[str, Student]
    schools: Mapping[str, School]

    def contracts(self) -> list[Pair]:
        """Mutually acceptable contracts, student-major in preference order."""
        out = []
        for sid, st in self.students.items():
            for cid in st.preferences:
                school = self.schools.get(cid)
                if school is not None and sid in school.priority:
                    out.append((sid, cid))
        return out

    def has_contract(self, sid: str, cid: str) -> bool:
        st = self.students.get(sid)
        school = self.schools.get(cid)
        return (
            st is not None
            and school is not None
            and cid in st.preferences
            and sid in school.priority
        )

    def has_min_quotas(self) -> bool:
        return any(any(sc.min_quotas) for sc in self.schools.values())


@dataclass(frozen=True)
class Doctor:
    preferences: tuple[str, ...]


@dataclass(frozen=True)
class Hospital:
    capacity: int
    priority: tuple[str, ...]


@dataclass(frozen=True)
class RegionSpec:
    id: str
    hospitals: frozenset[str]
    max_quota: int
    min_quota: int
    priority: tuple[Pair, ...]


@dataclass(frozen=True)
class HrqInstance:
    doctors: Mapping[str, Doctor]
    hospitals: Mapping[str, Hospital]
    regions: tuple[RegionSpec, ...] = ()

    def contracts(self) -> list[Pair]:
        out = []
        for did, doc in self.doctors.items():
            for hid in doc.preferences:
                hosp = self.hospitals.get(hid)
                if hosp is not None and did in hosp.priority:
                    out.append((did, hid))
        return out

    def has_contract(self, did: str, hid: str) -> bool:
        doc = self.doctors.get(did)
        hosp = self.hospitals.get(hid)
        return (
            doc is not None
            and hosp is not None
            and hid in doc.preferences
            and did in hosp.priority
        )

    def has_min_quotas(self) -> bool:
        return any(r.min_quota for r in self.regions)

    def region(self, rid: str) -> RegionSpec:
        for r in self.regions:
            if r.id == rid:
                return r
        raise KeyError(rid)


@dataclass(frozen=True)
class Matching:
    """A set of (agent, institution) contracts."""

    pairs: frozenset[Pair] = frozenset()

    @classmethod
    def of(cls, pairs: Iterable[Sequence[str]]) -> "Matching":
        return cls(frozenset((a, i) for a, i in pairs))

    def __iter__(self) -> Iterator[Pair]:
        return iter(sorted(self.pairs))

    def __len__(self) -> int:
        return len(self.pairs)

    def __contains__(self, pair: object) -> bool:
        return pair in self.pairs

    def assignment(self, agent: str) -> str | None:
        """Institution of ``agent``, or None when unmatched.

        If the agent is (infeasibly) matched several times the
        lexicographically smallest institution is returned.
        """
        found = sorted(i for a, i in self.pairs if a == agent)
        return found[0] if found else None

    def agents_at(self, institution: str) -> set[str]:
        return {a for a, i in self.pairs if i == institution}

    def restricted_to(self, agents: Iterable[str]) -> "Matching":
        keep = set(agents)
        return Matching(frozenset(p for p in self.pairs if p[0] in keep))

    def __or__(self, other: "Matching") -> "Matching":
        return Matching(self.pairs | other.pairs)


@dataclass(frozen=True)
class MasterList:
    order: tuple[str, ...]

    def rank(self) -> dict[str, int]:
        return {a: k for k, a in enumerate(self.order)}

    def covers(self, agents: Iterable[str]) -> bool:
        agents = set(agents)
        return len(self.order) == len(set(self.order)) and set(self.order) == agents


@dataclass
class ValidationReport:
    errors: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def __bool__(self) -> bool:
        return self.ok

    def raise_if_invalid(self) -> None:
        if self.errors:
            raise InvalidInstanceError(self)


def _check_order(report: ValidationReport, owner: str, ranked: Sequence, known) -> None:
    if len(set(ranked)) != len(ranked):
        report.errors.append(f"{owner}: duplicate entries in ranking")
    for x in ranked:
        if x not in known:
            report.errors.append(f"{owner}: unknown identifier {x!r}")


def _check_bound(report: ValidationReport, owner: str, value) -> None:
    if not isinstance(value, int) or isinstance(value, bool) or not 0 <= value <= MAX_QUOTA:
        report.errors.append(f"{owner}: quota/capacity {value!r} outside [0, {MAX_QUOTA}]")


def validate_scdc(inst: ScdcInstance) -> ValidationReport:
    """Collect every structural violation of ``inst`` (empty report = valid)."""
    report = ValidationReport()
    n_types = len(inst.type_names)
    if len(set(inst.type_names)) != n_types:
        report.errors.append("type_names: duplicate type labels")
    if n_types > len(inst.students):
        report.errors.append(
            f"|T| = {n_types} exceeds number of students {len(inst.students)}"
        )
    for sid, st in inst.students.items():
        if len(st.types) != n_types:
            report.errors.append(f"student {sid}: type vector length {len(st.types)} != {n_types}")
        if any(b not in (0, 1) or isinstance(b, bool) for b in st.types):
            report.errors.append(f"student {sid}: type vector entries must be 0 or 1")
        _check_order(report, f"student {sid} preferences", st.preferences, inst.schools)
        for cid in st.preferences:
            sc = inst.schools.get(cid)
            if sc is not None and sid not in sc.priority:
                report.errors.append(f"one-sided listing: student {sid} lists {cid} but not vice versa")
    for cid, sc in inst.schools.items():
        _check_bound(report, f"school {cid} capacity", sc.capacity)
        if len(sc.max_quotas) != n_types or len(sc.min_quotas) != n_types:
            report.errors.append(f"school {cid}: quota vectors must have length {n_types}")
        for j, (lo, hi) in enumerate(zip(sc.min_quotas, sc.max_quotas)):
            tname = inst.type_names[j] if j < n_types else str(j)
            _check_bound(report, f"school {cid} min quota {tname}", lo)
            _check_bound(report, f"school {cid} max quota {tname}", hi)
            if isinstance(lo, int) and isinstance(hi, int) and lo > hi:
                report.errors.append(
                    f"school {cid}: min quota {lo} exceeds max quota {hi} for type {tname}"
                )
        _check_order(report, f"school {cid} priority", sc.priority, inst.students)
        for sid in sc.priority:
            st = inst.students.get(sid)
            if st is not None and cid not in st.preferences:
                report.errors.append(f"one-sided listing: school {cid} lists {sid} but not vice versa")
    return report


def validate_hrq(inst: HrqInstance) -> ValidationReport:
    report = ValidationReport()
    for did, doc in inst.doctors.items():
        _check_order(report, f"doctor {did} preferences", doc.preferences, inst.hospitals)
        for hid in doc.preferences:
            h = inst.hospitals.get(hid)
            if h is not None and did not in h.priority:
                report.errors.append(f"one-sided listing: doctor {did} lists {hid} but not vice versa")
    for hid, h in inst.hospitals.items():
        _check_bound(report, f"hospital {hid} capacity", h.capacity)
        _check_order(report, f"hospital {hid} priority", h.priority, inst.doctors)
        for did in h.priority:
            d = inst.doctors.get(did)
            if d is not None and hid not in d.preferences:
                report.errors.append(f"one-sided listing: hospital {hid} lists {did} but not vice versa")

    seen_ids = set()
    for r in inst.regions:
        if r.id in seen_ids:
            report.errors.append(f"region {r.id}: duplicate region id")
        seen_ids.add(r.id)
        for hid in sorted(r.hospitals):
            if hid not in inst.hospitals:
                report.errors.append(f"region {r.id}: unknown hospital {hid!r}")
        _check_bound(report, f"region {r.id} max quota", r.max_quota)
        _check_bound(report, f"region {r.id} min quota", r.min_quota)
        if isinstance(r.min_quota, int) and isinstance(r.max_quota, int) and r.min_quota > r.max_quota:
            report.errors.append(
                f"region {r.id}: min quota {r.min_quota} exceeds max quota {r.max_quota}"
            )
        if len(set(r.priority)) != len(r.priority):
            report.errors.append(f"region {r.id}: duplicate contracts in priority")
        listed = set(r.priority)
        for d, h in r.priority:
            if h not in r.hospitals:
                report.errors.append(f"region {r.id}: priority contract ({d}, {h}) outside region")
            elif not inst.has_contract(d, h):
                report.errors.append(f"region {r.id}: priority contract ({d}, {h}) does not exist")
        for d, h in inst.contracts():
            if h in r.hospitals and (d, h) not in listed:
                report.errors.append(f"region {r.id}: priority misses contract ({d}, {h})")
    return report


def is_partition(regions: Iterable[RegionSpec], hospitals: Iterable[str]) -> bool:
    """True iff the regions are pairwise disjoint and cover ``hospitals``."""
    regions = list(regions)
    covered: set[str] = set()
    for r in regions:
        if covered & r.hospitals:
            return False
        covered |= r.hospitals
    return covered == set(hospitals)


def is_hierarchy(regions: Iterable[RegionSpec], hospitals: Iterable[str]) -> bool:
    """True iff the regions cover ``hospitals`` and form a laminar family."""
    regions = list(regions)
    union = set().union(*(r.hospitals for r in regions)) if regions else set()
    if union != set(hospitals):
        return False
    for a, b in combinations(regions, 2):
        x, y = a.hospitals, b.hospitals
        if x & y and not (x <= y or y <= x):
            return False
    return True
