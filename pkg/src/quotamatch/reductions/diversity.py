"""Diversity-constrained school choice -> regional-quota hospital matching.

Every student becomes a doctor. Every school spawns one hospital per
distinct type vector present among the students, each with the school's
capacity, plus ``|T| + 1`` regions: one holding all of the school's
hospitals (capped at the school capacity) and one per type holding the
hospitals whose vector has that bit set (carrying the type quotas).
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..model import (
    Doctor,
    Hospital,
    HrqInstance,
    Matching,
    Pair,
    RegionSpec,
    ScdcInstance,
    UnknownContractError,
    validate_scdc,
)


def bits_label(vector) -> str:
    return "".join(str(b) for b in vector)


@dataclass(frozen=True)
class SchoolImage:
    region: str
    type_regions: tuple[str, ...]
    hospitals: dict[str, str]  # bit string -> hospital id


@dataclass(frozen=True)
class ReductionMap:
    student_to_doctor: dict[str, str]
    contracts: dict[Pair, Pair]
    schools: dict[str, SchoolImage]
    _inverse: dict[Pair, Pair] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self._inverse.update({y: x for x, y in self.contracts.items()})

    @property
    def doctor_to_student(self) -> dict[str, str]:
        return {d: s for s, d in self.student_to_doctor.items()}

    def inverse_contract(self, pair: Pair) -> Pair:
        return self._inverse[pair]


def distinct_type_vectors(inst: ScdcInstance) -> list[tuple[int, ...]]:
    """Distinct type vectors, ordered as binary numerals (first type most significant)."""
    return sorted({st.types for st in inst.students.values()})


def reduce_scdc_to_hrq(inst: ScdcInstance) -> tuple[HrqInstance, ReductionMap]:
    validate_scdc(inst).raise_if_invalid()
    vectors = distinct_type_vectors(inst)
    s2d = {sid: f"d_{sid}" for sid in inst.students}

    hospitals: dict[str, Hospital] = {}
    regions: list[RegionSpec] = []
    images: dict[str, SchoolImage] = {}
    contract_map: dict[Pair, Pair] = {}

    def hosp_id(cid, vec):
        return f"h_{cid}_{bits_label(vec)}"

    for cid, sc in inst.schools.items():
        admitted = [s for s in sc.priority if inst.has_contract(s, cid)]
        for vec in vectors:
            prio = tuple(s2d[s] for s in admitted if inst.students[s].types == vec)
            hospitals[hosp_id(cid, vec)] = Hospital(sc.capacity, prio)
        for s in admitted:
            contract_map[(s, cid)] = (s2d[s], hosp_id(cid, inst.students[s].types))

        all_h = frozenset(hosp_id(cid, v) for v in vectors)
        regions.append(RegionSpec(
            id=f"r_{cid}",
            hospitals=all_h,
            max_quota=sc.capacity,
            min_quota=0,
            priority=tuple(contract_map[(s, cid)] for s in admitted),
        ))
        type_regions = []
        for j in range(len(inst.type_names)):
            rid = f"r_{cid}_{j + 1}"
            type_regions.append(rid)
            regions.append(RegionSpec(
                id=rid,
                hospitals=frozenset(hosp_id(cid, v) for v in vectors if v[j]),
                max_quota=sc.max_quotas[j],
                min_quota=sc.min_quotas[j],
                priority=tuple(
                    contract_map[(s, cid)] for s in admitted if inst.students[s].types[j]
                ),
            ))
        images[cid] = SchoolImage(
            region=f"r_{cid}",
            type_regions=tuple(type_regions),
            hospitals={bits_label(v): hosp_id(cid, v) for v in vectors},
        )

    doctors = {}
    for sid, st in inst.students.items():
        doctors[s2d[sid]] = Doctor(tuple(
            hosp_id(c, st.types) for c in st.preferences if (sid, c) in contract_map
        ))

    hrq = HrqInstance(doctors=doctors, hospitals=hospitals, regions=tuple(regions))
    return hrq, ReductionMap(s2d, contract_map, images)


def lift_matching(rmap: ReductionMap, matching: Matching) -> Matching:
    """Map a school-choice outcome onto the induced hospital instance."""
    try:
        return Matching(frozenset(rmap.contracts[p] for p in matching.pairs))
    except KeyError as exc:
        raise UnknownContractError(exc.args[0]) from None


def restore_matching(rmap: ReductionMap, matching: Matching) -> Matching:
    try:
        return Matching(frozenset(rmap.inverse_contract(p) for p in matching.pairs))
    except KeyError as exc:
        raise UnknownContractError(exc.args[0]) from None
