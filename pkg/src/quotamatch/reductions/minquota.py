"""Replace regional minimum quotas by maximum quotas via a null hospital.

A region ``r`` needing at least ``lo`` doctors is equivalent to its
complement (within the hospitals plus the null hospital ``h0``) holding at
most ``|D| - lo`` doctors, as long as every doctor sits somewhere. Doctors
who would be unmatched are parked at ``h0``; see ``augment_with_null``.
"""
from __future__ import annotations

from dataclasses import replace

from ..model import Doctor, Hospital, HrqInstance, Matching, RegionSpec, validate_hrq


def _fresh_id(base: str, taken) -> str:
    new = base
    while new in taken:
        new += "_"
    return new


def eliminate_min_quotas(inst: HrqInstance, null_id: str = "h0") -> tuple[HrqInstance, str]:
    """Return an equivalent instance with only maximum quotas and the null hospital id."""
    validate_hrq(inst).raise_if_invalid()
    n = len(inst.doctors)
    for r in inst.regions:
        if r.min_quota > n:
            raise ValueError(
                f"region {r.id} needs {r.min_quota} doctors but only {n} exist; no outcome is feasible"
            )
    h0 = _fresh_id(null_id, inst.hospitals)

    doctors = {d: Doctor(doc.preferences + (h0,)) for d, doc in inst.doctors.items()}
    hospitals = dict(inst.hospitals)
    hospitals[h0] = Hospital(n, tuple(inst.doctors))
    all_h = frozenset(hospitals)

    # contracts doctor-major in preference order; region priorities of the
    # complement regions follow this order (only feasibility is preserved)
    contracts = [(d, h) for d, doc in doctors.items() for h in doc.preferences
                 if d in hospitals[h].priority]

    region_ids = {r.id for r in inst.regions}
    regions = []
    for r in inst.regions:
        regions.append(replace(r, min_quota=0))
        hat = all_h - r.hospitals
        rid = _fresh_id(f"{r.id}_hat", region_ids)
        region_ids.add(rid)
        regions.append(RegionSpec(
            id=rid,
            hospitals=hat,
            max_quota=n - r.min_quota,
            min_quota=0,
            priority=tuple(c for c in contracts if c[1] in hat),
        ))
    return HrqInstance(doctors, hospitals, tuple(regions)), h0


def augment_with_null(inst_plus: HrqInstance, matching: Matching, null_id: str) -> Matching:
    """Send every unmatched doctor to the null hospital."""
    matched = {d for d, _ in matching.pairs}
    extra = {(d, null_id) for d in inst_plus.doctors if d not in matched}
    return Matching(matching.pairs | extra)
