"""Set-cover gadget: feasible outcomes correspond to covers of size <= k."""
from __future__ import annotations

from dataclasses import dataclass

from ..feasibility import check_feasible_scdc
from ..model import (
    InfeasibleOutcomeError,
    Matching,
    School,
    ScdcInstance,
    Student,
)

SCHOOL = "c"


@dataclass(frozen=True)
class SetCoverInstance:
    universe: tuple[str, ...]
    family: tuple[frozenset[str], ...]
    budget: int

    @classmethod
    def of(cls, universe, family, budget) -> "SetCoverInstance":
        return cls(tuple(universe), tuple(frozenset(f) for f in family), int(budget))

    def restriction_errors(self) -> list[str]:
        errors = []
        if len(set(self.universe)) != len(self.universe):
            errors.append("universe has duplicate elements")
        if self.budget < 0:
            errors.append("budget must be non-negative")
        known = set(self.universe)
        for j, f in enumerate(self.family):
            if len(f) > 3:
                errors.append(f"set {j} has more than three elements")
            if not f <= known:
                errors.append(f"set {j} contains elements outside the universe")
        for u in self.universe:
            if sum(u in f for f in self.family) > 3:
                errors.append(f"element {u} occurs in more than three sets")
        return errors


def student_id(j: int) -> str:
    return f"s{j + 1}"


def gadget_from_set_cover(sc: SetCoverInstance) -> ScdcInstance:
    """One school of capacity ``k``; one student per set, one type per element.

    Every type needs at least one admitted student. When there are more
    elements than sets, students with no acceptable school are added so
    that the model's ``|T| <= |S|`` requirement holds; they never match.
    """
    errors = sc.restriction_errors()
    if errors:
        raise ValueError("; ".join(errors))
    students = {}
    for j, f in enumerate(sc.family):
        students[student_id(j)] = Student(
            tuple(int(u in f) for u in sc.universe), (SCHOOL,)
        )
    n_types = len(sc.universe)
    for p in range(max(0, n_types - len(sc.family))):
        students[f"pad{p + 1}"] = Student((0,) * n_types, ())
    upper = max(sc.budget, 1)
    school = School(
        capacity=sc.budget,
        max_quotas=(upper,) * n_types,
        min_quotas=(1,) * n_types,
        priority=tuple(student_id(j) for j in range(len(sc.family))),
    )
    return ScdcInstance(tuple(sc.universe), students, {SCHOOL: school})


def set_cover_from_matching(sc: SetCoverInstance, gadget: ScdcInstance,
                            matching: Matching) -> list[frozenset[str]]:
    verdict = check_feasible_scdc(gadget, matching)
    if not verdict.feasible:
        raise InfeasibleOutcomeError(f"outcome is not feasible for the gadget: {verdict.violations}")
    chosen = matching.agents_at(SCHOOL)
    return [f for j, f in enumerate(sc.family) if student_id(j) in chosen]
