"""Feasibility checks that report every violated constraint."""
from __future__ import annotations

from dataclasses import dataclass, field

from ._market import Market, compile_market
from .model import HrqInstance, Matching, Pair, ScdcInstance


@dataclass(frozen=True)
class CapacityExceeded:
    institution: str
    count: int
    bound: int


@dataclass(frozen=True)
class MultipleAssignments:
    agent: str
    institutions: tuple[str, ...]


@dataclass(frozen=True)
class TypeMaxViolated:
    school: str
    type: str
    count: int
    bound: int


@dataclass(frozen=True)
class TypeMinViolated:
    school: str
    type: str
    count: int
    bound: int


@dataclass(frozen=True)
class RegionMaxViolated:
    region: str
    count: int
    bound: int


@dataclass(frozen=True)
class RegionMinViolated:
    region: str
    count: int
    bound: int


@dataclass(frozen=True)
class UnknownContract:
    pair: Pair


Violation = (
    CapacityExceeded | MultipleAssignments | TypeMaxViolated | TypeMinViolated
    | RegionMaxViolated | RegionMinViolated | UnknownContract
)


@dataclass(frozen=True)
class FeasibilityVerdict:
    violations: tuple = field(default_factory=tuple)

    @property
    def feasible(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.feasible


def _verdict(market: Market, matching: Matching) -> FeasibilityVerdict:
    violations: list = []
    known: list[tuple[int, int]] = []
    for pair in sorted(matching.pairs):
        enc = market.encode([pair])
        if enc is None:
            violations.append(UnknownContract(pair))
        else:
            known.append(enc[0])

    by_agent: dict[str, list[str]] = {}
    for a, i in matching.pairs:
        by_agent.setdefault(a, []).append(i)
    for a in sorted(by_agent):
        if len(by_agent[a]) > 1:
            violations.append(MultipleAssignments(a, tuple(sorted(by_agent[a]))))

    # counters count distinct agents, so a doubly-assigned agent counts once
    members: list[set[int]] = [set() for _ in market.counters]
    for c in known:
        for k in market.contract_counters[c]:
            members[k].add(c[0])
    for ctr, agents in zip(market.counters, members):
        n = len(agents)
        kind = ctr.tag[0]
        if kind == "capacity":
            if n > ctr.hi:
                violations.append(CapacityExceeded(ctr.tag[1], n, ctr.hi))
        elif kind == "type":
            if n > ctr.hi:
                violations.append(TypeMaxViolated(ctr.tag[1], ctr.tag[2], n, ctr.hi))
            if n < ctr.lo:
                violations.append(TypeMinViolated(ctr.tag[1], ctr.tag[2], n, ctr.lo))
        else:
            if n > ctr.hi:
                violations.append(RegionMaxViolated(ctr.tag[1], n, ctr.hi))
            if n < ctr.lo:
                violations.append(RegionMinViolated(ctr.tag[1], n, ctr.lo))
    return FeasibilityVerdict(tuple(violations))


def check_feasible_scdc(inst: ScdcInstance, matching: Matching) -> FeasibilityVerdict:
    """Check capacities, single assignment and per-type quotas of every school."""
    return _verdict(compile_market(inst), matching)


def check_feasible_hrq(inst: HrqInstance, matching: Matching) -> FeasibilityVerdict:
    """Check capacities, single assignment and every regional quota."""
    return _verdict(compile_market(inst), matching)


def check_feasible(inst, matching: Matching) -> FeasibilityVerdict:
    return _verdict(compile_market(inst), matching)


def is_feasible_fast(market: Market, contracts) -> bool:
    """Boolean feasibility on index-form contracts (no diagnostics)."""
    seen = set()
    for a, _ in contracts:
        if a in seen:
            return False
        seen.add(a)
    return market.within_bounds(market.counts(contracts))
