"""Blocking-pair detection for both models.

A blocking pair ``(agent, institution)`` exists when the agent prefers the
institution to its current assignment and the institution can take the
agent by releasing a (possibly empty) set of lower-priority agents while
the outcome stays feasible. An empty release set is waste; a non-empty one
is justified envy. For hospital-doctor instances every released doctor must
also rank below the applicant in each region containing the hospital.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations

from ._market import Market, compile_market, ml_rank_vector
from .feasibility import check_feasible
from .model import (
    HrqInstance,
    InfeasibleOutcomeError,
    MasterList,
    Matching,
    ScdcInstance,
)


class BlockingKind(enum.Enum):
    JUSTIFIED_ENVY = "justified_envy"
    WASTEFUL = "wasteful"


@dataclass(frozen=True)
class BlockingWitness:
    agent: str
    institution: str
    displaced: tuple[str, ...]

    @property
    def kind(self) -> BlockingKind:
        return BlockingKind.JUSTIFIED_ENVY if self.displaced else BlockingKind.WASTEFUL

    def apply(self, matching: Matching) -> Matching:
        """The outcome in which the agent moves in and ``displaced`` leave."""
        drop = set(self.displaced) | {self.agent}
        kept = {p for p in matching.pairs if p[0] not in drop}
        return Matching(frozenset(kept | {(self.agent, self.institution)}))

    def to_json(self) -> dict:
        return {
            "agent": self.agent,
            "institution": self.institution,
            "displaced": list(self.displaced),
            "kind": self.kind.value,
        }


def is_individually_rational(inst: ScdcInstance | HrqInstance, matching: Matching) -> bool:
    return all(inst.has_contract(a, i) for a, i in matching.pairs)


def _require_feasible(inst, matching: Matching) -> None:
    verdict = check_feasible(inst, matching)
    if not verdict.feasible:
        raise InfeasibleOutcomeError(
            f"blocking pairs are defined for feasible outcomes only: {verdict.violations}"
        )


def _lowness(market: Market, i: int, a2: int, i2: int) -> int:
    if i2 == i:
        return market.priority_rank[i][a2]
    ranks = [r[(a2, i2)] for r in market.region_ranks[i] if (a2, i2) in r]
    return max(ranks)


def blocking_witness_for(market: Market, counts, current, holders, a, i, *,
                         ml_rank=None, cross=False, nonempty=False):
    """Minimal release set letting ``a`` into ``i``, or None.

    ``counts`` are the counter loads of a feasible outcome, ``current`` maps
    agent -> institution and ``holders`` institution -> agents (index form).
    """
    j = current.get(a)
    pool = []
    for i2 in (market.neighbours[i] if cross else (i,)):
        for a2 in holders.get(i2, ()):
            if a2 != a and market.may_displace(a, i, a2, i2, ml_rank):
                pool.append((a2, i2))
    if nonempty and not pool:
        return None
    # lowest priority first, so combinations() tries them first
    pool.sort(key=lambda c: (-_lowness(market, i, *c), c))
    base = [(a, j)] if j is not None else []
    added = [(a, i)]
    if not market.has_lower_bounds and not market.delta_feasible(counts, added, base + pool):
        return None
    for k in range(1 if nonempty else 0, len(pool) + 1):
        for combo in combinations(pool, k):
            if market.delta_feasible(counts, added, base + list(combo)):
                return combo
    return None


def _find(market: Market, matching: Matching, *, ml_rank=None, cross=False,
          nonempty=False, empty_only=False, first=False) -> list[BlockingWitness]:
    contracts = market.encode(matching.pairs)
    counts = market.counts(contracts)
    current = {a: i for a, i in contracts}
    holders: dict[int, list[int]] = {}
    for a, i in contracts:
        holders.setdefault(i, []).append(a)
    found = []
    order = sorted(range(len(market.agents)), key=lambda a: market.agents[a])
    for a in order:
        j = current.get(a)
        prefs = market.prefs[a]
        better = prefs if j is None else prefs[: market.pref_rank[a][j]]
        for i in sorted(better, key=lambda x: market.institutions[x]):
            if empty_only:
                base = [(a, j)] if j is not None else []
                combo = () if market.delta_feasible(counts, [(a, i)], base) else None
            else:
                combo = blocking_witness_for(
                    market, counts, current, holders, a, i,
                    ml_rank=ml_rank, cross=cross, nonempty=nonempty,
                )
            if combo is None:
                continue
            displaced = tuple(market.agents[a2] for a2, _ in combo)
            found.append(BlockingWitness(market.agents[a], market.institutions[i], displaced))
            if first:
                return found
    return found


def find_blocking_pairs_scdc(inst: ScdcInstance, matching: Matching) -> list[BlockingWitness]:
    """All blocking pairs of a feasible outcome, one minimal witness each.

    Raises InfeasibleOutcomeError for infeasible outcomes.
    """
    _require_feasible(inst, matching)
    return _find(compile_market(inst), matching)


def is_stable_scdc(inst: ScdcInstance, matching: Matching) -> bool:
    _require_feasible(inst, matching)
    return is_individually_rational(inst, matching) and not _find(
        compile_market(inst), matching, first=True
    )


def find_blocking_pairs_hrq(inst: HrqInstance, matching: Matching, *,
                            cross_hospital: bool = False) -> list[BlockingWitness]:
    """Blocking pairs with regional priorities.

    By default a doctor may only release doctors of the hospital it applies
    to. ``cross_hospital=True`` also lets it release doctors of other
    hospitals that share a region with it, provided the doctor outranks them
    in every shared region. That variant is not the standard notion; it is
    kept for comparing against the diversity-constrained model.
    """
    _require_feasible(inst, matching)
    return _find(compile_market(inst), matching, cross=cross_hospital)


def is_stable_hrq(inst: HrqInstance, matching: Matching, *, cross_hospital: bool = False) -> bool:
    _require_feasible(inst, matching)
    return is_individually_rational(inst, matching) and not _find(
        compile_market(inst), matching, cross=cross_hospital, first=True
    )


def find_blocking_pairs(inst, matching: Matching, **kw) -> list[BlockingWitness]:
    if isinstance(inst, ScdcInstance):
        return find_blocking_pairs_scdc(inst, matching)
    return find_blocking_pairs_hrq(inst, matching, **kw)


def is_stable(inst, matching: Matching, **kw) -> bool:
    if isinstance(inst, ScdcInstance):
        return is_stable_scdc(inst, matching)
    return is_stable_hrq(inst, matching, **kw)


def find_justified_envy(inst, matching: Matching) -> list[BlockingWitness]:
    """Witnesses that need a non-empty release set."""
    _require_feasible(inst, matching)
    return _find(compile_market(inst), matching, nonempty=True)


def find_waste(inst, matching: Matching) -> list[BlockingWitness]:
    """Pairs that can be added without releasing anybody."""
    _require_feasible(inst, matching)
    return _find(compile_market(inst), matching, empty_only=True)


def _check_ml(inst, ml: MasterList) -> None:
    agents = inst.students if isinstance(inst, ScdcInstance) else inst.doctors
    if not ml.covers(agents):
        raise ValueError("master list must rank every agent exactly once")


def check_fair_by_master_list(inst: ScdcInstance | HrqInstance, matching: Matching,
                              ml: MasterList) -> list[BlockingWitness]:
    """Justified envy where every released student is also below the envier
    on the master list. An empty result means the outcome is fair by ``ml``.
    """
    _require_feasible(inst, matching)
    _check_ml(inst, ml)
    market = compile_market(inst)
    return _find(market, matching, ml_rank=ml_rank_vector(market, ml), nonempty=True)
