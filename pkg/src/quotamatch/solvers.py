"""Exhaustive outcome search and serial dictatorship with a master list."""
from __future__ import annotations

import enum
import time
from dataclasses import dataclass, replace

from ._market import Market, compile_market, ml_rank_vector
from .model import HrqInstance, MasterList, Matching, ScdcInstance, validate_hrq, validate_scdc
from .reductions.diversity import reduce_scdc_to_hrq, restore_matching
from .stability import (
    blocking_witness_for,
    check_fair_by_master_list,
    find_waste,
    is_stable,
)


@dataclass(frozen=True)
class SearchBudget:
    max_nodes: int = 10**8
    max_seconds: float = 300.0

    def __post_init__(self):
        if self.max_nodes <= 0 or self.max_seconds <= 0:
            raise ValueError("search budget must be positive")


class SearchStatus(enum.Enum):
    FOUND = "found"
    NONE_EXISTS = "none_exists"
    BUDGET_EXCEEDED = "budget_exceeded"


@dataclass(frozen=True)
class SearchResult:
    status: SearchStatus
    nodes_explored: int
    matchings: tuple[Matching, ...] = ()

    @property
    def matching(self) -> Matching | None:
        return self.matchings[0] if self.matchings else None


class _BudgetExceeded(Exception):
    pass


def _validate(inst) -> None:
    if isinstance(inst, ScdcInstance):
        validate_scdc(inst).raise_if_invalid()
    else:
        validate_hrq(inst).raise_if_invalid()


def _id_order(market: Market) -> list[int]:
    return sorted(range(len(market.agents)), key=lambda a: market.agents[a])


def _relevant_agents(market: Market) -> list[set[int]]:
    rel = []
    for i in range(len(market.institutions)):
        agents: set[int] = set()
        for k in market.inst_counters[i]:
            agents |= market.counter_agents[k]
        rel.append(agents)
    return rel


def _finalising_order(market: Market) -> list[int]:
    """Greedy agent order that lets institutions become final early.

    An institution is final once every agent that can affect one of its
    counters has been decided; blocking pairs on final institutions can be
    checked before the search reaches a leaf.
    """
    rel = _relevant_agents(market)
    touching: list[list[int]] = [[] for _ in market.agents]
    for i, agents in enumerate(rel):
        for a in agents:
            touching[a].append(i)
    left = [len(r) for r in rel]
    todo = set(range(len(market.agents)))
    order = []
    while todo:
        def score(a):
            completes = sum(1 for i in touching[a] if left[i] == 1)
            return (-completes, sum(left[i] for i in touching[a]), market.agents[a])
        best = min(todo, key=score)
        order.append(best)
        todo.remove(best)
        for i in touching[best]:
            left[i] -= 1
    return order


class _Search:
    def __init__(self, market: Market, order: list[int], budget: SearchBudget,
                 prune_blocking: bool = False, ml_rank=None):
        self.m = market
        self.order = order
        self.budget = budget
        self.prune_blocking = prune_blocking
        self.ml_rank = ml_rank
        self.nodes = 0
        self.truncated = False
        self.pos = {a: k for k, a in enumerate(order)}
        n_inst = len(market.institutions)
        rel = _relevant_agents(market)
        self.final_at = [max((self.pos[a] for a in rel[i]), default=-1) for i in range(n_inst)]
        self.newly_final: list[list[int]] = [[] for _ in order]
        for i, k in enumerate(self.final_at):
            if k >= 0:
                self.newly_final[k].append(i)

    def _final(self, i, k) -> bool:
        return i is None or self.final_at[i] <= k

    def run(self):
        m = self.m
        self.counts = [0] * len(m.counters)
        self.remaining = [len(s) for s in m.counter_agents]
        self.current: dict[int, int] = {}
        self.holders: dict[int, list[int]] = {}
        self.start = time.monotonic()
        if any(self.remaining[k] < c.lo for k, c in enumerate(m.counters)):
            return
        try:
            yield from self._step(0)
        except _BudgetExceeded:
            self.truncated = True

    def _tick(self):
        self.nodes += 1
        if self.nodes > self.budget.max_nodes:
            raise _BudgetExceeded
        if self.nodes % 1024 == 0 and time.monotonic() - self.start > self.budget.max_seconds:
            raise _BudgetExceeded

    def _step(self, depth: int):
        m = self.m
        if depth == len(self.order):
            yield sorted(self.current.items())
            return
        a = self.order[depth]
        counters_of_a = m.agent_counters[a]
        for i in m.prefs[a] + [None]:
            self._tick()
            if i is not None:
                cs = m.contract_counters[(a, i)]
                if any(self.counts[k] + 1 > m.counters[k].hi for k in cs):
                    continue
                for k in cs:
                    self.counts[k] += 1
                self.current[a] = i
                self.holders.setdefault(i, []).append(a)
            for k in counters_of_a:
                self.remaining[k] -= 1
            ok = all(self.counts[k] + self.remaining[k] >= m.counters[k].lo for k in counters_of_a)
            if ok and self.prune_blocking:
                ok = not self._blocked(depth, a)
            if ok:
                yield from self._step(depth + 1)
            for k in counters_of_a:
                self.remaining[k] += 1
            if i is not None:
                for k in cs:
                    self.counts[k] -= 1
                del self.current[a]
                self.holders[i].pop()

    def _better(self, a):
        j = self.current.get(a)
        prefs = self.m.prefs[a]
        return prefs if j is None else prefs[: self.m.pref_rank[a][j]]

    def _blocked(self, k: int, x: int) -> bool:
        """Whether a pair that just became decidable blocks the partial outcome."""
        m = self.m
        pairs = set()
        if self._final(self.current.get(x), k):
            for i in self._better(x):
                if self.final_at[i] <= k:
                    pairs.add((x, i))
        for n in self.newly_final[k]:
            for a in m.applicants[n]:
                if self.pos[a] <= k and self._final(self.current.get(a), k):
                    j = self.current.get(a)
                    if j is None or m.pref_rank[a][n] < m.pref_rank[a][j]:
                        pairs.add((a, n))
            for a in self.holders.get(n, ()):
                for i in self._better(a):
                    if self.final_at[i] <= k:
                        pairs.add((a, i))
        for a, i in sorted(pairs):
            if blocking_witness_for(m, self.counts, self.current, self.holders, a, i,
                                    ml_rank=self.ml_rank) is not None:
                return True
        return False


class Enumeration:
    """Iterable over feasible outcomes; ``truncated`` is set if the budget ran out."""

    def __init__(self, inst, budget: SearchBudget | None = None):
        _validate(inst)
        self.market = compile_market(inst)
        self.budget = budget or SearchBudget()
        self.nodes_explored = 0
        self.truncated = False

    def __iter__(self):
        m = self.market
        search = _Search(m, _id_order(m), self.budget)
        try:
            for contracts in search.run():
                self.nodes_explored = search.nodes
                yield Matching.of((m.agents[a], m.institutions[i]) for a, i in contracts)
        finally:
            self.nodes_explored = search.nodes
            self.truncated = search.truncated


def enumerate_feasible(inst: ScdcInstance | HrqInstance,
                       budget: SearchBudget | None = None) -> Enumeration:
    """Every feasible outcome exactly once.

    Agents are visited in id order; each takes one acceptable institution in
    its preference order, then stays unmatched. Maximum quotas prune on the
    way down, minimum quotas once too few undecided agents remain.
    """
    return Enumeration(inst, budget)


def find_stable(inst: ScdcInstance | HrqInstance, mode: str = "first",
                budget: SearchBudget | None = None,
                master_list: MasterList | None = None) -> SearchResult:
    """Search for stable outcomes.

    ``mode`` is ``first``, ``exists`` (both stop at the first hit) or
    ``all``. With a master list the target is a feasible, non-wasteful
    outcome that is fair by the master list instead of a stable one.
    """
    if mode not in ("first", "exists", "all"):
        raise ValueError(f"unknown mode {mode!r}")
    _validate(inst)
    budget = budget or SearchBudget()
    m = compile_market(inst)
    ml_rank = None
    if master_list is not None:
        agents = inst.students if isinstance(inst, ScdcInstance) else inst.doctors
        if not master_list.covers(agents):
            raise ValueError("master list must rank every agent exactly once")
        ml_rank = ml_rank_vector(m, master_list)

    def accept(x: Matching) -> bool:
        if master_list is None:
            return is_stable(inst, x)
        return not find_waste(inst, x) and not check_fair_by_master_list(inst, x, master_list)

    search = _Search(m, _finalising_order(m), budget, prune_blocking=True, ml_rank=ml_rank)
    found = []
    for contracts in search.run():
        x = Matching.of((m.agents[a], m.institutions[i]) for a, i in contracts)
        if accept(x):
            found.append(x)
            if mode != "all":
                break
    if search.truncated:
        status = SearchStatus.BUDGET_EXCEEDED
    elif found:
        status = SearchStatus.FOUND
    else:
        status = SearchStatus.NONE_EXISTS
    return SearchResult(status, search.nodes, tuple(found))


def order_regions_by_master_list(inst: HrqInstance, ml: MasterList, *,
                                 hospitals: bool = False) -> HrqInstance:
    """Copy of ``inst`` whose region priorities follow the master list.

    With ``hospitals=True`` hospital priorities are reordered too. That
    matters for hospitals outside every region, where the hospital's own
    priority is the only one a displacement has to respect.
    """
    rank = ml.rank()
    regions = tuple(
        replace(r, priority=tuple(sorted(r.priority, key=lambda c: rank[c[0]])))
        for r in inst.regions
    )
    out = replace(inst, regions=regions)
    if hospitals:
        out = replace(out, hospitals={
            h: replace(x, priority=tuple(sorted(x.priority, key=rank.__getitem__)))
            for h, x in inst.hospitals.items()
        })
    return out


def serial_dictatorship(inst: HrqInstance, ml: MasterList) -> Matching:
    """Doctors pick in master-list order, subject to capacities and regional caps."""
    if inst.has_min_quotas():
        raise ValueError("serial dictatorship requires zero regional minimum quotas")
    if not ml.covers(inst.doctors):
        raise ValueError("master list must rank every doctor exactly once")
    load = {h: 0 for h in inst.hospitals}
    region_load = {r.id: 0 for r in inst.regions}
    covering = {h: [r for r in inst.regions if h in r.hospitals] for h in inst.hospitals}
    pairs = []
    for d in ml.order:
        for h in inst.doctors[d].preferences:
            if not inst.has_contract(d, h):
                continue
            if load[h] >= inst.hospitals[h].capacity:
                continue
            if any(region_load[r.id] >= r.max_quota for r in covering[h]):
                continue
            load[h] += 1
            for r in covering[h]:
                region_load[r.id] += 1
            pairs.append((d, h))
            break
    return Matching.of(pairs)


def sd_school_choice(inst: ScdcInstance, ml: MasterList) -> Matching:
    """Serial dictatorship run on the induced regional instance, mapped back."""
    if inst.has_min_quotas():
        raise ValueError("serial dictatorship requires zero type-specific minimum quotas")
    if not ml.covers(inst.students):
        raise ValueError("master list must rank every student exactly once")
    hrq, rmap = reduce_scdc_to_hrq(inst)
    doctor_ml = MasterList(tuple(rmap.student_to_doctor[s] for s in ml.order))
    hrq = order_regions_by_master_list(hrq, doctor_ml)
    return restore_matching(rmap, serial_dictatorship(hrq, doctor_ml))
