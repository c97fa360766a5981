"""Index-based view of an instance shared by the checkers and solvers.

Both models reduce to the same shape: agents with preference lists over
institutions, institutions with priorities over agents, and a list of
counters. A counter is a set of contracts with a ``[lo, hi]`` bound on how
many of them may be in a matching. Capacities, type quotas and regional
quotas are all counters; they differ only in which contracts they cover.
"""
from __future__ import annotations

from dataclasses import dataclass
from .model import HrqInstance, MasterList, ScdcInstance


@dataclass(frozen=True)
class Counter:
    tag: tuple  # ("capacity", inst) | ("type", school, type_name) | ("region", region_id)
    lo: int
    hi: int


class Market:
    def __init__(self, agents, institutions, prefs, priorities, counters, contract_counters,
                 region_ranks, kind):
        self.kind = kind
        self.agents: tuple[str, ...] = tuple(agents)
        self.institutions: tuple[str, ...] = tuple(institutions)
        self.agent_index = {a: k for k, a in enumerate(self.agents)}
        self.inst_index = {i: k for k, i in enumerate(self.institutions)}
        # prefs[a] -> list of institution indices, mutually acceptable only
        self.prefs: list[list[int]] = prefs
        self.pref_rank: list[dict[int, int]] = [
            {i: r for r, i in enumerate(p)} for p in prefs
        ]
        # priority_rank[i][a] -> rank of agent a at institution i
        self.priority_rank: list[dict[int, int]] = priorities
        self.counters: list[Counter] = counters
        # contract (a, i) -> tuple of counter indices
        self.contract_counters: dict[tuple[int, int], tuple[int, ...]] = contract_counters
        # region_ranks[i] -> list of dicts (a, i2) -> rank, one per region containing i
        self.region_ranks: list[list[dict[tuple[int, int], int]]] = region_ranks
        self.has_lower_bounds = any(c.lo > 0 for c in counters)

        self.applicants: list[list[int]] = [[] for _ in self.institutions]
        for a, p in enumerate(prefs):
            for i in p:
                self.applicants[i].append(a)
        self.counter_agents: list[set[int]] = [set() for _ in counters]
        for (a, i), cs in contract_counters.items():
            for c in cs:
                self.counter_agents[c].add(a)
        self.agent_counters: list[set[int]] = [set() for _ in self.agents]
        for (a, i), cs in contract_counters.items():
            self.agent_counters[a].update(cs)
        self.inst_counters: list[set[int]] = [set() for _ in self.institutions]
        for (a, i), cs in contract_counters.items():
            self.inst_counters[i].update(cs)
        # institutions sharing a region with i (for cross-hospital displacement)
        self.neighbours: list[list[int]] = [[i] for i in range(len(self.institutions))]

    # ------------------------------------------------------------------
    def encode(self, pairs) -> list[tuple[int, int]] | None:
        """Index form of a matching, or None if any pair is not a contract."""
        out = []
        for a, i in pairs:
            ai = self.agent_index.get(a)
            ii = self.inst_index.get(i)
            if ai is None or ii is None or (ai, ii) not in self.contract_counters:
                return None
            out.append((ai, ii))
        return out

    def counts(self, contracts) -> list[int]:
        counts = [0] * len(self.counters)
        for c in contracts:
            for k in self.contract_counters[c]:
                counts[k] += 1
        return counts

    def within_bounds(self, counts) -> bool:
        return all(c.lo <= n <= c.hi for c, n in zip(self.counters, counts))

    def delta_feasible(self, counts, added, removed) -> bool:
        """Feasibility after a local change, given a feasible starting point.

        Only the counters touched by ``added``/``removed`` can change.
        """
        delta: dict[int, int] = {}
        for c in added:
            for k in self.contract_counters[c]:
                delta[k] = delta.get(k, 0) + 1
        for c in removed:
            for k in self.contract_counters[c]:
                delta[k] = delta.get(k, 0) - 1
        for k, d in delta.items():
            n = counts[k] + d
            ctr = self.counters[k]
            if n < ctr.lo or n > ctr.hi:
                return False
        return True

    def may_displace(self, a: int, i: int, a2: int, i2: int, ml_rank=None) -> bool:
        """Whether agent ``a`` applying to ``i`` outranks contract ``(a2, i2)``."""
        if i2 == i:
            pr = self.priority_rank[i]
            if a2 not in pr or pr[a] >= pr[a2]:
                return False
        shared = 0
        for ranks in self.region_ranks[i]:
            other = ranks.get((a2, i2))
            if other is None:
                if i2 == i:
                    return False
                continue
            shared += 1
            mine = ranks.get((a, i))
            if mine is None or mine >= other:
                return False
        if i2 != i and shared == 0:
            return False
        if ml_rank is not None and ml_rank[a] >= ml_rank[a2]:
            return False
        return True


def _region_rank_dicts(inst: HrqInstance, agent_index, inst_index, n_inst):
    ranks: list[list[dict]] = [[] for _ in range(n_inst)]
    for r in inst.regions:
        d = {}
        for k, (doc, hosp) in enumerate(r.priority):
            if doc in agent_index and hosp in inst_index:
                d[(agent_index[doc], inst_index[hosp])] = k
        for h in sorted(r.hospitals):
            if h in inst_index:
                ranks[inst_index[h]].append(d)
    return ranks


def _build_scdc(inst: ScdcInstance) -> Market:
    agents = list(inst.students)
    institutions = list(inst.schools)
    ai = {a: k for k, a in enumerate(agents)}
    ii = {c: k for k, c in enumerate(institutions)}
    prefs = []
    for sid in agents:
        prefs.append([ii[c] for c in inst.students[sid].preferences if inst.has_contract(sid, c)])
    priorities = []
    for cid in institutions:
        priorities.append({ai[s]: r for r, s in enumerate(inst.schools[cid].priority) if s in ai})
    counters: list[Counter] = []
    cap_idx = {}
    type_idx = {}
    for cid in institutions:
        sc = inst.schools[cid]
        cap_idx[cid] = len(counters)
        counters.append(Counter(("capacity", cid), 0, sc.capacity))
        for j, tname in enumerate(inst.type_names):
            type_idx[(cid, j)] = len(counters)
            counters.append(Counter(("type", cid, tname), sc.min_quotas[j], sc.max_quotas[j]))
    contract_counters = {}
    for a, p in enumerate(prefs):
        st = inst.students[agents[a]]
        for i in p:
            cid = institutions[i]
            cs = [cap_idx[cid]]
            cs += [type_idx[(cid, j)] for j, bit in enumerate(st.types) if bit]
            contract_counters[(a, i)] = tuple(cs)
    return Market(agents, institutions, prefs, priorities, counters, contract_counters,
                  [[] for _ in institutions], "scdc")


def _build_hrq(inst: HrqInstance) -> Market:
    agents = list(inst.doctors)
    institutions = list(inst.hospitals)
    ai = {a: k for k, a in enumerate(agents)}
    ii = {h: k for k, h in enumerate(institutions)}
    prefs = []
    for did in agents:
        prefs.append([ii[h] for h in inst.doctors[did].preferences if inst.has_contract(did, h)])
    priorities = []
    for hid in institutions:
        priorities.append({ai[d]: r for r, d in enumerate(inst.hospitals[hid].priority) if d in ai})
    counters: list[Counter] = []
    cap_idx = {}
    for hid in institutions:
        cap_idx[hid] = len(counters)
        counters.append(Counter(("capacity", hid), 0, inst.hospitals[hid].capacity))
    region_of_hosp: dict[str, list[int]] = {h: [] for h in institutions}
    for r in inst.regions:
        k = len(counters)
        counters.append(Counter(("region", r.id), r.min_quota, r.max_quota))
        for h in r.hospitals:
            if h in region_of_hosp:
                region_of_hosp[h].append(k)
    contract_counters = {}
    for a, p in enumerate(prefs):
        for i in p:
            h = institutions[i]
            contract_counters[(a, i)] = (cap_idx[h], *sorted(region_of_hosp[h]))
    market = Market(agents, institutions, prefs, priorities, counters, contract_counters,
                    _region_rank_dicts(inst, ai, ii, len(institutions)), "hrq")
    for i, h in enumerate(institutions):
        near = {i}
        for r in inst.regions:
            if h in r.hospitals:
                near.update(ii[x] for x in r.hospitals if x in ii)
        market.neighbours[i] = sorted(near)
    return market


def compile_market(inst: ScdcInstance | HrqInstance) -> Market:
    # instances are immutable by convention, so memoise on the object
    market = inst.__dict__.get("_market")
    if market is None:
        market = _build_scdc(inst) if isinstance(inst, ScdcInstance) else _build_hrq(inst)
        object.__setattr__(inst, "_market", market)
    return market


def ml_rank_vector(market: Market, ml: MasterList) -> list[int]:
    rank = ml.rank()
    return [rank[a] for a in market.agents]
