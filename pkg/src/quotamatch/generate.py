"""Seeded random instance generators.

Randomness comes from SplitMix64 so that a seed reproduces the same
instance on any platform and in any language:

* ``next_u64``: ``state += 0x9E3779B97F4A7C15``; then the standard
  SplitMix64 finaliser (xor-shift 30, multiply ``0xBF58476D1CE4E5B9``,
  xor-shift 27, multiply ``0x94D049BB133111EB``, xor-shift 31), mod 2**64.
* ``below(n)``: ``(next_u64() * n) >> 64``.
* ``uniform()``: ``(next_u64() >> 11) / 2**53``.
* ``shuffle``: Fisher-Yates from the last index down, ``j = below(i + 1)``.

The draw order of each generator is listed in its docstring.
"""
from __future__ import annotations

from dataclasses import dataclass

from .model import Doctor, Hospital, HrqInstance, RegionSpec, School, ScdcInstance, Student
from .reductions.threesat import CnfFormula

MASK64 = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int):
        if not 0 <= seed <= MASK64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        self.state = seed

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        if n <= 0:
            raise ValueError("below() needs a positive bound")
        return (self.next_u64() * n) >> 64

    def uniform(self) -> float:
        return (self.next_u64() >> 11) / float(1 << 53)

    def chance(self, p: float) -> bool:
        return self.uniform() < p

    def shuffle(self, items: list) -> list:
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]
        return items


def _check_common(prob: float, mode: str, seed: int) -> None:
    if not 0 < prob <= 1:
        raise ValueError("acceptability_prob must lie in (0, 1]")
    if mode not in ("zero", "random"):
        raise ValueError("min_quota_mode must be 'zero' or 'random'")
    if not 0 <= seed <= MASK64:
        raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class RandomScdcParams:
    n_students: int
    n_schools: int
    n_types: int
    acceptability_prob: float = 0.7
    min_quota_mode: str = "random"
    seed: int = 0

    def __post_init__(self):
        if min(self.n_students, self.n_schools, self.n_types) < 1:
            raise ValueError("n_students, n_schools and n_types must be positive")
        if self.n_types > self.n_students:
            raise ValueError("n_types may not exceed n_students")
        _check_common(self.acceptability_prob, self.min_quota_mode, self.seed)


@dataclass(frozen=True)
class RandomHrqParams:
    n_doctors: int
    n_hospitals: int
    n_regions: int
    acceptability_prob: float = 0.7
    min_quota_mode: str = "random"
    seed: int = 0

    def __post_init__(self):
        if min(self.n_doctors, self.n_hospitals) < 1 or self.n_regions < 0:
            raise ValueError("need at least one doctor and one hospital")
        _check_common(self.acceptability_prob, self.min_quota_mode, self.seed)


def gen_random_scdc(params: RandomScdcParams) -> ScdcInstance:
    """Random diversity-constrained instance.

    Draw order: type bits per student (student-major); one acceptability
    draw per (student, school); a shuffle of each student's acceptable
    schools; a shuffle of each school's acceptable students; then per
    school the capacity ``1 + below(n_students)`` and, per type, the max
    quota ``below(capacity + 1)`` and (random mode) min quota
    ``below(max + 1)``.
    """
    rng = SplitMix64(params.seed)
    names = tuple(f"t{j + 1}" for j in range(params.n_types))
    sids = [f"s{k + 1}" for k in range(params.n_students)]
    cids = [f"c{k + 1}" for k in range(params.n_schools)]
    types = {s: tuple(rng.below(2) for _ in names) for s in sids}
    ok = {(s, c): rng.chance(params.acceptability_prob) for s in sids for c in cids}
    prefs = {s: tuple(rng.shuffle([c for c in cids if ok[(s, c)]])) for s in sids}
    prios = {c: tuple(rng.shuffle([s for s in sids if ok[(s, c)]])) for c in cids}
    schools = {}
    for c in cids:
        cap = 1 + rng.below(params.n_students)
        his, los = [], []
        for _ in names:
            hi = rng.below(cap + 1)
            lo = rng.below(hi + 1) if params.min_quota_mode == "random" else 0
            his.append(hi)
            los.append(lo)
        schools[c] = School(cap, tuple(his), tuple(los), prios[c])
    students = {s: Student(types[s], prefs[s]) for s in sids}
    return ScdcInstance(names, students, schools)


def gen_random_hrq(params: RandomHrqParams) -> HrqInstance:
    """Random regional-quota instance with possibly overlapping regions.

    Draw order: one acceptability draw per (doctor, hospital); shuffles of
    doctor then hospital lists; hospital capacities ``1 + below(n_doctors)``;
    then per region: membership draws (probability 1/2 per hospital), max
    quota ``below(n_doctors + 1)``, min quota ``below(max + 1)`` (random
    mode) and a shuffle of the region's contracts.
    """
    rng = SplitMix64(params.seed)
    dids = [f"d{k + 1}" for k in range(params.n_doctors)]
    hids = [f"h{k + 1}" for k in range(params.n_hospitals)]
    ok = {(d, h): rng.chance(params.acceptability_prob) for d in dids for h in hids}
    prefs = {d: tuple(rng.shuffle([h for h in hids if ok[(d, h)]])) for d in dids}
    prios = {h: tuple(rng.shuffle([d for d in dids if ok[(d, h)]])) for h in hids}
    hospitals = {h: Hospital(1 + rng.below(params.n_doctors), prios[h]) for h in hids}
    contracts = [(d, h) for d in dids for h in prefs[d]]
    regions = []
    for k in range(params.n_regions):
        members = frozenset(h for h in hids if rng.chance(0.5))
        hi = rng.below(params.n_doctors + 1)
        lo = rng.below(hi + 1) if params.min_quota_mode == "random" else 0
        prio = rng.shuffle([c for c in contracts if c[1] in members])
        regions.append(RegionSpec(f"r{k + 1}", members, hi, lo, tuple(prio)))
    doctors = {d: Doctor(prefs[d]) for d in dids}
    return HrqInstance(doctors, hospitals, tuple(regions))


def random_restricted_formula(n_vars: int, rng: SplitMix64) -> CnfFormula:
    """3-CNF in which every literal occurs exactly twice (needs 3 | 4*n_vars)."""
    if (4 * n_vars) % 3:
        raise ValueError("4 * n_vars must be divisible by 3")
    variables = tuple(str(k + 1) for k in range(n_vars))
    occurrences = [(v, pol) for v in variables for pol in (True, False) for _ in range(2)]
    rng.shuffle(occurrences)
    clauses = tuple(tuple(occurrences[k:k + 3]) for k in range(0, len(occurrences), 3))
    return CnfFormula(variables, clauses)
