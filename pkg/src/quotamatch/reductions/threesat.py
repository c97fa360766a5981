"""3-SAT gadget (each literal occurring exactly twice) with no minimum quotas.

Every variable contributes 22 students and 18 schools; every clause one
school of capacity 2. The instance has a stable outcome iff the formula is
satisfiable. Stable outcomes restricted to a variable's block follow one of
two fixed patterns, selected by the variable's truth value.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..model import Matching, School, ScdcInstance, Student

TYPES = ("t1", "t2")
Literal = tuple[str, bool]  # (variable, positive?)


@dataclass(frozen=True)
class CnfFormula:
    variables: tuple[str, ...]
    clauses: tuple[tuple[Literal, ...], ...]

    def restriction_errors(self) -> list[str]:
        errors = []
        if len(set(self.variables)) != len(self.variables):
            errors.append("duplicate variables")
        counts = {(v, pol): 0 for v in self.variables for pol in (True, False)}
        for j, clause in enumerate(self.clauses):
            if len(clause) != 3:
                errors.append(f"clause {j + 1} has {len(clause)} literals, expected 3")
            for lit in clause:
                if lit not in counts:
                    errors.append(f"clause {j + 1} uses unknown variable {lit[0]!r}")
                else:
                    counts[lit] += 1
        for (v, pol), n in counts.items():
            if n != 2:
                sign = "" if pol else "-"
                errors.append(f"literal {sign}{v} occurs {n} times, expected exactly 2")
        return errors

    def satisfied_by(self, assignment: dict[str, bool]) -> bool:
        return all(any(assignment[v] == pol for v, pol in c) for c in self.clauses)


class GadgetNames:
    """Identifier scheme for the students and schools of a formula's gadget."""

    def __init__(self, formula: CnfFormula):
        self.formula = formula
        self.width = len(str(len(formula.variables)))
        self.cwidth = len(str(len(formula.clauses)))
        self.index = {v: k + 1 for k, v in enumerate(formula.variables)}
        # (variable, polarity) -> [clause school of 1st occurrence, of 2nd]
        self.occurrence: dict[Literal, list[str]] = {}
        # (clause index, position) -> literal student
        self.occupant: dict[tuple[int, int], str] = {}
        for j, clause in enumerate(formula.clauses):
            for pos, (v, pol) in enumerate(clause):
                occ = self.occurrence.setdefault((v, pol), [])
                occ.append(self.clause(j))
                name = ("t" if pol else "f") + str(len(occ))
                self.occupant[(j, pos)] = self.student(v, name)

    def prefix(self, var: str) -> str:
        return f"v{self.index[var]:0{self.width}d}"

    def student(self, var: str, name: str) -> str:
        return f"{self.prefix(var)}_{name}"

    def school(self, var: str, name: str) -> str:
        return f"{self.prefix(var)}_{name}"

    def clause(self, j: int) -> str:
        return f"o{j + 1:0{self.cwidth}d}"

    def link(self, var: str, name: str) -> str:
        """Clause school o(name) for name in t1, t2, f1, f2."""
        return self.occurrence[(var, name[0] == "t")][int(name[1]) - 1]

    def variable_students(self, var: str) -> list[str]:
        names = [f"s{k}" for k in range(1, 7)] + ["t1", "t2", "f1", "f2"]
        names += [f"a{k}_{m}" for k in range(1, 5) for m in range(1, 4)]
        return [self.student(var, n) for n in names]


def _variable_block(names: GadgetNames, v: str):
    st = lambda n: names.student(v, n)  # noqa: E731
    sc = lambda n: names.school(v, n)  # noqa: E731
    students = {
        st("s1"): Student((1, 1), (sc("c1"), sc("ct1"))),
        st("s2"): Student((1, 1), (sc("c2"), sc("cf1"))),
        st("s3"): Student((1, 0), (sc("c1"), sc("c2"))),
        st("s4"): Student((0, 1), (sc("c2"), sc("c1"))),
        st("s5"): Student((0, 0), (sc("c1"), sc("ct2"))),
        st("s6"): Student((0, 0), (sc("c2"), sc("cf2"))),
        st("t1"): Student((1, 0), (sc("ct1"), names.link(v, "t1"), sc("b1_3"))),
        st("t2"): Student((0, 1), (sc("ct2"), names.link(v, "t2"), sc("b2_3"))),
        st("f1"): Student((1, 0), (sc("cf1"), names.link(v, "f1"), sc("b3_3"))),
        st("f2"): Student((0, 1), (sc("cf2"), names.link(v, "f2"), sc("b4_3"))),
    }
    for k in range(1, 5):
        students[st(f"a{k}_1")] = Student((0, 1), (sc(f"b{k}_2"), sc(f"b{k}_1")))
        students[st(f"a{k}_2")] = Student((1, 0), (sc(f"b{k}_1"), sc(f"b{k}_2")))
        students[st(f"a{k}_3")] = Student((1, 1), (sc(f"b{k}_3"), sc(f"b{k}_1")))

    def school(cap, *prio):
        return School(cap, (1, 1), (0, 0), tuple(st(p) for p in prio))

    schools = {
        sc("c1"): school(2, "s4", "s1", "s3", "s5"),
        sc("c2"): school(2, "s3", "s2", "s4", "s6"),
        sc("ct1"): school(1, "s1", "t1"),
        sc("ct2"): school(1, "s5", "t2"),
        sc("cf1"): school(1, "s2", "f1"),
        sc("cf2"): school(1, "s6", "f2"),
    }
    theta = {1: "t1", 2: "t2", 3: "f1", 4: "f2"}
    for k in range(1, 5):
        schools[sc(f"b{k}_1")] = school(2, f"a{k}_1", f"a{k}_3", f"a{k}_2")
        schools[sc(f"b{k}_2")] = school(1, f"a{k}_2", f"a{k}_1")
        schools[sc(f"b{k}_3")] = school(1, theta[k], f"a{k}_3")
    return students, schools


def gadget_from_3sat(formula: CnfFormula) -> ScdcInstance:
    errors = formula.restriction_errors()
    if errors:
        raise ValueError("; ".join(errors))
    names = GadgetNames(formula)
    students: dict[str, Student] = {}
    schools: dict[str, School] = {}
    for v in formula.variables:
        st, sc = _variable_block(names, v)
        students.update(st)
        schools.update(sc)
    for j, clause in enumerate(formula.clauses):
        prio = tuple(names.occupant[(j, pos)] for pos in range(len(clause)))
        schools[names.clause(j)] = School(2, (2, 2), (0, 0), prio)
    return ScdcInstance(TYPES, students, schools)


def variable_outcome(names: GadgetNames, var: str, value: bool) -> Matching:
    """The fixed per-variable pattern for ``var`` set to ``value``."""
    st = lambda n: names.student(var, n)  # noqa: E731
    sc = lambda n: names.school(var, n)  # noqa: E731
    if value:
        pairs = [
            (st("s1"), sc("c1")), (st("s2"), sc("cf1")), (st("s3"), sc("c2")),
            (st("s4"), sc("c2")), (st("s5"), sc("c1")), (st("s6"), sc("cf2")),
            (st("t1"), sc("ct1")), (st("t2"), sc("ct2")),
            (st("f1"), names.link(var, "f1")), (st("f2"), names.link(var, "f2")),
        ]
    else:
        pairs = [
            (st("s1"), sc("ct1")), (st("s2"), sc("c2")), (st("s3"), sc("c1")),
            (st("s4"), sc("c1")), (st("s5"), sc("ct2")), (st("s6"), sc("c2")),
            (st("t1"), names.link(var, "t1")), (st("t2"), names.link(var, "t2")),
            (st("f1"), sc("cf1")), (st("f2"), sc("cf2")),
        ]
    for k in range(1, 5):
        pairs += [
            (st(f"a{k}_1"), sc(f"b{k}_2")),
            (st(f"a{k}_2"), sc(f"b{k}_1")),
            (st(f"a{k}_3"), sc(f"b{k}_3")),
        ]
    return Matching.of(pairs)


def outcome_from_assignment(formula: CnfFormula, gadget: ScdcInstance,
                            assignment: dict[str, bool], *, strict: bool = True) -> Matching:
    """Union of the per-variable patterns.

    Literal students of false literals end up at their clause schools, so a
    clause with three false literals overfills its school. With
    ``strict=False`` such an outcome is returned anyway.
    """
    missing = [v for v in formula.variables if v not in assignment]
    if missing:
        raise ValueError(f"assignment misses variables {missing}")
    if strict and not formula.satisfied_by(assignment):
        raise ValueError("assignment does not satisfy the formula")
    names = GadgetNames(formula)
    out = Matching()
    for v in formula.variables:
        out = out | variable_outcome(names, v, assignment[v])
    unknown = [p for p in out.pairs if not gadget.has_contract(*p)]
    if unknown:
        raise ValueError(f"gadget does not match the formula: unknown contracts {unknown[:3]}")
    return out
