"""JSON file formats and DIMACS CNF parsing.

Every JSON document carries a top-level ``kind``: ``scdc``, ``hrq``,
``matching``, ``map``, ``master_list`` or ``setcover``. Keys follow the
model field names. Canonical output sorts object keys and keeps arrays in
order (preference and priority arrays are order-sensitive).
"""
from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import Any

from .model import (
    Doctor,
    Hospital,
    HrqInstance,
    MasterList,
    Matching,
    RegionSpec,
    School,
    ScdcInstance,
    Student,
    validate_hrq,
    validate_scdc,
)
from .reductions.diversity import ReductionMap, SchoolImage
from .reductions.setcover import SetCoverInstance
from .reductions.threesat import CnfFormula


class FormatError(ValueError):
    pass


# ----------------------------------------------------------------------
# serialisation

def to_json(obj) -> dict:
    if isinstance(obj, ScdcInstance):
        return {
            "kind": "scdc",
            "type_names": list(obj.type_names),
            "students": {
                sid: {"types": list(st.types), "preferences": list(st.preferences)}
                for sid, st in obj.students.items()
            },
            "schools": {
                cid: {
                    "capacity": sc.capacity,
                    "max_quotas": list(sc.max_quotas),
                    "min_quotas": list(sc.min_quotas),
                    "priority": list(sc.priority),
                }
                for cid, sc in obj.schools.items()
            },
        }
    if isinstance(obj, HrqInstance):
        return {
            "kind": "hrq",
            "doctors": {d: {"preferences": list(doc.preferences)} for d, doc in obj.doctors.items()},
            "hospitals": {
                h: {"capacity": hosp.capacity, "priority": list(hosp.priority)}
                for h, hosp in obj.hospitals.items()
            },
            "regions": [
                {
                    "id": r.id,
                    "hospitals": sorted(r.hospitals),
                    "max_quota": r.max_quota,
                    "min_quota": r.min_quota,
                    "priority": [list(c) for c in r.priority],
                }
                for r in obj.regions
            ],
        }
    if isinstance(obj, Matching):
        return {"kind": "matching", "pairs": [list(p) for p in obj]}
    if isinstance(obj, MasterList):
        return {"kind": "master_list", "order": list(obj.order)}
    if isinstance(obj, ReductionMap):
        return {
            "kind": "map",
            "student_to_doctor": dict(obj.student_to_doctor),
            "contracts": [[list(x), list(y)] for x, y in sorted(obj.contracts.items())],
            "schools": {
                c: {
                    "region": img.region,
                    "type_regions": list(img.type_regions),
                    "hospitals": dict(img.hospitals),
                }
                for c, img in obj.schools.items()
            },
        }
    if isinstance(obj, SetCoverInstance):
        return {
            "kind": "setcover",
            "universe": list(obj.universe),
            "family": [sorted(f) for f in obj.family],
            "budget": obj.budget,
        }
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj) -> str:
    data = obj if isinstance(obj, (dict, list)) else to_json(obj)
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


# ----------------------------------------------------------------------
# parsing

def _get(d: dict, key: str, kind: type | tuple, where: str):
    if not isinstance(d, dict) or key not in d:
        raise FormatError(f"{where}: missing key {key!r}")
    value = d[key]
    if kind is int:
        if not isinstance(value, int) or isinstance(value, bool):
            raise FormatError(f"{where}.{key}: expected integer, got {value!r}")
    elif not isinstance(value, kind):
        raise FormatError(f"{where}.{key}: expected {getattr(kind, '__name__', kind)}")
    return value


def _str_list(values, where: str) -> tuple[str, ...]:
    if not isinstance(values, list) or not all(isinstance(v, str) for v in values):
        raise FormatError(f"{where}: expected a list of strings")
    return tuple(values)


def _int_list(values, where: str) -> tuple[int, ...]:
    if not isinstance(values, list) or not all(
        isinstance(v, int) and not isinstance(v, bool) for v in values
    ):
        raise FormatError(f"{where}: expected a list of integers")
    return tuple(values)


def _pair(value, where: str) -> tuple[str, str]:
    if not (isinstance(value, list) and len(value) == 2 and all(isinstance(v, str) for v in value)):
        raise FormatError(f"{where}: expected a [agent, institution] pair")
    return value[0], value[1]


def _scdc(data: dict) -> ScdcInstance:
    students = {}
    for sid, st in _get(data, "students", dict, "scdc").items():
        w = f"students.{sid}"
        students[sid] = Student(
            _int_list(_get(st, "types", list, w), w + ".types"),
            _str_list(_get(st, "preferences", list, w), w + ".preferences"),
        )
    schools = {}
    for cid, sc in _get(data, "schools", dict, "scdc").items():
        w = f"schools.{cid}"
        schools[cid] = School(
            _get(sc, "capacity", int, w),
            _int_list(_get(sc, "max_quotas", list, w), w + ".max_quotas"),
            _int_list(_get(sc, "min_quotas", list, w), w + ".min_quotas"),
            _str_list(_get(sc, "priority", list, w), w + ".priority"),
        )
    names = _str_list(_get(data, "type_names", list, "scdc"), "type_names")
    return ScdcInstance(names, students, schools)


def _hrq(data: dict) -> HrqInstance:
    doctors = {}
    for d, doc in _get(data, "doctors", dict, "hrq").items():
        w = f"doctors.{d}"
        doctors[d] = Doctor(_str_list(_get(doc, "preferences", list, w), w + ".preferences"))
    hospitals = {}
    for h, hosp in _get(data, "hospitals", dict, "hrq").items():
        w = f"hospitals.{h}"
        hospitals[h] = Hospital(
            _get(hosp, "capacity", int, w),
            _str_list(_get(hosp, "priority", list, w), w + ".priority"),
        )
    regions = []
    for k, r in enumerate(_get(data, "regions", list, "hrq")):
        w = f"regions[{k}]"
        regions.append(RegionSpec(
            id=_get(r, "id", str, w),
            hospitals=frozenset(_str_list(_get(r, "hospitals", list, w), w + ".hospitals")),
            max_quota=_get(r, "max_quota", int, w),
            min_quota=_get(r, "min_quota", int, w),
            priority=tuple(_pair(p, w + ".priority") for p in _get(r, "priority", list, w)),
        ))
    return HrqInstance(doctors, hospitals, tuple(regions))


def _map(data: dict) -> ReductionMap:
    s2d = _get(data, "student_to_doctor", dict, "map")
    contracts = {}
    for k, entry in enumerate(_get(data, "contracts", list, "map")):
        if not (isinstance(entry, list) and len(entry) == 2):
            raise FormatError(f"map.contracts[{k}]: expected [[s, c], [d, h]]")
        contracts[_pair(entry[0], "map.contracts")] = _pair(entry[1], "map.contracts")
    schools = {}
    for c, img in _get(data, "schools", dict, "map").items():
        w = f"map.schools.{c}"
        schools[c] = SchoolImage(
            _get(img, "region", str, w),
            _str_list(_get(img, "type_regions", list, w), w + ".type_regions"),
            dict(_get(img, "hospitals", dict, w)),
        )
    return ReductionMap(dict(s2d), contracts, schools)


def from_json(data: Any, validate: bool = True):
    """Build the object described by a parsed JSON document.

    Instances are validated unless ``validate`` is false; a failing
    validation raises ``InvalidInstanceError``.
    """
    if not isinstance(data, dict):
        raise FormatError("top-level JSON value must be an object")
    kind = data.get("kind")
    if kind == "scdc":
        inst = _scdc(data)
        if validate:
            validate_scdc(inst).raise_if_invalid()
        return inst
    if kind == "hrq":
        inst = _hrq(data)
        if validate:
            validate_hrq(inst).raise_if_invalid()
        return inst
    if kind == "matching":
        pairs = [_pair(p, "matching.pairs") for p in _get(data, "pairs", list, "matching")]
        return Matching.of(pairs)
    if kind == "master_list":
        order = _str_list(_get(data, "order", list, "master_list"), "master_list.order")
        if len(set(order)) != len(order):
            raise FormatError("master_list: duplicate agents")
        return MasterList(order)
    if kind == "map":
        return _map(data)
    if kind in ("setcover", None) and "universe" in data:
        family = [
            _str_list(f, "setcover.family") for f in _get(data, "family", list, "setcover")
        ]
        return SetCoverInstance.of(
            _str_list(_get(data, "universe", list, "setcover"), "setcover.universe"),
            family,
            _get(data, "budget", int, "setcover"),
        )
    raise FormatError(f"unknown document kind {kind!r}")


def loads(text: str, validate: bool = True):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from None
    return from_json(data, validate)


def read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def load(path: str, validate: bool = True):
    return loads(read_text(path), validate)


def save(obj, path: str | None) -> None:
    write_text(path, dumps(obj))


# ----------------------------------------------------------------------
# DIMACS CNF

def parse_dimacs(text: str) -> CnfFormula:
    """Parse DIMACS CNF, checking the exactly-twice literal restriction."""
    n_vars = n_clauses = None
    tokens: list[int] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise FormatError(f"line {lineno}: bad problem line {line!r}")
            try:
                n_vars, n_clauses = int(parts[2]), int(parts[3])
            except ValueError:
                raise FormatError(f"line {lineno}: bad problem line {line!r}") from None
            continue
        try:
            tokens.extend(int(t) for t in line.split())
        except ValueError:
            raise FormatError(f"line {lineno}: non-integer literal") from None
    if n_vars is None:
        raise FormatError("missing 'p cnf' problem line")

    clauses, current = [], []
    for t in tokens:
        if t == 0:
            clauses.append(tuple(current))
            current = []
        else:
            if abs(t) > n_vars:
                raise FormatError(f"literal {t} exceeds declared variable count {n_vars}")
            current.append((str(abs(t)), t > 0))
    if current:
        raise FormatError("last clause is not terminated by 0")
    if len(clauses) != n_clauses:
        raise FormatError(f"header declares {n_clauses} clauses, found {len(clauses)}")
    formula = CnfFormula(tuple(str(k) for k in range(1, n_vars + 1)), tuple(clauses))
    errors = formula.restriction_errors()
    if errors:
        raise FormatError("; ".join(errors))
    return formula


def format_dimacs(formula: CnfFormula) -> str:
    index = {v: k + 1 for k, v in enumerate(formula.variables)}
    lines = [f"p cnf {len(formula.variables)} {len(formula.clauses)}"]
    for clause in formula.clauses:
        lits = [str(index[v] if pol else -index[v]) for v, pol in clause]
        lines.append(" ".join(lits) + " 0")
    return "\n".join(lines) + "\n"
