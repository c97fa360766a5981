"""Command-line entry point.

Exit codes: 0 when the command succeeds or the checked property holds,
1 when the property fails (a witness is printed), 2 for usage, parse and
validation errors. Every file argument accepts ``-`` for stdin/stdout.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys

from . import __version__
from .feasibility import check_feasible
from .generate import RandomHrqParams, RandomScdcParams, gen_random_hrq, gen_random_scdc
from .io import FormatError, load, parse_dimacs, read_text, save
from .model import (
    HrqInstance,
    InfeasibleOutcomeError,
    InvalidInstanceError,
    MasterList,
    Matching,
    ScdcInstance,
    UnknownContractError,
    validate_hrq,
    validate_scdc,
)
from .reductions import (
    ReductionMap,
    SetCoverInstance,
    eliminate_min_quotas,
    gadget_from_3sat,
    gadget_from_set_cover,
    reduce_scdc_to_hrq,
    restore_matching,
)
from .solvers import SearchBudget, SearchStatus, find_stable, sd_school_choice, serial_dictatorship
from .stability import check_fair_by_master_list, find_blocking_pairs

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


class CliError(Exception):
    pass


def _load(path: str, *kinds, validate: bool = True):
    obj = load(path, validate)
    if kinds and not isinstance(obj, kinds):
        wanted = " or ".join(k.__name__ for k in kinds)
        raise CliError(f"{path}: expected {wanted}, got {type(obj).__name__}")
    return obj


def _emit(data) -> None:
    sys.stdout.write(json.dumps(data, sort_keys=True, indent=2) + "\n")


def _violation_json(v) -> dict:
    d = dataclasses.asdict(v)
    d["violation"] = type(v).__name__
    return {k: list(x) if isinstance(x, tuple) else x for k, x in d.items()}


# ----------------------------------------------------------------------
# subcommands

def cmd_validate(args) -> int:
    obj = _load(args.file, validate=False)
    if isinstance(obj, ScdcInstance):
        report = validate_scdc(obj)
    elif isinstance(obj, HrqInstance):
        report = validate_hrq(obj)
    else:
        print(f"ok: {type(obj).__name__}")
        return EXIT_OK
    if not report.ok:
        for err in report.errors:
            print(f"invalid: {err}", file=sys.stderr)
        return EXIT_ERROR
    print(f"ok: {type(obj).__name__}")
    return EXIT_OK


def cmd_reduce(args) -> int:
    inst = _load(args.scdc, ScdcInstance)
    hrq, rmap = reduce_scdc_to_hrq(inst)
    save(hrq, args.output)
    if args.map:
        save(rmap, args.map)
    return EXIT_OK


def cmd_restore(args) -> int:
    rmap = _load(args.map, ReductionMap)
    y = _load(args.matching, Matching)
    save(restore_matching(rmap, y), args.output)
    return EXIT_OK


def cmd_minmax(args) -> int:
    inst = _load(args.hrq, HrqInstance)
    plus, _ = eliminate_min_quotas(inst, null_id=args.null_id)
    save(plus, args.output)
    return EXIT_OK


def cmd_check(args) -> int:
    inst = _load(args.instance, ScdcInstance, HrqInstance)
    x = _load(args.matching, Matching)
    verdict = check_feasible(inst, x)
    report = {"property": args.property, "violations": [_violation_json(v) for v in verdict.violations]}
    if not verdict.feasible:
        report["holds"] = False
        _emit(report)
        return EXIT_FAIL

    if args.property == "feasible":
        witnesses = []
    elif args.property == "stable":
        kw = {"cross_hospital": True} if args.cross_hospital and isinstance(inst, HrqInstance) else {}
        witnesses = find_blocking_pairs(inst, x, **kw)
    else:
        if args.master_list is None:
            raise CliError("check fair-ml needs --master-list")
        witnesses = check_fair_by_master_list(inst, x, _load(args.master_list, MasterList))
    report["witnesses"] = [w.to_json() for w in witnesses]
    report["holds"] = not witnesses
    _emit(report)
    return EXIT_OK if report["holds"] else EXIT_FAIL


def cmd_solve(args) -> int:
    inst = _load(args.instance, ScdcInstance, HrqInstance)
    ml = _load(args.master_list, MasterList) if args.master_list else None

    if args.method == "sd":
        if ml is None:
            raise CliError("--method sd needs --master-list")
        if isinstance(inst, ScdcInstance):
            x = sd_school_choice(inst, ml)
        else:
            x = serial_dictatorship(inst, ml)
        result = {"status": SearchStatus.FOUND.value, "nodes_explored": 0, "matchings": [x]}
    else:
        budget = SearchBudget(args.budget_nodes, args.budget_seconds)
        res = find_stable(inst, "all" if args.all else "first", budget, ml)
        result = {"status": res.status.value, "nodes_explored": res.nodes_explored,
                  "matchings": list(res.matchings)}

    if args.output and result["matchings"]:
        save(result["matchings"][0], args.output)
    result["matchings"] = [[list(p) for p in m] for m in result["matchings"]]
    _emit(result)
    return EXIT_OK if result["status"] == SearchStatus.FOUND.value else EXIT_FAIL


def cmd_gen(args) -> int:
    if args.source == "setcover":
        sc = _load(args.input, SetCoverInstance)
        errors = sc.restriction_errors()
        if errors:
            raise CliError("; ".join(errors))
        inst = gadget_from_set_cover(sc)
    elif args.source == "threesat":
        try:
            formula = parse_dimacs(read_text(args.input))
        except FormatError as exc:
            raise CliError(str(exc)) from None
        inst = gadget_from_3sat(formula)
    elif args.model == "scdc":
        inst = gen_random_scdc(RandomScdcParams(
            args.agents, args.institutions, args.types, args.prob, args.min_quotas, args.seed))
    else:
        inst = gen_random_hrq(RandomHrqParams(
            args.agents, args.institutions, args.regions, args.prob, args.min_quotas, args.seed))
    save(inst, args.output)
    return EXIT_OK


# ----------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quotamatch", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="check an instance or document for structural errors")
    s.add_argument("file")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("reduce", help="translate a school choice instance into a regional one")
    s.add_argument("scdc")
    s.add_argument("-o", "--output", default="-")
    s.add_argument("--map", help="also write the contract correspondence here")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("restore", help="map a regional matching back to students")
    s.add_argument("--map", required=True)
    s.add_argument("matching")
    s.add_argument("-o", "--output", default="-")
    s.set_defaults(func=cmd_restore)

    s = sub.add_parser("minmax", help="replace regional minimum quotas by maximum quotas")
    s.add_argument("hrq")
    s.add_argument("-o", "--output", default="-")
    s.add_argument("--null-id", default="h0")
    s.set_defaults(func=cmd_minmax)

    s = sub.add_parser("check", help="test a matching for a property")
    s.add_argument("property", choices=["feasible", "stable", "fair-ml"])
    s.add_argument("instance")
    s.add_argument("matching")
    s.add_argument("--master-list")
    s.add_argument("--cross-hospital", action="store_true",
                   help="let doctors displace doctors of other hospitals in a shared region")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("solve", help="search for a stable outcome or run serial dictatorship")
    s.add_argument("--method", choices=["exhaustive", "sd"], required=True)
    s.add_argument("instance")
    s.add_argument("--master-list")
    s.add_argument("--all", action="store_true", help="list every stable outcome")
    s.add_argument("--budget-nodes", type=int, default=SearchBudget.max_nodes)
    s.add_argument("--budget-seconds", type=float, default=SearchBudget.max_seconds)
    s.add_argument("-o", "--output", help="write the first matching found here")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("gen", help="build gadget or random instances")
    gsub = s.add_subparsers(dest="source", required=True)
    g = gsub.add_parser("setcover", help="gadget from a set cover JSON document")
    g.add_argument("input")
    g.add_argument("-o", "--output", default="-")
    g = gsub.add_parser("threesat", help="gadget from a DIMACS CNF file")
    g.add_argument("input")
    g.add_argument("-o", "--output", default="-")
    g = gsub.add_parser("random", help="seeded random instance")
    g.add_argument("model", choices=["scdc", "hrq"])
    g.add_argument("--agents", type=int, default=4, help="students or doctors")
    g.add_argument("--institutions", type=int, default=2, help="schools or hospitals")
    g.add_argument("--types", type=int, default=2)
    g.add_argument("--regions", type=int, default=2)
    g.add_argument("--prob", type=float, default=0.7, help="acceptability probability")
    g.add_argument("--min-quotas", choices=["zero", "random"], default="random")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--output", default="-")
    s.set_defaults(func=cmd_gen)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InvalidInstanceError as exc:
        for err in exc.report.errors:
            print(f"invalid: {err}", file=sys.stderr)
    except (CliError, FormatError, InfeasibleOutcomeError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    except UnknownContractError as exc:
        print(f"error: unknown contract {exc.args[0] if exc.args else ''}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
