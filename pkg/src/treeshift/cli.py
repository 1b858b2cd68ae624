"""Command-line interface: one verb per operation, JSON reports on stdout.

Exit codes: 0 = computed (REFUTED/None are results, not failures);
1 = validation error; 2 = verdict UNKNOWN under --strict; 64 = usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time

from .decision import (
    core_symbols,
    count_blocks,
    enumerate_blocks,
    essential_core,
    extend_pattern,
    is_empty,
)
from .entropy import entropy_estimate
from .errors import TreeShiftError
from .mixing import (
    PROPERTIES,
    check_property,
    connect_through,
    hierarchy_report,
)
from .patterns import (
    cpc_from_document,
    dumps_canonical,
    pattern_from_document,
)
from .periodic import (
    NoneUpToBound,
    search_periodic,
    sibling_distinct_certificate,
)
from .shifts import (
    SoficImageShift,
    apply_block_map,
    parse_shift,
    recode_to_vertex,
)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_UNKNOWN_STRICT = 2
EXIT_USAGE = 64


def _load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _load_shift(path: str):
    doc = _load_json(path)
    return parse_shift(doc), doc


def _fingerprint(shift) -> str:
    return hashlib.sha256(
        dumps_canonical(shift.to_document()).encode("utf-8")
    ).hexdigest()


def _report(args, shift, result: dict, bounds: dict, started: float) -> dict:
    return {
        "command": args.verb,
        "fingerprint": _fingerprint(shift),
        "bounds": bounds,
        "result": result,
        "timing_seconds": round(time.monotonic() - started, 6),
        "workers": int(os.environ.get("TSD_THREADS", "1")),
    }


def _emit(doc: dict) -> None:
    sys.stdout.write(dumps_canonical(doc))


def _cmd_validate(args, started):
    shift, _ = _load_shift(args.shift)
    result = {"valid": True, "canonical": shift.to_document()}
    _emit(_report(args, shift, result, {}, started))
    return EXIT_OK


def _cmd_empty(args, started):
    shift, _ = _load_shift(args.shift)
    empty, certificate = is_empty(shift, witness_height=args.witness_height)
    result = {
        "empty": empty,
        "core": list(core_symbols(shift)),
        "certificate": certificate,
    }
    _emit(_report(args, shift, result,
                  {"witness_height": args.witness_height}, started))
    return EXIT_OK


def _cmd_core(args, started):
    shift, _ = _load_shift(args.shift)
    result = {"core": list(core_symbols(shift))}
    try:
        from .shifts import one_step_view

        result["trace"] = list(essential_core(one_step_view(shift)).trace)
    except TreeShiftError:
        pass
    _emit(_report(args, shift, result, {}, started))
    return EXIT_OK


def _cmd_blocks(args, started):
    shift, _ = _load_shift(args.shift)
    counts = count_blocks(shift, args.height)
    result = {
        "height": args.height,
        "total": str(counts.total),
        "per_root": {a: str(c) for a, c in counts.per_root.items()},
    }
    if not args.count_only:
        blocks = enumerate_blocks(shift, args.height, limit=args.limit)
        result["blocks"] = [b.to_document() for b in blocks]
    _emit(_report(args, shift, result,
                  {"height": args.height, "limit": args.limit}, started))
    return EXIT_OK


def _cmd_extend(args, started):
    shift, _ = _load_shift(args.shift)
    u = pattern_from_document(_load_json(args.pattern))
    block = extend_pattern(shift, u, args.height)
    _emit(_report(args, shift, {"block": block.to_document()},
                  {"height": args.height}, started))
    return EXIT_OK


def _cmd_entropy(args, started):
    shift, _ = _load_shift(args.shift)
    est = entropy_estimate(shift, args.max_height)
    csv_rows = ["n,log_count,estimate"]
    for n, L, e in est.rows:
        csv_rows.append(f"{n},{L!r},{e!r}")
    result = dict(est.to_document(), csv="\n".join(csv_rows))
    _emit(_report(args, shift, result,
                  {"max_height": args.max_height}, started))
    return EXIT_OK


def _cmd_glue(args, started):
    shift, _ = _load_shift(args.shift)
    u = pattern_from_document(_load_json(args.u))
    v = pattern_from_document(_load_json(args.v))
    P = cpc_from_document(_load_json(args.code))
    filled = connect_through(shift, u, v, P)
    result = {"connected": filled is not None}
    if filled is not None:
        result["fill"] = filled.to_document()
    _emit(_report(args, shift, result, {"code": list(P.elements)}, started))
    return EXIT_OK


def _cmd_check(args, started):
    shift, _ = _load_shift(args.shift)
    verdict = check_property(
        shift,
        args.property,
        height=args.height,
        pattern_nodes=args.pattern_nodes,
        cpc_leaves=args.cpc_leaves,
    )
    bounds = {
        "height": args.height,
        "pattern_nodes": args.pattern_nodes,
        "cpc_leaves": args.cpc_leaves,
    }
    _emit(_report(args, shift, verdict.to_document(), bounds, started))
    if args.strict and verdict.status == "UNKNOWN":
        return EXIT_UNKNOWN_STRICT
    return EXIT_OK


def _cmd_hierarchy(args, started):
    shift, _ = _load_shift(args.shift)
    report = hierarchy_report(
        shift,
        height=args.height,
        pattern_nodes=args.pattern_nodes,
        cpc_leaves=args.cpc_leaves,
    )
    result = {
        "kind": report["kind"],
        "verdicts": {p: v.to_document() for p, v in report["verdicts"].items()},
        "consistency_flags": report["consistency_flags"],
    }
    _emit(_report(args, shift, result, report["bounds"], started))
    if args.strict and any(
        v.status == "UNKNOWN" for v in report["verdicts"].values()
    ):
        return EXIT_UNKNOWN_STRICT
    return EXIT_OK


def _cmd_periodic(args, started):
    shift, _ = _load_shift(args.shift)
    outcome = search_periodic(shift, args.max_leaves)
    if isinstance(outcome, NoneUpToBound):
        result = outcome.to_document()
    else:
        P, spec = outcome
        result = {"found": True, "code": list(P.elements),
                  "spec": spec.to_document()}
    _emit(_report(args, shift, result,
                  {"max_leaves": args.max_leaves}, started))
    return EXIT_OK


def _cmd_aperiodic_cert(args, started):
    shift, _ = _load_shift(args.shift)
    report = sibling_distinct_certificate(shift)
    _emit(_report(args, shift, report.to_document(), {}, started))
    return EXIT_OK


def _cmd_recode(args, started):
    shift, _ = _load_shift(args.shift)
    vertex, code = recode_to_vertex(shift)
    result = {
        "vertex": vertex.to_document(),
        "window": code.window,
        "alphabet_size": len(vertex.alphabet),
    }
    _emit(_report(args, shift, result, {}, started))
    return EXIT_OK


def _cmd_factor(args, started):
    shift, _ = _load_shift(args.shift)
    if not isinstance(shift, SoficImageShift):
        raise TreeShiftError("the factor verb needs a sofic_image shift")
    u = pattern_from_document(_load_json(args.pattern))
    image = apply_block_map(shift.code, u)
    _emit(_report(args, shift, {"image": image.to_document()}, {}, started))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="treeshift",
        description="Decision procedures for labeled-tree shift spaces.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    def add(name, func, **extra):
        p = sub.add_parser(name)
        p.add_argument("shift", help="shift definition JSON file")
        p.set_defaults(func=func)
        return p

    add("validate", _cmd_validate)

    p = add("empty", _cmd_empty)
    p.add_argument("--witness-height", type=int, default=3)

    add("core", _cmd_core)

    p = add("blocks", _cmd_blocks)
    p.add_argument("--height", "-n", type=int, required=True)
    p.add_argument("--limit", type=int, default=4096)
    p.add_argument("--count-only", action="store_true")

    p = add("extend", _cmd_extend)
    p.add_argument("--pattern", required=True)
    p.add_argument("--height", type=int, default=4)

    p = add("entropy", _cmd_entropy)
    p.add_argument("--max-height", type=int, default=20)

    p = add("glue", _cmd_glue)
    p.add_argument("--u", required=True)
    p.add_argument("--v", required=True)
    p.add_argument("--code", required=True)

    p = add("check", _cmd_check)
    p.add_argument("--property", required=True,
                   choices=[s.lower() for s in PROPERTIES] + ["irr"])
    p.add_argument("--height", type=int, default=4)
    p.add_argument("--cpc-leaves", type=int, default=16)
    p.add_argument("--pattern-nodes", type=int, default=31)
    p.add_argument("--strict", action="store_true")

    p = add("hierarchy", _cmd_hierarchy)
    p.add_argument("--height", type=int, default=3)
    p.add_argument("--cpc-leaves", type=int, default=4)
    p.add_argument("--pattern-nodes", type=int, default=15)
    p.add_argument("--strict", action="store_true")

    p = add("periodic", _cmd_periodic)
    p.add_argument("--max-leaves", type=int, default=8)

    add("aperiodic-cert", _cmd_aperiodic_cert)
    add("recode", _cmd_recode)

    p = add("factor", _cmd_factor)
    p.add_argument("--pattern", required=True)

    return parser


def dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    if args.verb == "check":
        args.property = {"irr": "IRREDUCIBLE"}.get(
            args.property, args.property.upper()
        )
    started = time.monotonic()
    try:
        return args.func(args, started)
    except (TreeShiftError, OSError, json.JSONDecodeError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_VALIDATION


def main() -> None:
    raise SystemExit(dispatch())


if __name__ == "__main__":
    main()
