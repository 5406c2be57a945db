"""Command-line frontend.

Subcommands: pattern-enum, mdt-solve, diagram, steenrod, compose,
i1-bounds, excellent-pairs, check.  JSON in, JSON out (cycle-valued
commands use the text notation where noted); every error path emits a
machine-readable JSON object on stderr.

Exit codes: 0 success, 2 validation error, 3 enumeration bound exceeded.

Structured inputs (profiles, partitions, correspondences) may be given
inline as JSON, as @FILE, or as "-" for stdin.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import chow, corr, mdt
from .corr import Correspondence
from .errors import BoundExceeded, QuadmdtError
from .mdt import SEMANTICS_NOTE, MdtPartition, RuleSet
from .profile import (
    QuadricProfile,
    excellent_pairs,
    i1_admissible_set,
    pattern_enumerate,
)


def _read_source(value: str) -> str:
    if value == "-":
        return sys.stdin.read()
    if value.startswith("@"):
        with open(value[1:], "r", encoding="utf-8") as handle:
            return handle.read()
    return value


def _load_json(value: str):
    return json.loads(_read_source(value))


def _parse_i1_rules(text):
    if text is None:
        return None
    return frozenset(token.strip() for token in text.split(",") if token.strip())


def _parse_mdt_rules(text) -> RuleSet:
    rules = RuleSet.proven()
    if text is None:
        return rules
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        if token == "proven":
            continue
        rules = rules.enable(token)  # unknown ids raise ValueError
    return rules


def _emit(args, text: str):
    if args.output:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(args, obj):
    _emit(args, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _profiles_from_json(data):
    if isinstance(data, list):
        return tuple(QuadricProfile.from_json_dict(entry) for entry in data)
    return (QuadricProfile.from_json_dict(data),)


def cmd_pattern_enum(args) -> int:
    patterns = pattern_enumerate(args.r, args.s, _parse_i1_rules(args.rules))
    _emit_json(args, [list(p) for p in patterns])
    return 0


def cmd_i1_bounds(args) -> int:
    values = i1_admissible_set(args.r, args.s, _parse_i1_rules(args.rules))
    _emit_json(args, sorted(values))
    return 0


def cmd_excellent_pairs(args) -> int:
    profile = QuadricProfile.from_json_dict(_load_json(args.profile))
    _emit_json(args, [[p.a, p.b] for p in excellent_pairs(profile)])
    return 0


def cmd_mdt_solve(args) -> int:
    profile = QuadricProfile.from_json_dict(_load_json(args.profile))
    rules = _parse_mdt_rules(args.rules)
    partitions = mdt.enumerate_mdt(profile, rules, max_r=args.max_r)
    payload = {"semantics": SEMANTICS_NOTE}
    if args.count:
        payload["count"] = len(partitions)
    else:
        payload["partitions"] = [p.to_json_dict() for p in partitions]
    _emit_json(args, payload)
    return 0


def cmd_check(args) -> int:
    profile = QuadricProfile.from_json_dict(_load_json(args.profile))
    partition = MdtPartition.from_json_dict(_load_json(args.partition), profile)
    rules = _parse_mdt_rules(args.rules)
    violations = mdt.check_partition(profile, partition, rules)
    _emit_json(args, [v.to_json_dict() for v in violations])
    return 0


def cmd_diagram(args) -> int:
    # Diagram shape only needs (r, pattern); the i_1-bound validation is
    # deliberately skipped so classical illustration patterns render.
    data = _load_json(args.profile)
    shape = mdt.ShellPattern(r=int(data["r"]), pattern=tuple(data["pattern"]))
    diagram = mdt.shell_diagram(shape)
    if args.format == "svg":
        _emit(args, mdt.render_svg(diagram))
    else:
        _emit(args, mdt.render_ascii(diagram))
    return 0


def cmd_steenrod(args) -> int:
    context = _profiles_from_json(_load_json(args.profile))
    cycle = chow.cycle_from_text(_read_source(args.cycle), context)
    _emit(args, chow.cycle_to_text(chow.steenrod(args.j, cycle)) + "\n")
    return 0


def cmd_compose(args) -> int:
    f = Correspondence.from_json_dict(_load_json(args.f))
    g = Correspondence.from_json_dict(_load_json(args.g))
    _emit_json(args, corr.compose(f, g).to_json_dict())
    return 0


def _add_common(parser):
    parser.add_argument("--rules", help="comma-separated rule selection")
    parser.add_argument("--output", help="write the result to FILE instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quadmdt",
        description="Mod-2 cycle calculus and MDT partition engine for quadrics "
        "in characteristic 2.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pattern-enum", help="enumerate splitting patterns for a type")
    p.add_argument("-r", type=int, required=True)
    p.add_argument("-s", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_pattern_enum)

    p = sub.add_parser("i1-bounds", help="admissible first higher isotropy indices")
    p.add_argument("-r", type=int, required=True)
    p.add_argument("-s", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_i1_bounds)

    p = sub.add_parser("excellent-pairs", help="excellent pairs of a profile")
    p.add_argument("profile", help="profile JSON (inline, @FILE or -)")
    _add_common(p)
    p.set_defaults(func=cmd_excellent_pairs)

    p = sub.add_parser("mdt-solve", help="enumerate partitions passing the rules")
    p.add_argument("profile", help="profile JSON (inline, @FILE or -)")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--all", action="store_true", help="list partitions (default)")
    group.add_argument("--count", action="store_true", help="only output the count")
    p.add_argument("--max-r", type=int, default=8, help="enumeration bound on r")
    _add_common(p)
    p.set_defaults(func=cmd_mdt_solve)

    p = sub.add_parser("check", help="run the rule checker on one partition")
    p.add_argument("profile", help="profile JSON (inline, @FILE or -)")
    p.add_argument("partition", help="partition JSON (inline, @FILE or -)")
    _add_common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("diagram", help="render the shell pyramid diagram")
    p.add_argument("profile", help="profile JSON (inline, @FILE or -)")
    p.add_argument("--format", choices=("ascii", "svg"), default="ascii")
    _add_common(p)
    p.set_defaults(func=cmd_diagram)

    p = sub.add_parser("steenrod", help="apply a Steenrod operation to a cycle")
    p.add_argument("-j", type=int, required=True)
    p.add_argument("cycle", help="cycle in text notation, e.g. 'h0*l2 + h1*l1'")
    p.add_argument("--profile", required=True, help="profile JSON or list of profiles")
    _add_common(p)
    p.set_defaults(func=cmd_steenrod)

    p = sub.add_parser("compose", help="compose two correspondences")
    p.add_argument("f", help="correspondence JSON (inline, @FILE or -)")
    p.add_argument("g", help="correspondence JSON (inline, @FILE or -)")
    _add_common(p)
    p.set_defaults(func=cmd_compose)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BoundExceeded as exc:
        _error(exc)
        return 3
    except (QuadmdtError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        _error(exc)
        return 2


def _error(exc):
    payload = {"error": {"type": type(exc).__name__, "message": str(exc)}}
    sys.stderr.write(json.dumps(payload, sort_keys=True) + "\n")


if __name__ == "__main__":
    sys.exit(main())
