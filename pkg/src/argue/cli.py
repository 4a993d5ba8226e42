"""Command-line interface.

Exit codes: 0 success, 1 a proof or criterion failed, 2 unreadable input,
3 a query the knowledge base's dictionary or the prover cannot handle.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import aggregation, criteria, defeat
from .dictionaries import format_confidence
from .errors import (
    AggregationError, DatabaseError, FragmentError, ParseError, ProofError, SignError,
    UnboundVariableError,
)
from .kernel import load_database, parse_formula, render
from .prover import SearchLimits, check_proof, find_arguments, proof_from_json

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_MISMATCH = 0, 1, 2, 3


class _Exit(Exception):
    def __init__(self, code, message):
        self.code = code
        self.message = message


def _dump(obj):
    return json.dumps(obj, indent=2, sort_keys=False, ensure_ascii=False)


def _limits(ns):
    return SearchLimits(depth=ns.depth, max_args=ns.max_args, minimal=not ns.no_minimal)


def _load(ns):
    if not ns.kb:
        raise _Exit(EXIT_PARSE, "--kb is required")
    return load_database(ns.kb)


def _goal(ns):
    if not ns.goal:
        raise _Exit(EXIT_PARSE, "--goal is required")
    return parse_formula(ns.goal)


def _flattener(ns, db):
    name = ns.flattener or aggregation.DEFAULT_FLATTENER[db.dictionary.name]
    if db.dictionary.name not in aggregation.COMPATIBLE[name]:
        raise _Exit(EXIT_MISMATCH, f"flattener {name} cannot read a {db.dictionary.name} database")
    return aggregation.get_flattener(name)


def _tree(proof, d, indent=0):
    label = f" [{proof.label}]" if proof.label is not None else ""
    sign = f" {d.format_sign(proof.sign)}" if proof.sign is not None else ""
    lines = [f"{'  ' * indent}{proof.rule}{label}: {render(proof.conclusion)}{sign}"]
    for c in proof.children:
        lines += _tree(c, d, indent + 1)
    return lines


def cmd_arguments(ns, out):
    db = _load(ns)
    goal = _goal(ns)
    args = find_arguments(db, goal, _limits(ns))
    d = db.dictionary
    if ns.format == "json":
        out.append(_dump({"goal": render(goal), "arguments": [a.to_json(d) for a in args]}))
    else:
        out += [a.render(d) for a in args] or [f"no arguments for {render(goal)}"]
    return EXIT_OK


def cmd_aggregate(ns, out):
    db = _load(ns)
    goal = _goal(ns)
    f = _flattener(ns, db)
    limits = _limits(ns)
    if ns.selective:
        value = defeat.selective_aggregate(db, goal, f, limits)
    else:
        value = aggregation.aggregate(db, goal, f, limits)
    if ns.format == "json":
        out.append(_dump({
            "goal": render(goal), "flattener": f.name, "selective": ns.selective,
            "confidence": value if isinstance(value, (str, int)) else float(value),
        }))
    else:
        out.append(format_confidence(value))
    return EXIT_OK


def cmd_defeat(ns, out):
    db = _load(ns)
    goals = [_goal(ns)] if ns.goal else []
    pool = defeat.signed_closure(db, _limits(ns), goals)
    labelling = defeat.grounded_labelling(pool)
    graph = labelling.to_json()
    if ns.format == "json":
        out.append(_dump(graph))
        return EXIT_OK
    for node in graph["nodes"]:
        grounds = ", ".join(node["grounds"])
        line = f"{node['label']:<5} {node['id']:<4} {node['side']} ({node['formula']}, {{{grounds}}}, {node['sign']})"
        if node["side"] == "con":
            line += f" from {node['origin']}"
        out.append(line)
    for e in graph["edges"]:
        out.append(f"{e['source']} {e['kind']}s {e['target']}")
    return EXIT_OK


def cmd_prove(ns, out):
    db = _load(ns)
    goal = _goal(ns)
    args = find_arguments(db, goal, _limits(ns))
    d = db.dictionary
    if ns.format == "json":
        out.append(_dump([a.to_json(d, with_proof=True) for a in args]))
        return EXIT_OK
    for a in args:
        out.append(a.render(d))
        out += _tree(a.proof, d, 1)
    if not args:
        out.append(f"no arguments for {render(goal)}")
    return EXIT_OK


def cmd_check(ns, out):
    if ns.proof:
        return _check_proofs(ns, out)
    if ns.criteria == "flattening":
        name = ns.flattener or "bnd"
        f = defeat.selective(name) if ns.selective else aggregation.get_flattener(name)
        cases = criteria.random_cases(ns.cases, ns.seed)
        report = criteria.check_flattening_criteria(f, cases, seed=ns.seed)
    elif ns.criteria == "acr":
        db = _load(ns)
        report = criteria.check_acr_criteria(db, _limits(ns), closure=not ns.no_closure,
                                             native=ns.no_closure)
    else:
        raise _Exit(EXIT_PARSE, "check needs --proof or --criteria")
    if ns.format == "json":
        out.append(_dump(report.to_json()))
    else:
        out += report.lines()
    return EXIT_OK if report.ok() else EXIT_FAIL


def _check_proofs(ns, out):
    db = _load(ns)
    with open(ns.proof, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise _Exit(EXIT_PARSE, f"{ns.proof}: {exc}") from None
    items = data if isinstance(data, list) else [data]
    checked = []
    for item in items:
        node = item.get("proof", item) if isinstance(item, dict) else item
        if not isinstance(node, dict):
            raise _Exit(EXIT_PARSE, f"{ns.proof}: expected a proof object")
        checked.append(check_proof(db, proof_from_json(node, db)))
    d = db.dictionary
    if ns.format == "json":
        out.append(_dump([a.to_json(d) for a in checked]))
    else:
        out += [a.render(d) for a in checked]
    return EXIT_OK


COMMANDS = {
    "arguments": cmd_arguments,
    "aggregate": cmd_aggregate,
    "defeat": cmd_defeat,
    "prove": cmd_prove,
    "check": cmd_check,
}


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--kb", metavar="PATH", help="knowledge-base file")
    shared.add_argument("--goal", metavar="TEXT", help="ground query formula")
    shared.add_argument("--flattener", choices=sorted(aggregation.FLATTENERS))
    shared.add_argument("--depth", type=int, default=8, help="maximum proof height (default 8)")
    shared.add_argument("--max-args", type=int, default=1000)
    shared.add_argument("--no-minimal", action="store_true",
                        help="report non-minimal grounds sets too")
    shared.add_argument("--selective", action="store_true",
                        help="aggregate undefeated arguments only")
    shared.add_argument("--format", choices=["text", "json"], default="text")

    parser = argparse.ArgumentParser(
        prog="argue", description="Construct, aggregate and defeat labelled arguments.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("arguments", parents=[shared], help="list the arguments for a goal")
    sub.add_parser("aggregate", parents=[shared], help="aggregate confidence in a goal")
    sub.add_parser("defeat", parents=[shared], help="labelled attack graph")
    sub.add_parser("prove", parents=[shared], help="arguments with their proof terms")
    check = sub.add_parser("check", parents=[shared], help="check proofs or criteria")
    check.add_argument("--proof", metavar="PATH", help="JSON proof term(s) to validate")
    check.add_argument("--criteria", choices=["flattening", "acr"])
    check.add_argument("--no-closure", action="store_true",
                       help="check the bare prover instead of the signed closure")
    check.add_argument("--cases", type=int, default=1000)
    check.add_argument("--seed", type=int, default=0)
    return parser


def run(argv=None) -> tuple[int, list[str], list[str]]:
    """Run a command; returns ``(exit code, stdout lines, stderr lines)``."""
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return (EXIT_PARSE if exc.code else EXIT_OK), [], []
    out: list[str] = []
    try:
        if ns.depth < 1 or ns.max_args < 1:
            raise _Exit(EXIT_PARSE, "--depth and --max-args must be positive")
        code = COMMANDS[ns.command](ns, out)
    except _Exit as exc:
        return exc.code, out, [exc.message]
    except (ParseError, DatabaseError, OSError) as exc:
        return EXIT_PARSE, out, [str(exc)]
    except (SignError, FragmentError, AggregationError, UnboundVariableError) as exc:
        return EXIT_MISMATCH, out, [str(exc)]
    except ProofError as exc:
        return EXIT_FAIL, out, [f"invalid proof: {exc}"]
    return code, out, []


def main(argv=None) -> int:
    code, out, err = run(argv)
    for line in out:
        print(line)
    for line in err:
        print(f"argue: {line}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
