"""Command-line driver.

Subcommands: ``check`` (sgpe / nash / ltl / altl / infinite), ``unfold``,
``export`` (DOT), and ``catalog`` (list / emit).  Exit codes: 0 the checked
property holds, 1 it fails, 2 it holds vacuously or is unknown, 64 usage
error, 65 parse error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .analysis import (
    EquilibriumReport,
    Verdict,
    always_leads_to_leaf,
    is_infinite,
    leads_to_leaf,
    nash_check,
    sgpe_check,
)
from .catalog import build_named, list_catalog
from .core import (
    BinTreeGraph,
    ConcreteLeaf,
    ConcreteNode,
    GameGraph,
    Leaf,
    Node,
    ProfileGraph,
    Truncated,
    unfold,
)
from .dot import export_dot
from .dsl import ModelError, model_for_graph, parse_model, render_model
from .report import dumps_report, report_document

EXIT_OK = 0
EXIT_FAILS = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 64
EXIT_PARSE = 65

_VERDICT_EXIT = {
    Verdict.HOLDS: EXIT_OK,
    Verdict.FAILS: EXIT_FAILS,
    Verdict.VACUOUS: EXIT_INCONCLUSIVE,
    Verdict.UNKNOWN: EXIT_INCONCLUSIVE,
}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise _UsageError(message)


def _parse_assignments(text: str, flag: str) -> dict[str, int]:
    out: dict[str, int] = {}
    for part in text.split(","):
        if "=" not in part:
            raise _UsageError(f"{flag} expects name=value pairs, got {part!r}")
        name, value = part.split("=", 1)
        try:
            out[name.strip()] = int(value)
        except ValueError:
            raise _UsageError(f"{flag}: {value!r} is not an integer") from None
    return out


def _load_block(path: str, profile: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE) from None
    try:
        model = parse_model(text)
    except ModelError as exc:
        print(f"error: {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE) from None
    if profile not in model.blocks:
        known = ", ".join(sorted(model.blocks))
        raise _UsageError(f"no block '{profile}' in {path} (have: {known})")
    return model.blocks[profile]


def _skeleton(graph: GameGraph) -> BinTreeGraph:
    nodes: dict[str, tuple[str, str] | None] = {}
    for nid, nd in graph.nodes.items():
        if isinstance(nd, Node):
            nodes[nid] = (nd.left.target, nd.right.target)
        else:
            nodes[nid] = None
    return BinTreeGraph(nodes, graph.root)


def _render_unfolded(tree, indent: int = 0) -> list[str]:
    pad = "  " * indent
    if isinstance(tree, Truncated):
        return [pad + "..."]
    if isinstance(tree, ConcreteLeaf):
        if tree.payoffs is None:
            return [pad + "nil"]
        inner = ", ".join(f"{agent}: {value}" for agent, value in tree.payoffs)
        return [pad + "leaf {" + inner + "}"]
    assert isinstance(tree, ConcreteNode)
    head = tree.agent or "node"
    if tree.choice is not None:
        head += f" [{tree.choice.value}]"
    lines = [pad + head]
    lines.extend(_render_unfolded(tree.left, indent + 1))
    lines.extend(_render_unfolded(tree.right, indent + 1))
    return lines


def _run_check(args) -> int:
    graph = _load_block(args.file, args.profile)
    bounds = _parse_assignments(args.set, "--set") if args.set else None
    at = _parse_assignments(args.at, "--at") if args.at else None
    if at is not None and not args.nash:
        raise _UsageError("--at only applies to --nash")

    if args.infinite:
        tree = graph if isinstance(graph, BinTreeGraph) else _skeleton(graph)
        _, infinite = is_infinite(tree)
        verdict = Verdict.HOLDS if infinite else Verdict.FAILS
        report = EquilibriumReport("infinite", verdict, None, ())
    else:
        if isinstance(graph, BinTreeGraph):
            raise _UsageError("tree blocks only support --infinite")
        if not isinstance(graph, ProfileGraph):
            raise _UsageError(f"block '{args.profile}' is a game, not a profile")
        if args.sgpe:
            report = sgpe_check(graph, bounds=bounds)
        elif args.nash:
            report = nash_check(graph, at=at, bounds=bounds)
        elif args.ltl:
            verdict = Verdict.HOLDS if leads_to_leaf(graph) else Verdict.FAILS
            report = EquilibriumReport("leads_to_leaf", verdict, None, ())
        else:
            verdict = Verdict.HOLDS if always_leads_to_leaf(graph) else Verdict.FAILS
            report = EquilibriumReport("always_leads_to_leaf", verdict, None, ())

    print(f"{report.check} {args.profile}: {report.verdict.value}")
    if report.witness is not None:
        w = report.witness
        steps = " ".join(f"{node}:{side}" for node, side in w.path)
        val = "" if not w.valuation else " at " + ", ".join(
            f"{k}={v}" for k, v in sorted(w.valuation.items()))
        print(f"witness: agent {w.agent}, path [{steps}]{val}")
    if args.json:
        document = report_document(args.profile, report, at)
        Path(args.json).write_text(dumps_report(document))
    return _VERDICT_EXIT[report.verdict]


def _run_unfold(args) -> int:
    graph = _load_block(args.file, args.profile)
    valuation = _parse_assignments(args.set, "--set") if args.set else {}
    try:
        tree = unfold(graph, args.depth, valuation if not isinstance(
            graph, BinTreeGraph) else None)
    except ValueError as exc:
        raise _UsageError(str(exc)) from None
    print("\n".join(_render_unfolded(tree)))
    return EXIT_OK


def _run_export(args) -> int:
    graph = _load_block(args.file, args.profile)
    text = export_dot(graph, args.profile)
    if args.dot == "-":
        print(text, end="")
    else:
        Path(args.dot).write_text(text)
    return EXIT_OK


def _run_catalog(args) -> int:
    if args.action == "list":
        for name, schema, note in list_catalog():
            params = f" ({schema})" if schema else ""
            print(f"{name}{params}: {note}")
        return EXIT_OK
    params = _parse_assignments(args.set, "--set") if args.set else {}
    if args.kind:
        params["kind"] = args.kind
    try:
        entry = build_named(args.name, params)
    except ValueError as exc:
        raise _UsageError(str(exc)) from None
    print(render_model(model_for_graph(entry.name, entry.graph)), end="")
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="loopgames",
                     description="Decide properties of finitely presented games.")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="run a decision procedure on a block")
    check.add_argument("file")
    check.add_argument("--profile", required=True)
    what = check.add_mutually_exclusive_group(required=True)
    what.add_argument("--sgpe", action="store_true",
                      help="subgame perfect equilibrium")
    what.add_argument("--nash", action="store_true", help="Nash equilibrium")
    what.add_argument("--ltl", action="store_true", help="the play reaches a leaf")
    what.add_argument("--altl", action="store_true",
                      help="every reachable play reaches a leaf")
    what.add_argument("--infinite", action="store_true",
                      help="the unfolding is infinite")
    check.add_argument("--at", help="pin variables, e.g. n=0,v=1")
    check.add_argument("--set", help="raise lower bounds, e.g. v=2")
    check.add_argument("--json", help="write the report document to this path")

    unfold_cmd = sub.add_parser("unfold", help="print a depth-bounded unfolding")
    unfold_cmd.add_argument("file")
    unfold_cmd.add_argument("--profile", required=True)
    unfold_cmd.add_argument("--depth", type=int, required=True)
    unfold_cmd.add_argument("--set", help="valuation, e.g. n=0,v=2")

    export = sub.add_parser("export", help="write a DOT rendering")
    export.add_argument("file")
    export.add_argument("--profile", required=True)
    export.add_argument("--dot", required=True, help="output path, or - for stdout")

    cat = sub.add_parser("catalog", help="list or emit built-in models")
    cat.add_argument("action", choices=("list", "emit"))
    cat.add_argument("name", nargs="?")
    cat.add_argument("--kind", help="builder kind, e.g. AcBs or ac")
    cat.add_argument("--set", help="builder parameters, e.g. v_min=2")

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "check":
            return _run_check(args)
        if args.command == "unfold":
            return _run_unfold(args)
        if args.command == "export":
            return _run_export(args)
        if args.action == "emit" and not args.name:
            raise _UsageError("catalog emit needs a name")
        return _run_catalog(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
