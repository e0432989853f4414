"""Line-oriented text format for game, profile, and tree models.

Grammar ('#' starts a comment, blank lines are ignored)::

    file       := (param | preference | block)*
    param      := "param" NAME ">=" INT
    preference := "preference" ("cost" | "reward")
    block      := ("game" | "profile" | "tree") NAME "{" entry* "}"
    entry      := move | leaf | nil | root
    move       := ID ":" AGENT [("left" | "right")] "->" edge "|" edge
                | ID ":" edge "|" edge                      (tree blocks)
    edge       := ID ["@+" INT]
    leaf       := ID ":" "leaf" "{" AGENT ":" expr ("," AGENT ":" expr)* "}"
    nil        := ID ":" "nil"                               (tree blocks)
    root       := "root" ID
    expr       := ["-"] term (("+" | "-") term)*
    term       := INT | [INT "*"] NAME                       (NAME is "n" or a param)

A profile block must give every move node a choice; a game block must give
none.  One preference directive governs the whole file.  Parsing a
rendered model yields the same abstract model back.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping

from .affine import COUNTER, Affine
from .core import (
    BinTreeGraph,
    Choice,
    Edge,
    GameGraph,
    Leaf,
    Node,
    Preference,
    ProfileGraph,
    validate,
)


class ModelError(ValueError):
    def __init__(self, message: str, line: int, col: int = 1):
        super().__init__(f"line {line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


@dataclass(frozen=True)
class ModelFile:
    params: tuple[tuple[str, int], ...]
    preference: Preference
    blocks: Mapping[str, GameGraph | ProfileGraph | BinTreeGraph]


_PARAM = re.compile(r"^param\s+([A-Za-z_]\w*)\s*>=\s*(\d+)$")
_PREF = re.compile(r"^preference\s+(cost|reward)$")
_BLOCK = re.compile(r"^(game|profile|tree)\s+([A-Za-z_]\w*)\s*\{$")
_ROOT = re.compile(r"^root\s+([A-Za-z_]\w*)$")
_NIL = re.compile(r"^([A-Za-z_]\w*)\s*:\s*nil$")
_LEAF = re.compile(r"^([A-Za-z_]\w*)\s*:\s*leaf\s*\{(.*)\}$")
_EDGE = r"[A-Za-z_]\w*(?:\s*@\+\d+)?"
_MOVE = re.compile(
    r"^([A-Za-z_]\w*)\s*:\s*([A-Za-z_]\w*)(?:\s+(left|right))?\s*->\s*"
    rf"({_EDGE})\s*\|\s*({_EDGE})$")
_TREE_PAIR = re.compile(r"^([A-Za-z_]\w*)\s*:\s*([A-Za-z_]\w*)\s*\|\s*([A-Za-z_]\w*)$")
_TOKEN = re.compile(r"\d+|[A-Za-z_]\w*|[+\-*]")


def parse_expr(src: str, declared: set[str], line: int, col: int = 1) -> Affine:
    """Parse an affine expression over 'n' and the declared parameters."""
    tokens: list[tuple[str, int]] = []
    pos = 0
    while pos < len(src):
        if src[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(src, pos)
        if m is None:
            raise ModelError(f"bad expression {src.strip()!r}", line, col + pos)
        tokens.append((m.group(0), col + pos))
        pos = m.end()

    out = Affine()
    i = 0
    sign = 1
    if tokens and tokens[0][0] == "-":
        sign, i = -1, 1
    while True:
        if i >= len(tokens):
            raise ModelError("expression ends unexpectedly", line, col)
        tok, tok_col = tokens[i]
        if tok.isdigit():
            coeff = sign * int(tok)
            if i + 1 < len(tokens) and tokens[i + 1][0] == "*":
                name, name_col = tokens[i + 2] if i + 2 < len(tokens) else ("", tok_col)
                if not name or name.isdigit():
                    raise ModelError("expected a variable after '*'", line, tok_col)
                if name != COUNTER and name not in declared:
                    raise ModelError(f"unbound parameter '{name}'", line, name_col)
                out = out + Affine.of(**{name: coeff})
                i += 3
            else:
                out = out + coeff
                i += 1
        elif tok[0].isalpha() or tok[0] == "_":
            if tok != COUNTER and tok not in declared:
                raise ModelError(f"unbound parameter '{tok}'", line, tok_col)
            out = out + Affine.of(**{tok: sign})
            i += 1
        else:
            raise ModelError(f"unexpected '{tok}' in expression", line, tok_col)
        if i == len(tokens):
            return out
        tok, tok_col = tokens[i]
        if tok not in ("+", "-"):
            raise ModelError(f"expected '+' or '-', found '{tok}'", line, tok_col)
        sign = 1 if tok == "+" else -1
        i += 1


def _parse_edge(text: str) -> Edge:
    if "@" in text:
        target, delta = text.split("@", 1)
        return Edge(target.strip(), int(delta.strip().lstrip("+")))
    return Edge(text.strip())


def parse_model(text: str) -> ModelFile:
    """Parse a model file; raises ModelError with a line and column."""
    params: dict[str, int] = {}
    preference: Preference | None = None
    blocks: dict[str, GameGraph | ProfileGraph | BinTreeGraph] = {}

    kind = name = None
    entries: dict[str, tuple[int, object]] = {}
    root: str | None = None
    header_line = 0
    saw_any = False

    def finish(line_no: int) -> None:
        nonlocal kind, name, entries, root
        if root is None:
            raise ModelError(f"block '{name}' has no root line", header_line)
        if root not in entries:
            raise ModelError(f"root '{root}' is not defined in block '{name}'",
                             header_line)
        for nid, (at, item) in sorted(entries.items()):
            targets = (item[0], item[1]) if isinstance(item, tuple) else (
                (item.left.target, item.right.target) if isinstance(item, Node) else ())
            for target in targets:
                if target not in entries:
                    raise ModelError(f"unknown reference '{target}' from '{nid}'", at)
        if kind == "tree":
            graph: GameGraph | ProfileGraph | BinTreeGraph = BinTreeGraph(
                {nid: (item if isinstance(item, tuple) else None)
                 for nid, (_, item) in entries.items()}, root)
        else:
            nodes = {nid: item for nid, (_, item) in entries.items()}
            cls = ProfileGraph if kind == "profile" else GameGraph
            graph = cls(nodes, root, tuple(sorted(params.items())),
                        preference or Preference.REWARD_MAX)
        problems = validate(graph)
        if problems:
            raise ModelError(f"block '{name}': " + "; ".join(problems), header_line)
        blocks[name] = graph
        kind = name = None
        entries, root = {}, None

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        saw_any = True

        if kind is None:
            if m := _PARAM.match(line):
                if m.group(1) in params:
                    raise ModelError(f"duplicate parameter '{m.group(1)}'", line_no)
                if m.group(1) == COUNTER:
                    raise ModelError("'n' is the stage counter, not a parameter",
                                     line_no)
                params[m.group(1)] = int(m.group(2))
            elif m := _PREF.match(line):
                if preference is not None:
                    raise ModelError("preference is declared twice", line_no)
                preference = Preference(m.group(1))
            elif m := _BLOCK.match(line):
                kind, name = m.group(1), m.group(2)
                if name in blocks:
                    raise ModelError(f"duplicate block '{name}'", line_no)
                header_line = line_no
            else:
                raise ModelError(f"cannot parse {line!r}", line_no)
            continue

        if line == "}":
            finish(line_no)
            continue
        if m := _ROOT.match(line):
            if root is not None:
                raise ModelError(f"block '{name}' has two root lines", line_no)
            root = m.group(1)
            continue

        nid = line.split(":", 1)[0].strip()
        if nid in entries:
            raise ModelError(f"duplicate node id '{nid}'", line_no)

        if kind == "tree":
            if m := _NIL.match(line):
                entries[m.group(1)] = (line_no, None)
            elif m := _TREE_PAIR.match(line):
                entries[m.group(1)] = (line_no, (m.group(2), m.group(3)))
            else:
                raise ModelError(f"cannot parse tree entry {line!r}", line_no)
            continue

        if m := _LEAF.match(line):
            payoffs: dict[str, Affine] = {}
            body = m.group(2)
            col = raw.index("{") + 2
            for part in body.split(","):
                if ":" not in part:
                    raise ModelError(f"bad leaf entry {part.strip()!r}", line_no, col)
                agent, expr_src = part.split(":", 1)
                agent = agent.strip()
                if not agent:
                    raise ModelError("leaf entry has no agent", line_no, col)
                if agent in payoffs:
                    raise ModelError(f"duplicate agent '{agent}' in leaf", line_no, col)
                payoffs[agent] = parse_expr(expr_src, set(params), line_no,
                                            col + part.index(":") + 1)
                col += len(part) + 1
            entries[m.group(1)] = (line_no, Leaf(payoffs))
        elif m := _MOVE.match(line):
            nid, agent, side, left_src, right_src = m.groups()
            if kind == "profile" and side is None:
                raise ModelError(f"node '{nid}' in a profile block needs a choice",
                                 line_no)
            if kind == "game" and side is not None:
                raise ModelError(f"node '{nid}' in a game block must not fix a choice",
                                 line_no)
            choice = Choice(side) if side else None
            entries[nid] = (line_no, Node(agent, _parse_edge(left_src),
                                          _parse_edge(right_src), choice))
        else:
            raise ModelError(f"cannot parse {line!r}", line_no)

    if kind is not None:
        raise ModelError(f"block '{name}' is never closed", header_line)
    if not saw_any or not blocks:
        raise ModelError("empty model: no blocks", 1)
    return ModelFile(tuple(sorted(params.items())),
                     preference or Preference.REWARD_MAX, blocks)


def _render_edge(edge: Edge) -> str:
    return f"{edge.target} @+{edge.delta}" if edge.delta else edge.target


def _render_block(name: str, graph) -> list[str]:
    if isinstance(graph, BinTreeGraph):
        lines = [f"tree {name} {{"]
        for nid in sorted(graph.nodes):
            children = graph.nodes[nid]
            if children is None:
                lines.append(f"  {nid}: nil")
            else:
                lines.append(f"  {nid}: {children[0]} | {children[1]}")
    else:
        kind = "profile" if isinstance(graph, ProfileGraph) else "game"
        lines = [f"{kind} {name} {{"]
        for nid in sorted(graph.nodes):
            nd = graph.nodes[nid]
            if isinstance(nd, Leaf):
                inner = ", ".join(f"{agent}: {nd.payoffs[agent].render()}"
                                  for agent in sorted(nd.payoffs))
                lines.append(f"  {nid}: leaf {{ {inner} }}")
            else:
                side = f" {nd.choice.value}" if nd.choice else ""
                lines.append(f"  {nid}: {nd.agent}{side} -> "
                             f"{_render_edge(nd.left)} | {_render_edge(nd.right)}")
    lines.append(f"  root {graph.root}")
    lines.append("}")
    return lines


def render_model(model: ModelFile) -> str:
    """Canonical text: sorted params, the preference, blocks sorted by name."""
    lines = [f"param {name} >= {lb}" for name, lb in sorted(model.params)]
    lines.append(f"preference {model.preference.value}")
    for name in sorted(model.blocks):
        lines.append("")
        lines.extend(_render_block(name, model.blocks[name]))
    return "\n".join(lines) + "\n"


def model_for_graph(name: str, graph) -> ModelFile:
    """Wrap a single graph as a one-block model file."""
    if isinstance(graph, BinTreeGraph):
        return ModelFile((), Preference.REWARD_MAX, {name: graph})
    return ModelFile(graph.params, graph.preference, {name: graph})
