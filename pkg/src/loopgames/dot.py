"""Graphviz DOT rendering of game, profile, and tree graphs."""

from __future__ import annotations

from .core import BinTreeGraph, GameGraph, Leaf, Node


def _quote(text: str) -> str:
    return '"' + text.replace('"', r'\"') + '"'


def export_dot(graph: GameGraph | BinTreeGraph, name: str = "model") -> str:
    """One deterministic digraph: move nodes show their agent, leaves show
    their payoffs, chosen edges are solid, unchosen ones dashed, and
    counter-incrementing edges carry a '+delta' label."""
    lines = [f"digraph {_quote(name)} {{"]

    if isinstance(graph, BinTreeGraph):
        for nid in sorted(graph.nodes):
            shape = "box" if graph.nodes[nid] is None else "circle"
            label = "nil" if graph.nodes[nid] is None else nid
            lines.append(f"  {_quote(nid)} [shape={shape}, label={_quote(label)}];")
        for nid in sorted(graph.nodes):
            children = graph.nodes[nid]
            if children is not None:
                for child in children:
                    lines.append(f"  {_quote(nid)} -> {_quote(child)};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    for nid in sorted(graph.nodes):
        nd = graph.nodes[nid]
        if isinstance(nd, Leaf):
            inner = ", ".join(f"{agent}: {nd.payoffs[agent].render()}"
                              for agent in sorted(nd.payoffs))
            lines.append(f"  {_quote(nid)} [shape=box, label={_quote('{' + inner + '}')}];")
        else:
            lines.append(f"  {_quote(nid)} [shape=ellipse, label={_quote(nd.agent)}];")
    for nid in sorted(graph.nodes):
        nd = graph.nodes[nid]
        if isinstance(nd, Node):
            for edge, side in ((nd.left, "left"), (nd.right, "right")):
                style = "solid"
                if nd.choice is not None and nd.choice.value != side:
                    style = "dashed"
                attrs = [f"style={style}"]
                if edge.delta:
                    attrs.append(f"label={_quote('+' + str(edge.delta))}")
                lines.append(f"  {_quote(nid)} -> {_quote(edge.target)}"
                             f" [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
