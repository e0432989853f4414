"""Finite graph presentations of binary extensive games and strategy profiles.

A graph node is either a payoff leaf or an internal move node owned by an
agent, with a left and a right outgoing edge.  Edges may increment a
nonnegative stage counter and leaf payoffs are affine in that counter, so a
finite, possibly cyclic graph presents a whole family of (possibly
infinite) game trees, one per starting counter value.  Profile graphs
additionally fix the owner's move at every internal node.

Everything here is immutable after construction and every operation is a
pure function.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from enum import Enum
from typing import Mapping

from .affine import COUNTER, Affine


class Choice(Enum):
    LEFT = "left"
    RIGHT = "right"

    @property
    def flipped(self) -> "Choice":
        return Choice.RIGHT if self is Choice.LEFT else Choice.LEFT


class Preference(Enum):
    COST_MIN = "cost"      # smaller integers are preferred
    REWARD_MAX = "reward"  # larger integers are preferred


def weakly_worse(pref: Preference, x: int, y: int) -> bool:
    """True iff x is at most as good as y for an agent with this preference."""
    return x >= y if pref is Preference.COST_MIN else x <= y


def worse_rel(pref: Preference) -> str:
    """Integer relation r such that "x is at most as good as y" is ``x r y``."""
    return ">=" if pref is Preference.COST_MIN else "<="


class ParametricNotSupported(ValueError):
    """Raised by operations that require stage-independent, constant graphs."""


@dataclass(frozen=True)
class Edge:
    target: str
    delta: int = 0


@dataclass(frozen=True)
class Leaf:
    payoffs: Mapping[str, Affine]


@dataclass(frozen=True)
class Node:
    agent: str
    left: Edge
    right: Edge
    choice: Choice | None = None

    def edge(self, side: Choice) -> Edge:
        return self.left if side is Choice.LEFT else self.right

    @property
    def chosen(self) -> Edge:
        if self.choice is None:
            raise ValueError("node has no choice")
        return self.edge(self.choice)


@dataclass(frozen=True)
class GameGraph:
    """A game family: nodes, a root, parameter lower bounds, and a preference."""

    nodes: Mapping[str, Leaf | Node]
    root: str
    params: tuple[tuple[str, int], ...] = ()
    preference: Preference = Preference.REWARD_MAX

    def agents(self) -> tuple[str, ...]:
        found: set[str] = set()
        for nd in self.nodes.values():
            if isinstance(nd, Node):
                found.add(nd.agent)
            else:
                found.update(nd.payoffs)
        return tuple(sorted(found))

    def bounds(self) -> dict[str, int]:
        """Lower bounds of the stage counter and every declared parameter."""
        out = {COUNTER: 0}
        out.update({name: lb for name, lb in self.params})
        return out


class ProfileGraph(GameGraph):
    """Game graph in which every internal node also fixes its owner's move."""


@dataclass(frozen=True)
class BinTreeGraph:
    """Plain binary trees with loops: a node is empty or a pair of children."""

    nodes: Mapping[str, tuple[str, str] | None]
    root: str


def validate(g: GameGraph | BinTreeGraph) -> list[str]:
    """Structural errors, one message per offending node, edge, or parameter."""
    errors: list[str] = []
    if isinstance(g, BinTreeGraph):
        if g.root not in g.nodes:
            errors.append(f"missing root '{g.root}'")
        for nid in sorted(g.nodes):
            children = g.nodes[nid]
            if children is None:
                continue
            for child in children:
                if child not in g.nodes:
                    errors.append(f"dangling edge '{nid}' -> '{child}'")
        return errors

    declared = {COUNTER}
    seen_params: set[str] = set()
    for name, lb in g.params:
        if name in seen_params:
            errors.append(f"duplicate parameter '{name}'")
        seen_params.add(name)
        declared.add(name)
        if lb < 0:
            errors.append(f"negative lower bound for parameter '{name}'")
    if g.root not in g.nodes:
        errors.append(f"missing root '{g.root}'")

    node_agents: set[str] = set()
    leaf_agents: set[str] = set()
    for nd in g.nodes.values():
        if isinstance(nd, Node):
            node_agents.add(nd.agent)
        else:
            leaf_agents.update(nd.payoffs)
    everyone = node_agents | leaf_agents

    for nid in sorted(g.nodes):
        nd = g.nodes[nid]
        if isinstance(nd, Leaf):
            for agent in sorted(everyone - set(nd.payoffs)):
                errors.append(f"leaf '{nid}' missing payoff for agent '{agent}'")
            for agent in sorted(nd.payoffs):
                for var in nd.payoffs[agent].variables():
                    if var not in declared:
                        errors.append(f"unbound parameter '{var}' in leaf '{nid}'")
        else:
            for edge in (nd.left, nd.right):
                if edge.target not in g.nodes:
                    errors.append(f"dangling edge '{nid}' -> '{edge.target}'")
                if edge.delta < 0:
                    errors.append(f"negative delta on edge '{nid}' -> '{edge.target}'")
            if isinstance(g, ProfileGraph) and nd.choice is None:
                errors.append(f"missing choice at node '{nid}'")
    return errors


def _require_valid(g: GameGraph | BinTreeGraph) -> None:
    errors = validate(g)
    if errors:
        raise ValueError("invalid graph: " + "; ".join(errors))


def reachable(g: GameGraph, start: str | None = None) -> set[str]:
    """Node ids reachable from start via both children."""
    start = g.root if start is None else start
    seen = {start}
    stack = [start]
    while stack:
        nd = g.nodes[stack.pop()]
        if isinstance(nd, Node):
            for edge in (nd.left, nd.right):
                if edge.target not in seen:
                    seen.add(edge.target)
                    stack.append(edge.target)
    return seen


def reachable_offsets(g: GameGraph) -> dict[str, int]:
    """Minimal summed edge delta from the root to every reachable node."""
    _require_valid(g)
    dist: dict[str, int] = {}
    heap: list[tuple[int, str]] = [(0, g.root)]
    while heap:
        d, nid = heapq.heappop(heap)
        if nid in dist:
            continue
        dist[nid] = d
        nd = g.nodes[nid]
        if isinstance(nd, Node):
            for edge in (nd.left, nd.right):
                if edge.target not in dist:
                    heapq.heappush(heap, (d + edge.delta, edge.target))
    return dist


def strip_choices(s: ProfileGraph) -> GameGraph:
    """The underlying game of a strategy profile: same graph, choices removed."""
    _require_valid(s)
    stripped: dict[str, Leaf | Node] = {}
    for nid, nd in s.nodes.items():
        if isinstance(nd, Node):
            stripped[nid] = Node(nd.agent, nd.left, nd.right, None)
        else:
            stripped[nid] = nd
    return GameGraph(stripped, s.root, s.params, s.preference)


@dataclass(frozen=True)
class Truncated:
    """Marker for parts of an unfolding that lie beyond the requested depth."""


TRUNCATED = Truncated()


@dataclass(frozen=True)
class ConcreteLeaf:
    # payoffs is None for the empty binary tree
    payoffs: tuple[tuple[str, int], ...] | None = None


@dataclass(frozen=True)
class ConcreteNode:
    left: object
    right: object
    agent: str | None = None
    choice: Choice | None = None


def unfold(g: GameGraph | BinTreeGraph, depth: int,
           valuation: Mapping[str, int] | None = None):
    """Depth-truncated concrete tree of the unfolding.

    Leaves are evaluated to integers at the valuation (shifted by the edge
    deltas accumulated along the way); internal nodes past the depth budget
    become TRUNCATED, and depth zero is the marker alone.
    """
    _require_valid(g)
    if depth == 0:
        return TRUNCATED

    if isinstance(g, BinTreeGraph):
        def grow(nid: str, budget: int):
            children = g.nodes[nid]
            if children is None:
                return ConcreteLeaf()
            if budget == 0:
                return TRUNCATED
            return ConcreteNode(grow(children[0], budget - 1),
                                grow(children[1], budget - 1))
        return grow(g.root, depth)

    valuation = dict(valuation or {})
    for var in g.bounds():
        if var not in valuation:
            raise ValueError(f"valuation is missing '{var}'")

    def grow(nid: str, budget: int, offset: int):
        nd = g.nodes[nid]
        if isinstance(nd, Leaf):
            paid = tuple(sorted(
                (agent, expr.shift(offset).eval(valuation))
                for agent, expr in nd.payoffs.items()))
            return ConcreteLeaf(paid)
        if budget == 0:
            return TRUNCATED
        return ConcreteNode(
            grow(nd.left.target, budget - 1, offset + nd.left.delta),
            grow(nd.right.target, budget - 1, offset + nd.right.delta),
            nd.agent, nd.choice)

    return grow(g.root, depth, 0)


def _constant_payoffs(nd: Leaf) -> dict[str, int]:
    return {agent: expr.const for agent, expr in nd.payoffs.items()}


def bisimilar(g1: GameGraph | BinTreeGraph, g2: GameGraph | BinTreeGraph) -> bool:
    """Whether two non-parametric graphs have equal infinite unfoldings.

    Computed as a pair closure over the product graph.  Choices are
    compared only when both sides are profile graphs.  Raises
    ParametricNotSupported for graphs with nonzero deltas or non-constant
    leaf payoffs.
    """
    trees = isinstance(g1, BinTreeGraph), isinstance(g2, BinTreeGraph)
    if any(trees) and not all(trees):
        raise TypeError("cannot compare a binary tree with a game graph")
    _require_valid(g1)
    _require_valid(g2)

    if not any(trees):
        for g in (g1, g2):
            for nd in g.nodes.values():
                if isinstance(nd, Node):
                    if nd.left.delta or nd.right.delta:
                        raise ParametricNotSupported("graph has nonzero edge deltas")
                elif any(not e.is_constant for e in nd.payoffs.values()):
                    raise ParametricNotSupported("graph has non-constant payoffs")
    compare_choices = isinstance(g1, ProfileGraph) and isinstance(g2, ProfileGraph)

    seen: set[tuple[str, str]] = set()
    stack = [(g1.root, g2.root)]
    while stack:
        pair = stack.pop()
        if pair in seen:
            continue
        seen.add(pair)
        n1, n2 = g1.nodes[pair[0]], g2.nodes[pair[1]]
        if all(trees):
            if (n1 is None) != (n2 is None):
                return False
            if n1 is not None:
                stack.append((n1[0], n2[0]))
                stack.append((n1[1], n2[1]))
            continue
        if isinstance(n1, Leaf) != isinstance(n2, Leaf):
            return False
        if isinstance(n1, Leaf):
            if _constant_payoffs(n1) != _constant_payoffs(n2):
                return False
            continue
        if n1.agent != n2.agent:
            return False
        if compare_choices and n1.choice != n2.choice:
            return False
        stack.append((n1.left.target, n2.left.target))
        stack.append((n1.right.target, n2.right.target))
    return True
