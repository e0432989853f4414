"""Decision procedures on profile graphs: plays, utilities, equilibria.

All checks are exact.  Symbolic side conditions are universally quantified
affine comparisons over the box of reachable counter values and declared
parameter bounds; negative verdicts carry replayable witnesses (an agent, a
deviation path with the moves taken, and a falsifying valuation).
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Mapping

from .affine import COUNTER, Affine, SymbolicTruth, Truth, holds_forall
from .core import (
    BinTreeGraph,
    Choice,
    Edge,
    GameGraph,
    Leaf,
    Node,
    ParametricNotSupported,
    ProfileGraph,
    _require_valid,
    reachable,
    reachable_offsets,
    validate,
    worse_rel,
)
from .fixpoint import greatest_fixpoint


class CyclicGraph(ValueError):
    """Raised by finite-game operations on graphs with reachable cycles."""


class TruncationUnsound(ValueError):
    """Raised when deviation enumeration cannot soundly truncate a profile."""


@dataclass(frozen=True)
class LeafPlay:
    """A play that reaches a leaf: the internal nodes passed, the leaf, and
    the accumulated counter offset."""

    path: tuple[str, ...]
    leaf: str
    offset: int


@dataclass(frozen=True)
class DivergentPlay:
    """A play that revisits a node and therefore runs forever."""

    prefix: tuple[str, ...]
    cycle: tuple[str, ...]
    cycle_delta: int


def play_from(s: ProfileGraph, start: str | None = None) -> LeafPlay | DivergentPlay:
    """Follow the chosen moves from start until a leaf or a repeat."""
    _require_valid(s)
    nid = s.root if start is None else start
    order: list[str] = []
    seen_at: dict[str, int] = {}
    offsets = [0]
    while True:
        nd = s.nodes[nid]
        if isinstance(nd, Leaf):
            return LeafPlay(tuple(order), nid, offsets[-1])
        if nid in seen_at:
            k = seen_at[nid]
            return DivergentPlay(tuple(order[:k]), tuple(order[k:]),
                                 offsets[-1] - offsets[k])
        seen_at[nid] = len(order)
        order.append(nid)
        edge = nd.chosen
        offsets.append(offsets[-1] + edge.delta)
        nid = edge.target


def leads_to_leaf(s: ProfileGraph, start: str | None = None) -> bool:
    return isinstance(play_from(s, start), LeafPlay)


def always_leads_to_leaf(s: ProfileGraph) -> bool:
    """Every node reachable from the root (via both children) leads to a leaf.

    Computed both by direct reachability and as the greatest fixpoint of
    the local clauses; the two must agree.
    """
    nodes = reachable(s)
    terminating = {m for m in nodes if leads_to_leaf(s, m)}
    by_reach = nodes <= terminating

    def rule(m: str, current: frozenset) -> bool:
        nd = s.nodes[m]
        if isinstance(nd, Leaf):
            return True
        return (m in terminating
                and nd.left.target in current and nd.right.target in current)

    by_fixpoint = s.root in greatest_fixpoint(nodes, rule)
    assert by_reach == by_fixpoint
    return by_reach


def utility_of(s: ProfileGraph, agent: str, start: str | None = None) -> Affine | None:
    """The agent's utility from start, or None when the play diverges."""
    if agent not in s.agents():
        raise ValueError(f"unknown agent '{agent}'")
    trace = play_from(s, start)
    if isinstance(trace, DivergentPlay):
        return None
    leaf = s.nodes[trace.leaf]
    assert isinstance(leaf, Leaf)
    return leaf.payoffs[agent].shift(trace.offset)


def is_infinite(t: BinTreeGraph) -> tuple[set[str], bool]:
    """The nodes with an infinite unfolding, and whether the root is one.

    A node is infinite when its left or right subtree is; on a finite graph
    that clause set has a greatest fixpoint reached by discarding nodes
    that cannot justify themselves.
    """
    _require_valid(t)

    def rule(m: str, current: frozenset) -> bool:
        children = t.nodes[m]
        if children is None:
            return False
        return children[0] in current or children[1] in current

    infinite = greatest_fixpoint(t.nodes.keys(), rule)
    return infinite, t.root in infinite


class Verdict(Enum):
    HOLDS = "holds"
    FAILS = "fails"
    VACUOUS = "vacuously_holds"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Condition:
    """One examined affine side condition: lhs rel rhs at some node."""

    node: str
    lhs: Affine
    rel: str
    rhs: Affine
    result: SymbolicTruth


@dataclass(frozen=True)
class Witness:
    """A replayable counterexample: who deviates, the moves of the deviating
    play, which nodes were flipped, and a falsifying valuation."""

    agent: str
    path: tuple[tuple[str, str], ...]
    leaf: str | None = None
    flips: tuple[str, ...] = ()
    valuation: Mapping[str, int] | None = None


@dataclass(frozen=True)
class EquilibriumReport:
    check: str
    verdict: Verdict
    witness: Witness | None
    conditions: tuple[Condition, ...]


def _merged_bounds(g: GameGraph, overrides: Mapping[str, int] | None) -> dict[str, int]:
    box = g.bounds()
    for name, lb in (overrides or {}).items():
        box[name] = int(lb)
    return box


def _witness_offset_reachable(s: ProfileGraph, nid: str, witness_n: int | None,
                              n_min: int) -> bool:
    """Confirm that the schema node can be instantiated at the witness counter.

    Bounded search over (node, offset) states: the witness counter w is
    realized iff some path reaches nid with summed delta at most w - n_min.
    """
    if witness_n is None:
        return True
    budget = witness_n - n_min
    if budget < 0:
        return False
    max_steps = len(s.nodes) * (witness_n + 1)
    seen = {(s.root, 0)}
    queue = deque([(s.root, 0)])
    steps = 0
    while queue and steps < max_steps:
        current, off = queue.popleft()
        steps += 1
        if current == nid:
            return True
        nd = s.nodes[current]
        if isinstance(nd, Leaf):
            continue
        for edge in (nd.left, nd.right):
            state = (edge.target, off + edge.delta)
            if state[1] <= budget and state not in seen:
                seen.add(state)
                queue.append(state)
    return False


def sgpe_check(s: ProfileGraph, bounds: Mapping[str, int] | None = None) -> EquilibriumReport:
    """Decide whether the profile family is a subgame perfect equilibrium.

    Greatest fixpoint over the reachable nodes: leaves always pass; an
    internal node passes when every node reachable from it leads to a leaf,
    both children pass, and the unchosen child's utility is at most as good
    for the owner as the chosen one, universally over counters at which the
    node can be instantiated.
    """
    _require_valid(s)
    base = _merged_bounds(s, bounds)
    offsets = reachable_offsets(s)
    terminating = {m for m in offsets if leads_to_leaf(s, m)}

    conditions: list[Condition] = []
    trouble: dict[str, SymbolicTruth | str] = {}
    for nid in sorted(offsets):
        nd = s.nodes[nid]
        if isinstance(nd, Leaf):
            continue
        if not reachable(s, nid) <= terminating:
            trouble[nid] = "diverges"
            continue
        u_left = utility_of(s, nd.agent, nd.left.target).shift(nd.left.delta)
        u_right = utility_of(s, nd.agent, nd.right.target).shift(nd.right.delta)
        if nd.choice is Choice.LEFT:
            lhs, rhs = u_right, u_left
        else:
            lhs, rhs = u_left, u_right
        rel = worse_rel(s.preference)
        box = dict(base)
        box[COUNTER] = base[COUNTER] + offsets[nid]
        verdict = holds_forall(lhs, rhs, rel, box)
        if verdict.truth is Truth.FAILS and not _witness_offset_reachable(
                s, nid, verdict.witness.get(COUNTER), base[COUNTER]):
            verdict = SymbolicTruth(Truth.UNKNOWN)
        conditions.append(Condition(nid, lhs, rel, rhs, verdict))
        if not verdict.holds:
            trouble[nid] = verdict

    def rule(m: str, current: frozenset) -> bool:
        nd = s.nodes[m]
        if isinstance(nd, Leaf):
            return True
        return (m not in trouble
                and nd.left.target in current and nd.right.target in current)

    survivors = greatest_fixpoint(offsets.keys(), rule)
    if s.root in survivors:
        return EquilibriumReport("sgpe", Verdict.HOLDS, None, tuple(conditions))

    unknown_only = True
    for nid in sorted(trouble):
        cause = trouble[nid]
        nd = s.nodes[nid]
        if cause == "diverges":
            trace = play_from(s, nid)
            assert isinstance(trace, DivergentPlay)
            steps = tuple((m, s.nodes[m].choice.value) for m in trace.prefix + trace.cycle)
            witness = Witness(nd.agent, steps)
            return EquilibriumReport("sgpe", Verdict.FAILS, witness, tuple(conditions))
        if cause.truth is Truth.FAILS:
            flip = nd.choice.flipped
            witness = Witness(nd.agent, ((nid, flip.value),), None, (nid,),
                              dict(cause.witness))
            return EquilibriumReport("sgpe", Verdict.FAILS, witness, tuple(conditions))
        unknown_only = unknown_only and cause.truth is Truth.UNKNOWN
    assert unknown_only
    return EquilibriumReport("sgpe", Verdict.UNKNOWN, None, tuple(conditions))


def _deviation_edges(s: ProfileGraph, agent: str, nid: str) -> list[tuple[Edge, Choice]]:
    """Edges of the one-agent deviation graph: the agent moves freely, every
    other node follows its fixed choice."""
    nd = s.nodes[nid]
    if isinstance(nd, Leaf):
        return []
    if nd.agent == agent:
        return [(nd.left, Choice.LEFT), (nd.right, Choice.RIGHT)]
    return [(nd.chosen, nd.choice)]


def _deviation_shortest(s: ProfileGraph, agent: str):
    """Dijkstra over the deviation graph: minimal offsets plus predecessors."""
    import heapq

    dist: dict[str, int] = {}
    pred: dict[str, tuple[str, Choice]] = {}
    heap: list[tuple[int, str]] = [(0, s.root)]
    best = {s.root: 0}
    while heap:
        d, nid = heapq.heappop(heap)
        if nid in dist:
            continue
        dist[nid] = d
        for edge, side in _deviation_edges(s, agent, nid):
            nd = d + edge.delta
            if edge.target not in dist and nd < best.get(edge.target, nd + 1):
                best[edge.target] = nd
                pred[edge.target] = (nid, side)
                heapq.heappush(heap, (nd, edge.target))
    return dist, pred


def _deviation_path(s: ProfileGraph, agent: str, pred, leaf_id: str):
    steps: list[tuple[str, str]] = []
    nid = leaf_id
    while nid in pred:
        parent, side = pred[nid]
        steps.append((parent, side.value))
        nid = parent
    steps.reverse()
    flips = tuple(m for m, side in steps
                  if s.nodes[m].agent == agent and s.nodes[m].choice.value != side)
    return tuple(steps), flips


def _pumped_targets(s: ProfileGraph, agent: str, dist: Mapping[str, int]) -> set[str]:
    """Nodes reachable, in the deviation graph, from a cycle that gains offset."""
    succ = {nid: [(e.target, e.delta) for e, _ in _deviation_edges(s, agent, nid)
                  if e.target in dist]
            for nid in dist}

    def reach_from(start: str) -> set[str]:
        seen = {start}
        stack = [start]
        while stack:
            for target, _ in succ[stack.pop()]:
                if target not in seen:
                    seen.add(target)
                    stack.append(target)
        return seen

    reach = {nid: reach_from(nid) for nid in dist}
    pumped: set[str] = set()
    for u in dist:
        for v, delta in succ[u]:
            if delta > 0 and u in reach[v]:
                # u -> v sits on a cycle with positive delta
                pumped |= reach[v]
    return pumped


def _improves_with_offset(payoff: Affine, g: GameGraph) -> bool:
    from .core import Preference

    cn = payoff.coeff(COUNTER)
    if g.preference is Preference.COST_MIN:
        return cn < 0
    return cn > 0


def nash_check(s: ProfileGraph, at: Mapping[str, int] | None = None,
               bounds: Mapping[str, int] | None = None) -> EquilibriumReport:
    """Decide whether the profile is a Nash equilibrium.

    When the profile's own play diverges the defining implication has no
    instances, so the verdict is VACUOUS.  Otherwise, for every agent,
    every leaf of the one-agent deviation graph is compared (at its minimal
    offset) against the agent's equilibrium utility: any terminating
    deviating play stays within that graph, and conversely each of its
    leaf paths is realized by flipping finitely many of the agent's moves.
    ``at`` pins variables to concrete values; remaining variables are
    quantified over the box.
    """
    _require_valid(s)
    pins = {k: int(v) for k, v in (at or {}).items()}
    box = _merged_bounds(s, bounds)
    for name in pins:
        box.pop(name, None)

    if not leads_to_leaf(s):
        return EquilibriumReport("nash", Verdict.VACUOUS, None, ())

    conditions: list[Condition] = []
    first_witness: Witness | None = None
    saw_unknown = False
    rel = worse_rel(s.preference)
    for agent in s.agents():
        equilibrium = utility_of(s, agent).substitute_all(pins)
        dist, pred = _deviation_shortest(s, agent)
        pumped = _pumped_targets(s, agent, dist)
        for leaf_id in sorted(m for m in dist if isinstance(s.nodes[m], Leaf)):
            payoff = s.nodes[leaf_id].payoffs[agent]
            deviation = payoff.shift(dist[leaf_id]).substitute_all(pins)
            verdict = holds_forall(deviation, equilibrium, rel, box)
            if (verdict.holds and leaf_id in pumped
                    and _improves_with_offset(payoff, s)):
                # The leaf is also reachable at larger offsets through an
                # offset-gaining cycle, where the payoff keeps improving;
                # the minimal-offset check alone cannot certify this one.
                verdict = SymbolicTruth(Truth.UNKNOWN)
                saw_unknown = True
            conditions.append(Condition(leaf_id, deviation, rel, equilibrium, verdict))
            if verdict.truth is Truth.FAILS and first_witness is None:
                steps, flips = _deviation_path(s, agent, pred, leaf_id)
                valuation = dict(verdict.witness or {})
                valuation.update(pins)
                first_witness = Witness(agent, steps, leaf_id, flips, valuation)

    if first_witness is not None:
        return EquilibriumReport("nash", Verdict.FAILS, first_witness, tuple(conditions))
    if saw_unknown:
        return EquilibriumReport("nash", Verdict.UNKNOWN, None, tuple(conditions))
    return EquilibriumReport("nash", Verdict.HOLDS, None, tuple(conditions))


def replay_witness(s: ProfileGraph, report: EquilibriumReport) -> tuple[int, int]:
    """Re-derive the utility comparison claimed by a FAILS witness.

    For a Nash witness, walks the recorded deviation path through the graph
    (checking that non-deviating nodes follow their fixed moves) and
    evaluates the reached leaf against the equilibrium utility.  For an
    SGPE witness, evaluates both child utilities at the flipped node.
    Returns (deviation value, equilibrium value) at the witness valuation;
    the deviation must be strictly better for the witness agent.
    """
    witness = report.witness
    if witness is None or report.verdict is not Verdict.FAILS:
        raise ValueError("report carries no replayable failure witness")
    valuation = dict(witness.valuation or {})

    if report.check == "nash":
        offset = 0
        nid = s.root
        for step_node, side in witness.path:
            nd = s.nodes[nid]
            if step_node != nid or not isinstance(nd, Node):
                raise ValueError("witness path does not follow the graph")
            side_choice = Choice(side)
            if nd.agent != witness.agent and side_choice is not nd.choice:
                raise ValueError("witness path flips a non-deviating node")
            edge = nd.edge(side_choice)
            offset += edge.delta
            nid = edge.target
        leaf = s.nodes[nid]
        if not isinstance(leaf, Leaf) or nid != witness.leaf:
            raise ValueError("witness path does not end at the claimed leaf")
        deviation = leaf.payoffs[witness.agent].shift(offset).eval(valuation)
        equilibrium = utility_of(s, witness.agent).eval(valuation)
        return deviation, equilibrium

    if report.check == "sgpe":
        nid, flipped_side = witness.path[0]
        nd = s.nodes[nid]
        side = Choice(flipped_side)
        flipped_edge = nd.edge(side)
        kept_edge = nd.edge(side.flipped)
        dev = utility_of(s, nd.agent, flipped_edge.target).shift(flipped_edge.delta)
        kept = utility_of(s, nd.agent, kept_edge.target).shift(kept_edge.delta)
        return dev.eval(valuation), kept.eval(valuation)

    raise ValueError(f"no replay for check {report.check!r}")


def convertible(s1: ProfileGraph, s2: ProfileGraph, agent: str) -> bool:
    """Whether the two profiles differ only in the agent's moves, at finitely
    many tree positions.

    Pair closure over the product graph: structure and other agents' moves
    must match everywhere, and no pair with differing moves may be
    reachable through a node that lies on a product cycle (such a pair
    would repeat at infinitely many tree positions).
    """
    for s in (s1, s2):
        _require_valid(s)
        for nd in s.nodes.values():
            if isinstance(nd, Node):
                if nd.left.delta or nd.right.delta:
                    raise ParametricNotSupported("graph has nonzero edge deltas")
            elif any(not e.is_constant for e in nd.payoffs.values()):
                raise ParametricNotSupported("graph has non-constant payoffs")

    pairs: set[tuple[str, str]] = set()
    edges: dict[tuple[str, str], list[tuple[str, str]]] = {}
    differing: set[tuple[str, str]] = set()
    stack = [(s1.root, s2.root)]
    while stack:
        pair = stack.pop()
        if pair in pairs:
            continue
        pairs.add(pair)
        n1, n2 = s1.nodes[pair[0]], s2.nodes[pair[1]]
        if isinstance(n1, Leaf) != isinstance(n2, Leaf):
            return False
        if isinstance(n1, Leaf):
            if {a: e.const for a, e in n1.payoffs.items()} != \
                    {a: e.const for a, e in n2.payoffs.items()}:
                return False
            edges[pair] = []
            continue
        if n1.agent != n2.agent:
            return False
        if n1.choice != n2.choice:
            if n1.agent != agent:
                return False
            differing.add(pair)
        children = [(n1.left.target, n2.left.target),
                    (n1.right.target, n2.right.target)]
        edges[pair] = children
        stack.extend(children)

    if not differing:
        return True

    def product_reach(start: tuple[str, str]) -> set[tuple[str, str]]:
        seen = {start}
        work = [start]
        while work:
            for child in edges[work.pop()]:
                if child not in seen:
                    seen.add(child)
                    work.append(child)
        return seen

    reach = {pair: product_reach(pair) for pair in pairs}
    on_cycle = {pair for pair in pairs
                if any(pair in reach[child] for child in edges[pair])}
    repeated = set().union(*(reach[pair] for pair in on_cycle)) if on_cycle else set()
    return not (differing & repeated)


def profile_leq(s1: ProfileGraph, s2: ProfileGraph, agent: str) -> bool | None:
    """Whether the agent's utility in s1 is at most as good as in s2.

    None (undefined) when either play diverges; symbolic utilities are
    compared universally over the merged parameter box.
    """
    u1 = utility_of(s1, agent)
    u2 = utility_of(s2, agent)
    if u1 is None or u2 is None:
        return None
    box = s1.bounds()
    for name, lb in s2.bounds().items():
        box[name] = max(box.get(name, lb), lb)
    return holds_forall(u1, u2, worse_rel(s2.preference), box).holds


@dataclass(frozen=True)
class InductionResult:
    """Per-node values and optimal move sets of a finite game.

    Ties are kept in the optimal set; the propagated value follows the
    leftmost optimal child.
    """

    values: Mapping[str, Mapping[str, int]]
    optimal: Mapping[str, frozenset[Choice]]


def backward_induction(g: GameGraph) -> InductionResult:
    """Solve a finite game bottom-up: each owner picks their best child."""
    _require_valid(g)
    for nd in g.nodes.values():
        if isinstance(nd, Node):
            if nd.left.delta or nd.right.delta:
                raise ValueError("finite games must not increment the counter")
        elif any(not e.is_constant for e in nd.payoffs.values()):
            raise ValueError("finite games must have constant payoffs")

    values: dict[str, dict[str, int]] = {}
    optimal: dict[str, frozenset[Choice]] = {}
    in_progress: set[str] = set()

    def solve(nid: str) -> dict[str, int]:
        if nid in values:
            return values[nid]
        if nid in in_progress:
            raise CyclicGraph(f"cycle through node '{nid}'")
        in_progress.add(nid)
        nd = g.nodes[nid]
        if isinstance(nd, Leaf):
            values[nid] = {a: e.const for a, e in nd.payoffs.items()}
        else:
            left = solve(nd.left.target)
            right = solve(nd.right.target)
            from .core import weakly_worse

            mine_l, mine_r = left[nd.agent], right[nd.agent]
            best: set[Choice] = set()
            if weakly_worse(g.preference, mine_r, mine_l):
                best.add(Choice.LEFT)
            if weakly_worse(g.preference, mine_l, mine_r):
                best.add(Choice.RIGHT)
            optimal[nid] = frozenset(best)
            values[nid] = left if Choice.LEFT in best else right
        in_progress.discard(nid)
        return values[nid]

    solve(g.root)
    return InductionResult(values, optimal)


def enumerate_deviations(s: ProfileGraph, agent: str,
                         max_flips: int | None = None,
                         max_depth: int | None = None) -> list[ProfileGraph]:
    """All profiles obtained by flipping at most max_flips of the agent's
    reachable nodes; the unchanged profile is included.

    Only acyclic reachable parts are enumerable; a reachable cycle (always
    reachable within the node count, hence within any honest depth budget)
    makes truncation unsound.
    """
    _require_valid(s)
    nodes = reachable(s)
    for nid in sorted(nodes):
        trace = play_from(s, nid)
        if isinstance(trace, DivergentPlay):
            raise TruncationUnsound(f"cycle reachable through node '{nid}'")
    # acyclicity proper, not just of chosen plays
    depth: dict[str, int] = {}

    def longest(nid: str, pending: frozenset) -> int:
        if nid in pending:
            raise TruncationUnsound(f"cycle reachable through node '{nid}'")
        if nid in depth:
            return depth[nid]
        nd = s.nodes[nid]
        if isinstance(nd, Leaf):
            depth[nid] = 0
        else:
            inner = pending | {nid}
            depth[nid] = 1 + max(longest(nd.left.target, inner),
                                 longest(nd.right.target, inner))
        return depth[nid]

    height = longest(s.root, frozenset())
    if max_depth is not None and height > max_depth:
        raise TruncationUnsound(
            f"profile height {height} exceeds depth budget {max_depth}")

    owned = [nid for nid in sorted(nodes)
             if isinstance(s.nodes[nid], Node) and s.nodes[nid].agent == agent]
    limit = len(owned) if max_flips is None else min(max_flips, len(owned))
    out: list[ProfileGraph] = []
    for r in range(limit + 1):
        for combo in itertools.combinations(owned, r):
            flipped: dict[str, Leaf | Node] = dict(s.nodes)
            for nid in combo:
                nd = s.nodes[nid]
                flipped[nid] = Node(nd.agent, nd.left, nd.right, nd.choice.flipped)
            out.append(ProfileGraph(flipped, s.root, s.params, s.preference))
    return out
