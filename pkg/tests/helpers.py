"""Independent oracles shared by the test modules.

These deliberately avoid the code paths they are used to check: plays are
evaluated by naive walking, offsets by bounded breadth-first search.
"""

from collections import deque

from loopgames import Choice, Leaf, Node
from loopgames.affine import Affine


def follow_value(profile, agent, start=None, base=None):
    """The agent's utility by walking the chosen moves, None if the walk
    does not reach a leaf within |nodes| + 1 steps."""
    nid = profile.root if start is None else start
    offset = 0
    for _ in range(len(profile.nodes) + 1):
        nd = profile.nodes[nid]
        if isinstance(nd, Leaf):
            expr = nd.payoffs[agent].shift(offset)
            return expr.eval(base) if base is not None else expr
        edge = nd.left if nd.choice is Choice.LEFT else nd.right
        offset += edge.delta
        nid = edge.target
    return None


def achieved_offsets(graph, limit):
    """Map node id -> set of offsets realizable with total delta <= limit."""
    seen = {(graph.root, 0)}
    queue = deque([(graph.root, 0)])
    while queue:
        nid, off = queue.popleft()
        nd = graph.nodes[nid]
        if isinstance(nd, Node):
            for edge in (nd.left, nd.right):
                state = (edge.target, off + edge.delta)
                if state[1] <= limit and state not in seen:
                    seen.add(state)
                    queue.append(state)
    out = {}
    for nid, off in seen:
        out.setdefault(nid, set()).add(off)
    return out


def walk_unfolded(tree, agent):
    """Follow choices through a concrete unfolded tree to the leaf payoff."""
    from loopgames.core import ConcreteLeaf, ConcreteNode

    while isinstance(tree, ConcreteNode):
        tree = tree.left if tree.choice is Choice.LEFT else tree.right
    assert isinstance(tree, ConcreteLeaf)
    return dict(tree.payoffs)[agent]


def grid_points(bounds, width):
    """Every valuation with each variable in [bound, bound + width]."""
    names = sorted(bounds)
    points = [{}]
    for name in names:
        points = [dict(p, **{name: bounds[name] + k})
                  for p in points for k in range(width + 1)]
    return points


def eval_rel(lhs: Affine, rhs: Affine, rel: str, valuation) -> bool:
    a, b = lhs.eval(valuation), rhs.eval(valuation)
    return {
        ">=": a >= b, "<=": a <= b, "==": a == b,
        "!=": a != b, "<": a < b, ">": a > b,
    }[rel]
