"""Random finite profiles for agreement experiments and property tests."""

from __future__ import annotations

import random

from .affine import Affine
from .core import Choice, Edge, Leaf, Node, Preference, ProfileGraph


def random_profile(rng: random.Random, max_depth: int = 4,
                   agents: tuple[str, ...] = ("A", "B"),
                   payoff_range: int = 10,
                   branch_prob: float = 0.75,
                   preference: Preference | None = None,
                   distinct_payoffs: bool = False) -> ProfileGraph:
    """A random finite tree profile with constant payoffs.

    With distinct_payoffs, each agent's leaf payoffs are pairwise distinct
    (a shuffled prefix of the naturals), which rules out comparison ties.
    """
    pref = preference if preference is not None else rng.choice(list(Preference))
    nodes: dict[str, Leaf | Node] = {}
    leaves: list[str] = []
    counter = [0]

    def fresh() -> str:
        counter[0] += 1
        return f"m{counter[0]:03d}"

    def grow(depth: int) -> str:
        nid = fresh()
        if depth >= max_depth or rng.random() > branch_prob:
            nodes[nid] = Leaf({})  # filled in below
            leaves.append(nid)
        else:
            left = grow(depth + 1)
            right = grow(depth + 1)
            nodes[nid] = Node(rng.choice(agents), Edge(left), Edge(right),
                              rng.choice((Choice.LEFT, Choice.RIGHT)))
        return nid

    root = grow(0)
    for agent in agents:
        if distinct_payoffs:
            values = list(range(len(leaves)))
            rng.shuffle(values)
        else:
            values = [rng.randrange(payoff_range) for _ in leaves]
        for nid, value in zip(leaves, values):
            payoffs = dict(nodes[nid].payoffs)
            payoffs[agent] = Affine.of(value)
            nodes[nid] = Leaf(payoffs)
    return ProfileGraph(nodes, root, (), pref)


def random_looping_profile(rng: random.Random, size: int = 6,
                           agents: tuple[str, ...] = ("A", "B"),
                           payoff_range: int = 10) -> ProfileGraph:
    """A random profile graph that may contain cycles and counter deltas."""
    pref = rng.choice(list(Preference))
    ids = [f"m{i:03d}" for i in range(size)]
    leaf_ids = [nid for nid in ids if rng.random() < 0.4] or [ids[-1]]
    nodes: dict[str, Leaf | Node] = {}
    for nid in ids:
        if nid in leaf_ids:
            nodes[nid] = Leaf({a: Affine.of(rng.randrange(payoff_range),
                                            n=rng.choice((0, 0, 1)))
                               for a in agents})
        else:
            left, right = rng.choice(ids), rng.choice(ids)
            nodes[nid] = Node(rng.choice(agents),
                              Edge(left, rng.choice((0, 0, 1))),
                              Edge(right, rng.choice((0, 0, 1))),
                              rng.choice((Choice.LEFT, Choice.RIGHT)))
    return ProfileGraph(nodes, ids[0], (), pref)
