"""Least and greatest fixpoints of monotone node-set rules on finite graphs.

A rule maps (node, current set) to a boolean and must be monotone: removing
nodes from the current set never turns a False answer into True.  Both
fixpoints are computed by chaotic iteration; uniqueness of the fixpoint
makes the iteration order irrelevant.
"""

from __future__ import annotations

from typing import Callable, Iterable

Rule = Callable[[str, frozenset], bool]


def greatest_fixpoint(nodes: Iterable[str], rule: Rule) -> set[str]:
    """Largest S with S = {m | rule(m, S)}, by iterated removal."""
    current = set(nodes)
    while True:
        frozen = frozenset(current)
        drops = [m for m in sorted(current) if not rule(m, frozen)]
        if not drops:
            return current
        current.difference_update(drops)


def least_fixpoint(nodes: Iterable[str], rule: Rule) -> set[str]:
    """Smallest S closed under the rule, by iterated addition from the empty set."""
    universe = sorted(set(nodes))
    current: set[str] = set()
    while True:
        frozen = frozenset(current)
        adds = [m for m in universe if m not in current and rule(m, frozen)]
        if not adds:
            return current
        current.update(adds)
