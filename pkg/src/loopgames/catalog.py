"""Ready-made models: looping binary trees, small two-agent teaching
profiles, the dollar-auction escalation family, and centipede games.

Every entry validates and round-trips through the text format.  In the
escalation and centipede schemas the left edge continues the game and the
right edge stops it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .affine import Affine
from .core import (
    BinTreeGraph,
    Choice,
    Edge,
    GameGraph,
    Leaf,
    Node,
    Preference,
    ProfileGraph,
)

L, R = Choice.LEFT, Choice.RIGHT
aff = Affine.of


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    params: Mapping[str, int | str]
    graph: GameGraph | ProfileGraph | BinTreeGraph
    note: str


def _zigzag(root: str) -> BinTreeGraph:
    return BinTreeGraph({"zig": ("e", "zag"), "zag": ("zig", "e"), "e": None}, root)


def _backbone() -> BinTreeGraph:
    return BinTreeGraph({"backbone": ("backbone", "e"), "e": None}, "backbone")


def _small_profile(alice_choice: Choice, bob_choice: Choice) -> ProfileGraph:
    nodes = {
        "a": Node("Alice", Edge("b"), Edge("leaf_r"), alice_choice),
        "b": Node("Bob", Edge("leaf_bl"), Edge("leaf_br"), bob_choice),
        "leaf_bl": Leaf({"Alice": aff(0), "Bob": aff(1)}),
        "leaf_br": Leaf({"Alice": aff(2), "Bob": aff(0)}),
        "leaf_r": Leaf({"Alice": aff(1), "Bob": aff(2)}),
    }
    return ProfileGraph(nodes, "a", (), Preference.REWARD_MAX)


def _looping_profile() -> ProfileGraph:
    nodes = {
        "t": Node("Alice", Edge("end"), Edge("b"), R),
        "b": Node("Bob", Edge("t"), Edge("t"), R),
        "end": Leaf({"Alice": aff(0), "Bob": aff(0)}),
    }
    return ProfileGraph(nodes, "t", (), Preference.REWARD_MAX)


_DOLLAR_KINDS = {"AcBs": (L, R), "AsBc": (R, L), "AsBs": (R, R)}


def _dollar(kind: str, v_min: int = 1) -> ProfileGraph:
    if kind not in _DOLLAR_KINDS:
        raise ValueError(f"unknown dollar-auction kind {kind!r}")
    if v_min < 1:
        raise ValueError("the auctioned value must be at least 1")
    alice_choice, bob_choice = _DOLLAR_KINDS[kind]
    nodes = {
        "alice": Node("Alice", Edge("bob"), Edge("alice_stops"), alice_choice),
        "bob": Node("Bob", Edge("alice", 1), Edge("bob_stops"), bob_choice),
        # costs at stage n: the stopper forfeits their bids, the winner
        # pays their bids less the prize v
        "alice_stops": Leaf({"Alice": aff(0, v=1, n=1), "Bob": aff(0, n=1)}),
        "bob_stops": Leaf({"Alice": aff(1, n=1), "Bob": aff(0, v=1, n=1)}),
    }
    return ProfileGraph(nodes, "alice", (("v", v_min),), Preference.COST_MIN)


_INFINIPEDE_KINDS = {"as": (R, R), "ac": (L, L)}


def _infinipede(kind: str) -> ProfileGraph:
    if kind not in _INFINIPEDE_KINDS:
        raise ValueError(f"unknown infinipede kind {kind!r}")
    alice_choice, bob_choice = _INFINIPEDE_KINDS[kind]
    nodes = {
        "alice": Node("Alice", Edge("bob"), Edge("alice_stops"), alice_choice),
        "bob": Node("Bob", Edge("alice", 1), Edge("bob_stops"), bob_choice),
        # whoever stops at stage n banks n+2, the other keeps n
        "alice_stops": Leaf({"Alice": aff(2, n=1), "Bob": aff(0, n=1)}),
        "bob_stops": Leaf({"Alice": aff(0, n=1), "Bob": aff(2, n=1)}),
    }
    return ProfileGraph(nodes, "alice", (), Preference.REWARD_MAX)


def _centipede(length: int = 3) -> GameGraph:
    if length < 1:
        raise ValueError("a centipede needs at least one leg")
    nodes: dict[str, Leaf | Node] = {}
    agents = ("Alice", "Bob")
    for i in range(length):
        mover, other = agents[i % 2], agents[(i + 1) % 2]
        nxt = f"leg{i + 1}" if i + 1 < length else "end"
        nodes[f"leg{i}"] = Node(mover, Edge(nxt), Edge(f"stop{i}"), None)
        nodes[f"stop{i}"] = Leaf({mover: aff(i + 2), other: aff(i)})
    nodes["end"] = Leaf({"Alice": aff(length), "Bob": aff(length)})
    return GameGraph(nodes, "leg0", (), Preference.REWARD_MAX)


def _leaf_profile() -> ProfileGraph:
    return ProfileGraph({"f": Leaf({"Alice": aff(0), "Bob": aff(0)})}, "f",
                        (), Preference.REWARD_MAX)


_ENTRIES: dict[str, tuple[str, str]] = {
    "backbone": ("", "loop tree whose left spine never ends"),
    "centipede": ("length >= 1 (default 3)",
                  "finite centipede of Rosenthal's kind; only stopping survives"
                  " backward induction"),
    "dolAcBs": ("v_min >= 1 (default 1)",
                "dollar auction, Alice always continues and Bob always stops"),
    "dolAsBc": ("v_min >= 1 (default 1)",
                "dollar auction, Alice always stops and Bob always continues"),
    "dolAsBs": ("v_min >= 1 (default 1)",
                "dollar auction, both agents always stop"),
    "dollar": ("kind in {AcBs, AsBc, AsBs}; v_min >= 1 (default 1)",
               "Shubik's escalation auction as a two-node stage schema"),
    "infinipede": ("kind in {as, ac}",
                   "centipede with infinitely many legs, both-stop or"
                   " both-continue"),
    "infinipede_ac": ("", "infinipede where both agents always continue"),
    "infinipede_as": ("", "infinipede where both agents always stop"),
    "leaf": ("", "single-leaf profile, the smallest strategy profile"),
    "s0": ("", "two-move teaching profile, root agent goes left"),
    "s1": ("", "two-move teaching profile, root agent goes right"),
    "t": ("", "profile whose chosen play loops forever"),
    "zag": ("", "partner of zig: left child zig, right child empty"),
    "zig": ("", "loop tree pair with zag: left child empty, right child zag"),
}


def build_named(name: str, params: Mapping[str, int | str] | None = None) -> CatalogEntry:
    """Build a catalog entry by name; parameters as listed by list_catalog."""
    params = dict(params or {})
    if name not in _ENTRIES:
        raise ValueError(f"unknown catalog name {name!r}")
    schema, note = _ENTRIES[name]

    if name in ("zig", "zag"):
        graph: GameGraph | ProfileGraph | BinTreeGraph = _zigzag(name)
    elif name == "backbone":
        graph = _backbone()
    elif name == "s0":
        graph = _small_profile(L, R)
    elif name == "s1":
        graph = _small_profile(R, R)
    elif name == "t":
        graph = _looping_profile()
    elif name == "leaf":
        graph = _leaf_profile()
    elif name == "dollar":
        graph = _dollar(str(params.pop("kind", "AcBs")), int(params.pop("v_min", 1)))
    elif name.startswith("dol"):
        graph = _dollar(name[3:], int(params.pop("v_min", 1)))
    elif name == "infinipede":
        graph = _infinipede(str(params.pop("kind", "as")))
    elif name.startswith("infinipede_"):
        graph = _infinipede(name.split("_", 1)[1])
    else:
        graph = _centipede(int(params.pop("length", 3)))

    if params:
        raise ValueError(f"unexpected parameters for {name!r}: {sorted(params)}")
    return CatalogEntry(name, {}, graph, note)


def list_catalog() -> list[tuple[str, str, str]]:
    """Stable (name, parameter schema, note) listing, sorted by name."""
    return [(name, schema, note)
            for name, (schema, note) in sorted(_ENTRIES.items())]
