import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import achieved_offsets
from loopgames import (
    BinTreeGraph,
    Choice,
    Edge,
    GameGraph,
    Leaf,
    Node,
    ParametricNotSupported,
    Preference,
    ProfileGraph,
    bisimilar,
    build_named,
    reachable_offsets,
    strip_choices,
    unfold,
    validate,
)
from loopgames.affine import Affine
from loopgames.core import TRUNCATED, ConcreteLeaf, ConcreteNode

aff = Affine.of
L, R = Choice.LEFT, Choice.RIGHT


def leaf_profile(**payoffs):
    table = {agent: aff(value) for agent, value in payoffs.items()}
    return ProfileGraph({"f": Leaf(table)}, "f")


def test_validate_catalog_entries_are_clean():
    for name in ("dolAcBs", "dolAsBs", "s0", "s1", "t", "zig", "backbone",
                 "infinipede_as", "centipede", "leaf"):
        assert validate(build_named(name).graph) == []


def test_validate_missing_root():
    g = GameGraph({"x": Leaf({"A": aff(1)})}, "nope")
    assert any("missing root" in e for e in validate(g))


def test_validate_dangling_edge():
    g = ProfileGraph({"a": Node("A", Edge("gone"), Edge("a"), L)}, "a")
    assert any("dangling edge 'a' -> 'gone'" in e for e in validate(g))


def test_validate_missing_choice():
    g = ProfileGraph({"a": Node("A", Edge("f"), Edge("f")),
                      "f": Leaf({"A": aff(0)})}, "a")
    assert any("missing choice at node 'a'" in e for e in validate(g))


def test_validate_unbound_parameter_and_missing_payoff():
    g = ProfileGraph({"a": Node("A", Edge("f"), Edge("g"), L),
                      "f": Leaf({"A": aff(0, q=2)}),
                      "g": Leaf({"B": aff(1)})}, "a")
    errors = validate(g)
    assert any("unbound parameter 'q'" in e for e in errors)
    assert any("leaf 'f' missing payoff for agent 'B'" in e for e in errors)
    assert any("leaf 'g' missing payoff for agent 'A'" in e for e in errors)


def test_validate_negative_delta():
    g = ProfileGraph({"a": Node("A", Edge("f", -1), Edge("f"), L),
                      "f": Leaf({"A": aff(0)})}, "a")
    assert any("negative delta" in e for e in validate(g))


def test_strip_choices_s0_s1_share_their_game():
    s0 = build_named("s0").graph
    s1 = build_named("s1").graph
    assert strip_choices(s0) == strip_choices(s1)
    assert bisimilar(strip_choices(s0), strip_choices(s1))


def test_strip_choices_of_leaf():
    stripped = strip_choices(leaf_profile(A=3))
    assert stripped.nodes == {"f": Leaf({"A": aff(3)})}


def test_strip_choices_dollar_profiles_same_game():
    acbs = strip_choices(build_named("dolAcBs").graph)
    asbs = strip_choices(build_named("dolAsBs").graph)
    assert acbs == asbs
    # depth-bounded unfoldings agree at sampled instantiations
    for val in ({"n": 0, "v": 1}, {"n": 2, "v": 3}, {"n": 5, "v": 2}):
        for depth in (1, 3, 6):
            assert unfold(acbs, depth, val) == unfold(asbs, depth, val)


def test_strip_preserves_structure():
    s = build_named("dolAcBs").graph
    g = strip_choices(s)
    assert set(g.nodes) == set(s.nodes)
    assert g.params == s.params and g.preference is s.preference
    for nid, nd in s.nodes.items():
        if isinstance(nd, Node):
            assert g.nodes[nid].left == nd.left
            assert g.nodes[nid].right == nd.right
            assert g.nodes[nid].choice is None
        else:
            assert g.nodes[nid] == nd


def test_unfold_zig_three_levels():
    zig = build_named("zig").graph
    got = unfold(zig, 3)
    nil = ConcreteLeaf()
    expect = ConcreteNode(nil, ConcreteNode(ConcreteNode(nil, TRUNCATED), nil))
    assert got == expect


def test_unfold_depth_zero_is_marker():
    assert unfold(build_named("zig").graph, 0) is TRUNCATED
    assert unfold(leaf_profile(A=1), 0, {"n": 0}) is TRUNCATED


def test_unfold_dollar_two_levels():
    got = unfold(build_named("dolAcBs").graph, 2, {"n": 0, "v": 2})
    expect = ConcreteNode(
        ConcreteNode(TRUNCATED, ConcreteLeaf((("Alice", 1), ("Bob", 2))),
                     "Bob", R),
        ConcreteLeaf((("Alice", 2), ("Bob", 0))),
        "Alice", L)
    assert got == expect


def test_unfold_missing_valuation():
    with pytest.raises(ValueError, match="missing 'v'"):
        unfold(build_named("dolAcBs").graph, 2, {"n": 0})


def test_bisimilar_zig_against_unrolled():
    zig = build_named("zig").graph
    unrolled = BinTreeGraph(
        {"zig": ("e", "zag"), "zag": ("zig2", "e"), "zig2": ("e", "zag"),
         "e": None}, "zig")
    assert bisimilar(zig, unrolled)
    assert bisimilar(unrolled, zig)


def test_bisimilar_reflexive_and_zig_zag_differ():
    zig = build_named("zig").graph
    zag = build_named("zag").graph
    assert bisimilar(zig, zig)
    assert not bisimilar(zig, zag)


def test_bisimilar_rejects_parametric():
    with pytest.raises(ParametricNotSupported):
        bisimilar(build_named("dolAcBs").graph, build_named("dolAsBs").graph)


def test_bisimilar_mixed_kinds_rejected():
    with pytest.raises(TypeError):
        bisimilar(build_named("zig").graph, build_named("s0").graph)


def test_reachable_offsets_examples():
    offs = reachable_offsets(build_named("dolAcBs").graph)
    assert offs == {"alice": 0, "bob": 0, "alice_stops": 0, "bob_stops": 0}

    assert reachable_offsets(leaf_profile(A=0)) == {"f": 0}

    chain = ProfileGraph({
        "a": Node("A", Edge("b", 1), Edge("b", 1), L),
        "b": Node("A", Edge("c", 1), Edge("c", 1), L),
        "c": Node("A", Edge("f", 1), Edge("f", 1), L),
        "f": Leaf({"A": aff(0)}),
    }, "a")
    assert reachable_offsets(chain)["f"] == 3


# random non-parametric profile graphs, possibly cyclic
@st.composite
def looping_profiles(draw):
    size = draw(st.integers(1, 6))
    ids = [f"g{i}" for i in range(size)]
    nodes = {}
    for i, nid in enumerate(ids):
        if i == size - 1 or draw(st.booleans()) and i > 0:
            nodes[nid] = Leaf({"A": aff(draw(st.integers(0, 3))),
                               "B": aff(draw(st.integers(0, 3)))})
        else:
            nodes[nid] = Node(draw(st.sampled_from(["A", "B"])),
                              Edge(draw(st.sampled_from(ids))),
                              Edge(draw(st.sampled_from(ids))),
                              draw(st.sampled_from([L, R])))
    return ProfileGraph(nodes, ids[0])


def unroll_once(g, nid):
    """Duplicate one node; the result is bisimilar by construction."""
    if not isinstance(g.nodes[nid], Node):
        return g
    copy_id = nid + "_copy"
    nodes = dict(g.nodes)
    nodes[copy_id] = nodes[nid]
    nd = nodes[nid]
    nodes[nid] = Node(nd.agent, Edge(copy_id), nd.right, nd.choice) \
        if nd.left.target == nid else nd
    return ProfileGraph(nodes, g.root)


@settings(max_examples=120)
@given(looping_profiles(), looping_profiles())
def test_bisimilar_iff_bounded_unfoldings_agree(g1, g2):
    same = bisimilar(g1, g2)
    val = {"n": 0}
    agree = all(unfold(g1, k, val) == unfold(g2, k, val)
                for k in range(1, 2 * (len(g1.nodes) + len(g2.nodes)) + 1))
    assert same == agree


@given(looping_profiles())
def test_bisimilar_is_reflexive_and_stable_under_unrolling(g):
    assert bisimilar(g, g)
    h = unroll_once(g, g.root)
    k = unroll_once(h, h.root)
    assert bisimilar(g, h) and bisimilar(h, k) and bisimilar(g, k)
    assert bisimilar(h, g)


@settings(max_examples=80)
@given(looping_profiles(), st.integers(0, 12))
def test_reachable_offsets_are_achieved(g, extra):
    offs = reachable_offsets(g)
    limit = max(offs.values()) + extra
    achieved = achieved_offsets(g, limit)
    for nid, minimum in offs.items():
        assert min(achieved[nid]) == minimum
