import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import eval_rel, grid_points
from loopgames.affine import Affine, Truth, find_witness, holds_forall

aff = Affine.of


def test_eval():
    assert aff(0, v=1, n=1).eval({"n": 3, "v": 2}) == 5
    assert aff(1, n=1).eval({"n": 0, "v": 9}) == 1
    assert aff(0).eval({}) == 0


def test_eval_missing_binding():
    with pytest.raises(ValueError, match="missing binding"):
        aff(0, v=1).eval({"n": 3})


def test_shift():
    assert aff(0, v=1, n=1).shift(1) == aff(1, v=1, n=1)
    assert aff(4, v=2).shift(0) == aff(4, v=2)
    assert aff(1, n=1).shift(2) == aff(3, n=1)


def test_normalization_drops_zero_coefficients():
    assert aff(3, v=0) == aff(3)
    assert (aff(0, n=1) - aff(0, n=1)) == aff(0)


def test_holds_forall_basics():
    # v + n >= n + 1 for n >= 0, v >= 1
    box = {"n": 0, "v": 1}
    assert holds_forall(aff(0, v=1, n=1), aff(1, n=1), ">=", box).holds

    res = holds_forall(aff(0, n=1), aff(1, n=1), ">=", {"n": 0})
    assert res.truth is Truth.FAILS
    assert res.witness == {"n": 0}

    res = holds_forall(aff(1, n=1), aff(0, v=1, n=1), ">=", {"n": 0, "v": 2})
    assert res.truth is Truth.FAILS
    assert res.witness == {"n": 0, "v": 2}


def test_holds_forall_bumps_negative_coefficient():
    # n + 1 >= v + n holds at the corner v=1 but not for v=2
    res = holds_forall(aff(1, n=1), aff(0, v=1, n=1), ">=", {"n": 0, "v": 1})
    assert res.truth is Truth.FAILS
    assert res.witness == {"n": 0, "v": 2}


def test_find_witness():
    res = find_witness(aff(1), aff(0, v=1), "<", {"n": 0, "v": 2})
    assert res.holds and res.witness == {"n": 0, "v": 2}

    assert find_witness(aff(0, n=1), aff(0), "<", {"n": 0}).truth is Truth.FAILS

    res = find_witness(aff(0, n=1), aff(0), "==", {"n": 0})
    assert res.holds and res.witness == {"n": 0}


def test_equality_decided_exactly():
    # 3a + 5b can represent 8 but not 4 over nonnegative a, b
    lhs = aff(0, a=3, b=5)
    res = holds_forall(lhs, aff(8), "!=", {"a": 0, "b": 0})
    assert res.truth is Truth.FAILS
    assert lhs.eval(res.witness) == 8
    assert holds_forall(lhs, aff(4), "!=", {"a": 0, "b": 0}).holds
    # mixed signs reach anything of the right gcd
    res = find_witness(aff(0, a=2, b=-3), aff(1), "==", {"a": 0, "b": 0})
    assert res.holds and aff(0, a=2, b=-3).eval(res.witness) == 1
    assert holds_forall(aff(0, a=2, b=4), aff(3), "!=", {"a": 0, "b": 0}).holds


def test_box_must_cover_variables():
    with pytest.raises(ValueError, match="missing bounds"):
        holds_forall(aff(0, v=1), aff(0), ">=", {"n": 0})


def test_render():
    assert aff(1, n=1).render() == "n + 1"
    assert aff(0, v=1, n=1).render() == "v + n"
    assert aff(1, v=1, n=1).render() == "v + n + 1"
    assert aff(2, v=-1).render() == "-v + 2"
    assert aff(0).render() == "0"
    assert aff(-3, n=2).render() == "2*n - 3"


small_ints = st.integers(-6, 6)


@st.composite
def affines(draw):
    coeffs = {name: draw(small_ints)
              for name in ("n", "v", "w") if draw(st.booleans())}
    return Affine.of(draw(st.integers(-15, 15)), **coeffs)


@st.composite
def boxes(draw):
    return {name: draw(st.integers(0, 4)) for name in ("n", "v", "w")}


@given(affines(), small_ints.filter(lambda d: d >= 0), small_ints.filter(lambda d: d >= 0))
def test_shift_is_additive(e, a, b):
    assert e.shift(a).shift(b) == e.shift(a + b)


@given(affines(), boxes(), st.data())
def test_shift_agrees_with_substitution(e, box, data):
    delta = data.draw(st.integers(0, 5))
    point = {name: data.draw(st.integers(lb, lb + 6)) for name, lb in box.items()}
    shifted_point = dict(point, n=point["n"] + delta)
    assert e.shift(delta).eval(point) == e.eval(shifted_point)


@settings(max_examples=150)
@given(affines(), affines(), st.sampled_from([">=", "<=", "==", "!=", "<", ">"]), boxes())
def test_forall_sound_on_grid(lhs, rhs, rel, box):
    if holds_forall(lhs, rhs, rel, box).holds:
        for point in grid_points(box, 5):
            assert eval_rel(lhs, rhs, rel, point)


@given(affines(), affines(), st.sampled_from([">=", "<=", "==", "!=", "<", ">"]), boxes())
def test_failure_witness_is_valid(lhs, rhs, rel, box):
    res = holds_forall(lhs, rhs, rel, box)
    if res.truth is Truth.FAILS:
        assert all(res.witness[k] >= box[k] for k in box)
        assert not eval_rel(lhs, rhs, rel, res.witness)


@given(affines(), affines(), st.sampled_from([">=", "<=", "==", "!=", "<", ">"]), boxes())
def test_find_witness_duality(lhs, rhs, rel, box):
    negated = {">=": "<", "<=": ">", "==": "!=", "!=": "==", "<": ">=", ">": "<="}
    exists = find_witness(lhs, rhs, rel, box)
    forall = holds_forall(lhs, rhs, negated[rel], box)
    assert exists.holds == (forall.truth is Truth.FAILS)
    if exists.holds:
        assert eval_rel(lhs, rhs, rel, exists.witness)
