import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import F2, S3, Z1, Z2, words
from walk_induction.errors import ConfigError, ModelMismatchError
from walk_induction.groups import (FreeGroup, GroupElement, PermutationGroup, free_reduce, invert,
                                   model_from_config, multiply, word_length)

MODELS = [F2, FreeGroup(3), Z1, Z2, S3]


@pytest.mark.parametrize("model", MODELS, ids=lambda m: type(m).__name__ + str(m.ngens))
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_group_axioms(model, data):
    a, b, c = (data.draw(words(model)) for _ in range(3))
    e = model.identity
    assert (a * b) * c == a * (b * c)
    assert a * e == a == e * a
    assert a * ~a == e == ~a * a
    assert ~(a * b) == ~b * ~a


@pytest.mark.parametrize("model", MODELS, ids=lambda m: type(m).__name__ + str(m.ngens))
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_format_parse_round_trip(model, data):
    a = data.draw(words(model))
    assert model.parse(a.word) == a
    assert model.is_canonical(a.payload)


@given(st.lists(st.sampled_from([1, -1, 2, -2]), max_size=12))
def test_free_reduce_is_idempotent_and_reduced(xs):
    w = free_reduce(xs)
    assert free_reduce(w) == w
    assert all(w[i] != -w[i + 1] for i in range(len(w) - 1))


def test_free_group_examples():
    a, b = F2.parse("a"), F2.parse("b")
    assert (a * b * ~b).word == "a"
    assert F2.parse("aA").word == "e"
    assert word_length(F2.parse("abAB")) == 4
    assert F2.parse("abAB") != F2.parse("e")
    assert F2.letters() == [1, -1, 2, -2]


def test_alphabet_skips_e():
    g = FreeGroup(5)
    assert [g.letter(i).word for i in (1, 2, 3, 4, 5)] == ["a", "b", "c", "d", "f"]


def test_abelian_examples():
    a = Z1.parse("a")
    assert (a * a * ~a).word == "a"
    assert Z2.parse("abAB") == Z2.identity
    assert word_length(Z2.parse("aab")) == 3
    assert Z2.parse("ba") == Z2.parse("ab")


def test_permutation_composition_is_left_to_right():
    a, b = S3.parse("a"), S3.parse("b")
    # (p * q)[i] = q[p[i]]: first apply p then q
    assert (a * b).payload == tuple(b.payload[i] for i in a.payload)
    assert S3.order == 6
    assert a * b != b * a


def test_model_mismatch_is_rejected():
    with pytest.raises(ModelMismatchError):
        multiply(F2.parse("a"), Z1.parse("a"))
    assert invert(F2.parse("ab")).word == "BA"


def test_model_config_round_trip_and_unknown_keys():
    for m in MODELS:
        assert model_from_config(m.to_config()) == m
    with pytest.raises(ConfigError):
        model_from_config({"kind": "free", "rank": 2, "colour": "red"})
    with pytest.raises(ConfigError):
        model_from_config({"kind": "hyperbolic"})


def test_bad_letters_are_rejected():
    with pytest.raises(Exception):
        F2.parse("ac")
    with pytest.raises(Exception):
        PermutationGroup(3, ((0, 0, 1),))


def test_ball_sizes():
    assert [len(F2.sphere(r)) for r in range(4)] == [1, 4, 12, 36]
    assert sum(1 for _ in F2.ball(3)) == 53
    assert all(isinstance(g, GroupElement) for g in F2.ball(1))
