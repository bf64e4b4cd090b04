import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import F2, S3, Z1, Z2, words
from walk_induction.cosets import (CosetAction, action_from_config, coset_of, cyclic_action, index,
                                   parse_permutation, trivial_action)
from walk_induction.errors import ConfigError, TransitivityError

ACTIONS = [
    cyclic_action(F2, 2),
    action_from_config(F2, {"degree": 3, "generators": {"a": "(0 1)", "b": "(1 2)"}}),
    cyclic_action(Z1, 3),
    cyclic_action(Z2, 4, [1, 2]),
    trivial_action(F2),
    action_from_config(S3, {"degree": 3, "generators": ["(0 1)", "(1 2)"]}),
]


@pytest.mark.parametrize("action", ACTIONS, ids=range(len(ACTIONS)))
@settings(max_examples=50, deadline=None)
@given(data=st.data())
def test_action_is_a_right_action(action, data):
    g = data.draw(words(action.model))
    h = data.draw(words(action.model))
    assert coset_of(action, g * h) == action.act(coset_of(action, g), h)
    assert action.contains(g) == (coset_of(action, g) == 0)
    # the subgroup is closed under products and inverses
    if action.contains(g) and action.contains(h):
        assert action.contains(g * ~h)


def test_index_and_examples():
    a2 = ACTIONS[0]
    assert index(a2) == 2
    assert a2.contains(F2.parse("ab")) and not a2.contains(F2.parse("a"))
    s3 = ACTIONS[1]
    assert index(s3) == 3
    assert s3.coset_of(F2.parse("a")) == 1
    assert s3.coset_of(F2.parse("ab")) == 2
    assert s3.contains(F2.parse("aa")) and s3.contains(F2.parse("b"))
    z3 = ACTIONS[2]
    assert [z3.coset_of(Z1.parse("a" * n)) for n in range(4)] == [0, 1, 2, 0]
    assert z3.coset_of(Z1.parse("A")) == 2
    assert index(trivial_action(F2)) == 1


def test_parse_permutation_forms():
    assert parse_permutation("(0 1 2)", 3) == (1, 2, 0)
    assert parse_permutation([2, 0, 1], 3) == (2, 0, 1)
    assert parse_permutation("()", 2) == (0, 1)
    with pytest.raises(ConfigError):
        parse_permutation([0, 0, 1], 3)


def test_intransitive_action_is_rejected():
    with pytest.raises(TransitivityError):
        action_from_config(F2, {"degree": 3, "generators": {"a": [1, 0, 2], "b": [1, 0, 2]}})


def test_abelian_action_must_commute():
    with pytest.raises(ConfigError):
        CosetAction(Z2, ((1, 0, 2), (0, 2, 1)))


def test_permutation_action_must_be_a_homomorphism():
    # S3 has a^2 = e but a acting as a 3-cycle does not square to the identity
    with pytest.raises(ConfigError):
        CosetAction(S3, ((1, 2, 0), (0, 2, 1)))


def test_action_config_errors():
    with pytest.raises(ConfigError):
        action_from_config(F2, {"degree": 2, "generators": {"a": [1, 0]}})
    with pytest.raises(ConfigError):
        action_from_config(F2, {"degree": 2, "generators": {"a": [1, 0], "b": [1, 0], "c": [0, 1]}})
    with pytest.raises(ConfigError):
        action_from_config(F2, {"degree": 2, "generators": [[1, 0], [1, 0]], "extra": 1})


@pytest.mark.parametrize("action", ACTIONS, ids=range(len(ACTIONS)))
def test_action_config_round_trip(action):
    assert action_from_config(action.model, action.to_config()) == action
