import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import F2, Z1
from walk_induction.chain import (avoidance_tail, avoidance_tails, build_chain, conditional_avoidance,
                                  conditional_avoidance_grid, expected_return_time,
                                  hitting_times_to_zero, overshoot_mean, return_time_distribution,
                                  solve_rational, tail_rate_certificate, tail_sum_from)
from walk_induction.config import bundled, bundled_names
from walk_induction.cosets import action_from_config, cyclic_action, trivial_action
from walk_induction.errors import NotInSupportError, ReducibleChainError
from walk_induction.measures import FinMeasure, random_rational_measure, srw

BUNDLED = bundled_names()


def _chain(name):
    _, mu, action = bundled(name).build()
    return build_chain(action, mu)


def _paths(chain, n):
    """Every n-step path of support elements with its probability."""
    items = list(chain.mu.items())
    for combo in itertools.product(items, repeat=n):
        prob = Fraction(1)
        for _, x in combo:
            prob *= x
        yield [g for g, _ in combo], prob


def _avoids(chain, steps, pinned=None):
    label = 0
    for g in steps:
        label = chain.action.act(label, g)
        if label == 0:
            return False
    return True


def test_matrices_for_bundled_examples():
    _, mu, action = bundled("f2_index2").build()
    c = build_chain(action, mu)
    assert c.P == ((0, 1), (1, 0))
    _, mu, action = bundled("z_3z").build()
    c = build_chain(action, mu)
    h = Fraction(1, 2)
    assert c.P == ((0, h, h), (h, 0, h), (h, h, 0))
    assert c.Q == ((0, h), (h, 0)) and c.r == (h, h) and c.s == (h, h)


@pytest.mark.parametrize("name", BUNDLED)
def test_kac_and_certificates_on_bundled(name):
    _, mu, action = bundled(name).build()
    c = build_chain(action, mu)
    assert expected_return_time(c) == action.m
    assert all(c.certificates().values())


def _random_action(rng):
    m = rng.randint(1, 5)
    perms = []
    for _ in range(2):
        p = list(range(m))
        rng.shuffle(p)
        perms.append(p)
    # make it transitive: a acts as an m-cycle
    perms[0] = [(i + 1) % m for i in range(m)]
    return action_from_config(F2, {"degree": m, "generators": {"a": perms[0], "b": perms[1]}})


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32))
def test_kac_for_random_actions_and_measures(seed):
    rng = random.Random(seed)
    action = _random_action(rng)
    support = [F2.parse(w) for w in ("a", "A", "b", "B")]
    support += [F2.parse(w) for w in rng.sample(["ab", "ba", "aB", "bb"], rng.randint(0, 2))]
    mu = random_rational_measure(F2, support, rng)
    c = build_chain(action, mu)
    assert expected_return_time(c) == action.m
    assert all(c.certificates().values())


def test_reducible_chain_rejected():
    even = FinMeasure(F2, {F2.parse("ab"): Fraction(1, 2), F2.parse("BA"): Fraction(1, 2)})
    with pytest.raises(ReducibleChainError):
        build_chain(cyclic_action(F2, 2), even)


def test_trivial_action():
    c = build_chain(trivial_action(F2), srw(F2))
    assert expected_return_time(c) == 1
    assert avoidance_tails(c, 3) == [0, 0, 0]


def test_z3_tails_and_certificate():
    _, mu, action = bundled("z_3z").build()
    c = build_chain(action, mu)
    assert [avoidance_tail(c, n) for n in range(4)] == [1, 1, Fraction(1, 2), Fraction(1, 4)]
    cert = tail_rate_certificate(c)
    assert math.isclose(cert.C, math.log(2) / 2) and cert.n0 == 2 and cert.holds
    s3 = _chain("f2_s3_index3")
    cs = tail_rate_certificate(s3)
    assert cs.window == 2 and cs.rho == Fraction(3, 4) and cs.n0 == 4 and cs.holds
    assert tail_rate_certificate(_chain("f2_index2")).C == math.inf


@pytest.mark.parametrize("name", ["z_3z", "f2_s3_index3", "f2_index2"])
def test_tails_match_path_enumeration(name):
    _, mu, action = bundled(name).build()
    c = build_chain(action, mu)
    for n in range(1, 5):
        brute = sum((p for steps, p in _paths(c, n) if _avoids(c, steps)), Fraction(0))
        assert avoidance_tail(c, n) == brute


@pytest.mark.parametrize("name", ["z_3z", "f2_s3_index3"])
def test_conditional_avoidance_matches_enumeration(name):
    _, mu, action = bundled(name).build()
    c = build_chain(action, mu)
    for n in range(1, 5):
        for k in range(1, n + 1):
            for g, x in mu.items():
                brute = sum((p for steps, p in _paths(c, n) if steps[k - 1] == g and _avoids(c, steps)),
                            Fraction(0)) / x
                assert conditional_avoidance(c, n, k, g) == brute


def test_conditional_avoidance_example_and_errors():
    _, mu, action = bundled("z_3z").build()
    c = build_chain(action, mu)
    assert conditional_avoidance(c, 2, 1, Z1.parse("a")) == Fraction(1, 2)
    with pytest.raises(NotInSupportError):
        conditional_avoidance(c, 2, 1, Z1.parse("aa"))
    with pytest.raises(ValueError):
        conditional_avoidance(c, 2, 3, Z1.parse("a"))


@pytest.mark.parametrize("name", BUNDLED)
def test_half_split_grid(name):
    _, mu, action = bundled(name).build()
    c = build_chain(action, mu)
    grid = conditional_avoidance_grid(c, tail_rate_certificate(c), 20)
    assert grid and all(r["ok"] for r in grid)


@pytest.mark.parametrize("name", ["z_3z", "f2_s3_index3"])
def test_overshoot_against_series(name):
    _, mu, action = bundled(name).build()
    c = build_chain(action, mu)
    dist = return_time_distribution(c, 400)
    for N in (0, 1, 3, 7):
        series = sum(float(n * p) for n, p in enumerate(dist, start=1) if n > N)
        assert math.isclose(float(overshoot_mean(c, N)), series, rel_tol=1e-9, abs_tol=1e-12)
    tails = [float(t) for t in avoidance_tails(c, 400)]
    assert math.isclose(float(tail_sum_from(c, 5)), sum(tails[4:]), rel_tol=1e-9)
    assert overshoot_mean(c, 0) == action.m


def test_solve_rational():
    a = [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(3)]]
    assert solve_rational(a, [Fraction(3), Fraction(5)]) == [Fraction(4, 5), Fraction(7, 5)]
    _, mu, action = bundled("z_3z").build()
    assert hitting_times_to_zero(build_chain(action, mu)) == [2, 2]
