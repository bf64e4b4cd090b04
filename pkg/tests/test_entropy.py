import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import F2, Z1, Z2
from walk_induction.config import bundled
from walk_induction.entropy import (corollary_check, entropy_sequence, power_tables,
                                    smb_estimate, truncation_bias)
from walk_induction.errors import SupportCapExceeded, WalkInductionError
from walk_induction.logvalue import LogValue
from walk_induction.measures import (convolution_power, dirac, entropy, from_word_weights,
                                     random_rational_measure, srw)

H_F2 = 0.5 * math.log(3)


def _oracle_H(mu, n):
    """Entropy of mu^n via Fraction convolution, no integer scaling."""
    p = convolution_power(mu, n)
    return -sum(float(w) * math.log(w) for _, w in p.items())


def test_power_tables_match_fraction_convolution():
    mu = srw(F2)
    for t in power_tables(mu, 4):
        exact = convolution_power(mu, t.n)
        assert len(t.counts) == len(exact)
        assert all(Fraction(c, t.denominator) == exact.weights[p] for p, c in t.counts.items())


def test_power_tables_reject_sub_probability():
    half = from_word_weights(F2, [("a", "1/2")])
    with pytest.raises(WalkInductionError):
        next(power_tables(half, 2))


@pytest.mark.parametrize("model", [F2, Z1, Z2], ids=["F2", "Z", "Z2"])
def test_entropy_sequence_matches_oracle(model):
    mu = srw(model)
    seq = entropy_sequence(mu, 4)
    for n, h in enumerate(seq.H, start=1):
        assert h.nats == pytest.approx(_oracle_H(mu, n), abs=1e-12)


def test_entropy_exact_values():
    seq = entropy_sequence(srw(F2), 2)
    assert seq.H[0].exact == LogValue.log(4)
    assert seq.H[1].exact == LogValue.of(Fraction(7, 2), 2)
    z = entropy_sequence(srw(Z1), 2)
    assert z.H[1].exact == LogValue.of(Fraction(3, 2), 2)


def test_dirac_has_zero_entropy():
    a = from_word_weights(F2, [("a", 1)])
    seq = entropy_sequence(a, 5)
    assert all(h.nats == 0 for h in seq.H) and seq.bracket() == (0.0, 0.0)
    assert entropy(dirac(F2)).nats == 0


def test_support_cap_returns_prefix():
    seq = entropy_sequence(srw(F2), 6, support_cap=50)
    assert seq.truncated and seq.n_max == 3 and seq.support_sizes == (4, 13, 40)
    with pytest.raises(SupportCapExceeded) as info:
        entropy_sequence(srw(F2), 6, support_cap=3)
    assert info.value.achieved == 0


def test_free_group_bracket_contains_known_entropy():
    seq = entropy_sequence(srw(F2), 8, lower_certificate=H_F2)
    assert seq.consistent and seq.contains(H_F2)
    assert seq.upper <= seq.cesaro()
    assert seq.upper == pytest.approx(0.6536, abs=1e-3)


def test_abelian_bracket_tends_to_zero():
    seq = entropy_sequence(srw(Z1), 12)
    assert seq.consistent and seq.contains(0.0)
    d = seq.increments()
    assert d[-1] < d[3] < d[0]


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32))
def test_increments_monotone_and_subadditive(seed):
    import random
    rng = random.Random(seed)
    support = rng.sample(list(F2.ball(1)), rng.randint(1, 5))
    mu = random_rational_measure(F2, support, rng)
    seq = entropy_sequence(mu, 4)
    assert not seq.monotone_violations()
    assert not seq.subadditivity_violations()


def test_smb_matches_expectation():
    mu = srw(F2)
    est = smb_estimate(mu, 3, 20000, seed=11)
    assert est.within(4)
    assert est.expected == pytest.approx(_oracle_H(mu, 3) / 3, abs=1e-12)


def test_smb_point_mass_is_exact():
    est = smb_estimate(from_word_weights(F2, [("a", 1)]), 2, 1000, seed=1)
    assert est.mean == 0 and est.z == 0 and est.within()


def test_smb_independent_of_workers():
    mu = srw(Z2)
    a = smb_estimate(mu, 2, 5000, seed=3, workers=1)
    b = smb_estimate(mu, 2, 5000, seed=3, workers=3)
    assert a.mean == b.mean and a.stderr == b.stderr


def test_truncation_bias_scales_with_overshoot():
    mu = srw(F2)
    assert truncation_bias(mu, Fraction(0)) == 0
    assert truncation_bias(mu, Fraction(1, 2)) == pytest.approx(math.log(4) / 2)


@pytest.mark.parametrize("name", ["f2_index2", "z_3z", "z_2z", "f2_trivial"])
def test_corollary_consistent(name):
    cfg = bundled(name)
    _, mu, action = cfg.build()
    p = cfg.params
    rep = corollary_check(mu, action, p.N, p.n_max, p.n_max_induced)
    assert rep.status == "consistent" and rep.overlap
    assert rep.bias <= rep.max_bias


def test_corollary_index2_has_no_truncation():
    _, mu, action = bundled("f2_index2").build()
    rep = corollary_check(mu, action, 4, 6, 3)
    assert rep.tail == 0 and rep.overshoot == 0 and rep.bias == 0
    assert rep.index == 2


def test_corollary_abelian_brackets_straddle_zero():
    _, mu, action = bundled("z_3z").build()
    rep = corollary_check(mu, action, 30, 12)
    lo, hi = rep.induced_bracket
    assert lo == 0 and hi < 0.2
    assert rep.scaled_walk_bracket[0] == 0


def test_corollary_short_horizon_is_inconclusive():
    _, mu, action = bundled("f2_s3_index3").build()
    rep = corollary_check(mu, action, 10, 4, 2)
    assert rep.status == "inconclusive" and rep.bias > rep.max_bias
    assert rep.to_json()["status"] == "inconclusive"
