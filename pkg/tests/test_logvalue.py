import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from conftest import rationals
from walk_induction.logvalue import LogValue, factor


@given(st.integers(1, 10**12))
def test_factor_matches_sympy(n):
    assert dict(factor(n)) == {int(p): int(e) for p, e in sympy.factorint(n).items()}


def test_factor_boundary_cases():
    assert factor(1) == ()
    assert factor(97 * 97) == ((97, 2),)
    assert factor(101 * 101) == ((101, 2),)
    assert factor(101 * 103) == ((101, 1), (103, 1))
    with pytest.raises(ValueError):
        factor(0)


@given(rationals(), rationals())
def test_log_is_a_homomorphism(x, y):
    assert LogValue.log(x * y) == LogValue.log(x) + LogValue.log(y)
    assert LogValue.log(x / y) == LogValue.log(x) - LogValue.log(y)
    assert math.isclose(LogValue.log(x).nats, math.log(x), abs_tol=1e-12)


def test_exact_equality_and_units():
    assert LogValue.log(4) == LogValue.log(2) * 2
    assert LogValue.log(9).coefficient(3) == 2
    assert LogValue.log(4).coefficient(3) is None
    assert LogValue.log(1).is_zero() and LogValue.zero() == 0
    assert LogValue.of(Fraction(1, 2), 3).format(3) == "1/2 × log 3"
    assert LogValue.log(Fraction(27, 4)).format() == "-2 × log 2 + 3 × log 3"
    assert LogValue.log(8).format(2) == "3 × log 2"


def test_ordering_with_guard():
    a = LogValue.of(Fraction(4, 3), 3)
    b = LogValue.log(16)
    assert a.le(b) and not b.le(a)
    assert a.le(a)


def test_json_form():
    v = LogValue.of(Fraction(1, 2), 3)
    out = v.to_json(3)
    assert out["coefficient"] == "1/2" and out["unit"] == "log 3"
    assert out["exact"] == "1/2 × log 3"
    assert out["nats"] == round(0.5 * math.log(3), 12)
