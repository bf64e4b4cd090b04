import sys
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from walk_induction.config import bundled
from walk_induction.cosets import cyclic_action
from walk_induction.groups import FreeAbelianGroup, FreeGroup, GroupElement, PermutationGroup
from walk_induction.measures import srw

F2 = FreeGroup(2)
Z1 = FreeAbelianGroup(1)
Z2 = FreeAbelianGroup(2)
S3 = PermutationGroup(3, ((1, 0, 2), (0, 2, 1)))


def words(model, max_len=6):
    """Random elements built as products of generator letters."""
    letters = model.letters()
    return st.lists(st.sampled_from(letters), max_size=max_len).map(
        lambda xs: GroupElement(model, model.word_payload(xs)))


def rationals(max_num=20):
    return st.builds(Fraction, st.integers(1, max_num), st.integers(1, max_num))


@pytest.fixture
def f2():
    return F2


@pytest.fixture
def f2_srw():
    return srw(F2)


@pytest.fixture
def f2_index2():
    return bundled("f2_index2").build()


@pytest.fixture
def f2_s3():
    return bundled("f2_s3_index3").build()


@pytest.fixture
def z_3z():
    return bundled("z_3z").build()


@pytest.fixture
def z_2z():
    return bundled("z_2z").build()


@pytest.fixture
def z_cyclic():
    def make(m):
        return cyclic_action(Z1, m)
    return make


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for n in sorted(lines):
            terminalreporter.write_line(lines[n])
