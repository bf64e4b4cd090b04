import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import F2, S3, Z2
from walk_induction import _kernels
from walk_induction.config import bundled
from walk_induction.groups import free_reduce
from walk_induction.measures import srw
from walk_induction.sampling import StepSampler

needs_numba = pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not installed")


def _sampler(name="f2_s3_index3"):
    _, mu, action = bundled(name).build()
    return StepSampler(mu, action)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 40), st.integers(1, 30))
def test_first_return_numpy_matches_loops(seed, walkers, steps):
    s = _sampler()
    rng = np.random.default_rng(seed)
    incr = s.draw(rng, (walkers, steps))
    start = rng.integers(0, 3, size=walkers).astype(np.int32)
    hit_a, end_a = _kernels.first_return_numpy(s.coset_step, start, incr)
    hit_b, end_b = _kernels._first_return_loops(s.coset_step, start, incr)
    assert (hit_a == hit_b).all() and (end_a == end_b).all()


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 30), st.integers(1, 25))
def test_reduce_paths_matches_free_reduction(seed, walkers, steps):
    s = _sampler()
    rng = np.random.default_rng(seed)
    incr = s.draw(rng, (walkers, steps))
    lengths = rng.integers(0, steps + 1, size=walkers).astype(np.int32)
    words, lens = _kernels.reduce_paths_numpy(incr, lengths, s.inc_letters, s.inc_len)
    for i in range(walkers):
        letters = [x for t in range(lengths[i]) for x in s.payloads[incr[i, t]]]
        assert tuple(words[i, : lens[i]]) == free_reduce(letters)


@needs_numba
@pytest.mark.parametrize("seed", range(5))
def test_numba_and_numpy_agree_exactly(seed):
    s = _sampler()
    rng = np.random.default_rng(seed)
    incr = s.draw(rng, (500, 64))
    start = np.zeros(500, dtype=np.int32)
    a = _kernels.first_return_numba(s.coset_step, start, incr)
    b = _kernels.first_return_numpy(s.coset_step, start, incr)
    assert all((x == y).all() for x, y in zip(a, b))
    steps = rng.integers(0, 65, size=500).astype(np.int32)
    a = _kernels.reduce_paths_numba(incr, steps, s.inc_letters, s.inc_len)
    b = _kernels.reduce_paths_numpy(incr, steps, s.inc_letters, s.inc_len)
    assert (a[1] == b[1]).all()
    for i in range(500):
        assert (a[0][i, : a[1][i]] == b[0][i, : b[1][i]]).all()


@needs_numba
def test_first_returns_identical_under_both_backends():
    s = _sampler()
    a = s.first_returns(3000, np.random.default_rng(1), first_return=_kernels.first_return_numba,
                        reduce=_kernels.reduce_paths_numba)
    b = s.first_returns(3000, np.random.default_rng(1), first_return=_kernels.first_return_numpy,
                        reduce=_kernels.reduce_paths_numpy)
    assert (a[0] == b[0]).all() and a[1] == b[1]


def test_env_flag_forces_numpy():
    code = "from walk_induction import _kernels as k; print(k.BACKEND)"
    env = dict(os.environ, WALK_INDUCTION_DISABLE_JIT="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.stdout.strip() == "numpy"


def test_draw_is_exact_inverse_cdf():
    s = _sampler()
    draws = s.draw(np.random.default_rng(0), 200_000)
    freq = np.bincount(draws, minlength=4) / draws.size
    assert np.allclose(freq, 0.25, atol=0.005)


def test_positions_for_other_models():
    for model in (Z2, S3):
        mu = srw(model)
        s = StepSampler(mu)
        rng = np.random.default_rng(4)
        incr = s.draw(rng, (50, 7))
        steps = rng.integers(0, 8, size=50)
        pos = s.positions(incr, steps)
        for i in range(50):
            p = model.identity_payload
            for t in range(steps[i]):
                p = model.mul_payload(p, s.payloads[incr[i, t]])
            assert pos[i] == p


def test_endpoints_distribution_f2():
    s = StepSampler(srw(F2))
    pts = s.endpoints(2, 100_000, np.random.default_rng(8))
    back = sum(1 for p in pts if p == ()) / len(pts)
    assert abs(back - 0.25) < 4 * (0.25 * 0.75 / len(pts)) ** 0.5
