"""Monte Carlo inner loops, compiled with numba when available.

Each kernel has a numba implementation (scalar loops per walker) and a pure
numpy implementation (vectorised across walkers).  Both consume the same
pre-drawn increment indices, so they must agree exactly.  Set
``WALK_INDUCTION_DISABLE_JIT=1`` to force the numpy path.
"""

from __future__ import annotations

import os

import numpy as np

_DISABLE = os.environ.get("WALK_INDUCTION_DISABLE_JIT", "").strip().lower() not in ("", "0", "false")

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not _DISABLE


# --- first return to label 0 --------------------------------------------------


def first_return_numpy(coset_step, start, incr):
    """Scan each row of ``incr`` until the label walk hits 0.

    ``coset_step[s, c]`` is the label reached from ``c`` by support element
    ``s``.  Returns ``(hit, end)``: the 1-based hitting step (-1 if the block
    ran out) and the label after the block (0 for walkers that hit).
    """
    n_walkers, n_steps = incr.shape
    c = start.astype(np.int32).copy()
    hit = np.full(n_walkers, -1, dtype=np.int32)
    alive = np.ones(n_walkers, dtype=bool)
    for t in range(n_steps):
        idx = np.flatnonzero(alive)
        if idx.size == 0:
            break
        c[idx] = coset_step[incr[idx, t], c[idx]]
        newly = idx[c[idx] == 0]
        hit[newly] = t + 1
        alive[newly] = False
    return hit, c


def _first_return_loops(coset_step, start, incr):
    n_walkers, n_steps = incr.shape
    hit = np.full(n_walkers, -1, dtype=np.int32)
    end = np.empty(n_walkers, dtype=np.int32)
    for i in range(n_walkers):
        c = start[i]
        for t in range(n_steps):
            c = coset_step[incr[i, t], c]
            if c == 0:
                hit[i] = t + 1
                break
        end[i] = c
    return hit, end


# --- batched free reduction of increment paths -------------------------------


def reduce_paths_numpy(incr, steps, inc_letters, inc_len):
    """Freely reduce the product of the first ``steps[i]`` increments of each row.

    ``inc_letters[s, :inc_len[s]]`` is the reduced word of support element
    ``s``.  Returns a padded letter array and the reduced lengths.
    """
    n_walkers, n_steps = incr.shape
    width = n_steps * inc_letters.shape[1]
    out = np.zeros((n_walkers, max(width, 1)), dtype=np.int32)
    top = np.zeros(n_walkers, dtype=np.int32)
    rows = np.arange(n_walkers)
    for t in range(n_steps):
        active_t = t < steps
        s = incr[:, t]
        for j in range(inc_letters.shape[1]):
            x = inc_letters[s, j]
            active = active_t & (j < inc_len[s])
            prev = out[rows, np.maximum(top - 1, 0)]
            cancel = active & (top > 0) & (prev == -x)
            push = active & ~cancel
            top[cancel] -= 1
            out[rows[push], top[push]] = x[push]
            top[push] += 1
    return out, top


def _reduce_paths_loops(incr, steps, inc_letters, inc_len):
    n_walkers, n_steps = incr.shape
    width = n_steps * inc_letters.shape[1]
    out = np.zeros((n_walkers, max(width, 1)), dtype=np.int32)
    top = np.zeros(n_walkers, dtype=np.int32)
    for i in range(n_walkers):
        h = 0
        for t in range(steps[i]):
            s = incr[i, t]
            for j in range(inc_len[s]):
                x = inc_letters[s, j]
                if h > 0 and out[i, h - 1] == -x:
                    h -= 1
                else:
                    out[i, h] = x
                    h += 1
        top[i] = h
    return out, top


if HAVE_NUMBA:
    first_return_numba = numba.njit(cache=True, nogil=True)(_first_return_loops)
    reduce_paths_numba = numba.njit(cache=True, nogil=True)(_reduce_paths_loops)
else:  # pragma: no cover
    first_return_numba = None
    reduce_paths_numba = None

if USE_NUMBA:
    first_return = first_return_numba
    reduce_paths = reduce_paths_numba
else:
    first_return = first_return_numpy
    reduce_paths = reduce_paths_numpy

BACKEND = "numba" if USE_NUMBA else "numpy"
