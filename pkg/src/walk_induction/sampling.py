"""Vectorised sampling of walk increments, first returns and positions."""

from __future__ import annotations

import numpy as np

from . import _kernels
from .cosets import CosetAction
from .groups import FreeAbelianGroup, FreeGroup
from .measures import FinMeasure, scaled_integers

_INT64_MAX = np.iinfo(np.int64).max


class StepSampler:
    """Support of a step measure laid out as arrays for the kernels.

    Increments are drawn exactly: weights become integers over a common
    denominator ``D`` and a uniform integer in ``[0, D)`` is located in the
    cumulative counts.
    """

    def __init__(self, mu: FinMeasure, action: CosetAction | None = None):
        self.mu = mu
        self.model = mu.model
        self.payloads = sorted(mu.weights, key=lambda p: (len(p), p))
        counts, self.denominator = scaled_integers(mu.weights)
        if self.denominator > _INT64_MAX:
            raise ValueError("step measure denominator does not fit in int64")
        self.cum = np.cumsum([counts[p] for p in self.payloads]).astype(np.int64)
        self.action = action
        if action is not None:
            perms = [action.element_perm(p) for p in self.payloads]
            self.coset_step = np.array(perms, dtype=np.int32).reshape(len(perms), action.m)
        if isinstance(self.model, FreeGroup):
            width = max(1, max(len(p) for p in self.payloads))
            self.inc_letters = np.zeros((len(self.payloads), width), dtype=np.int32)
            self.inc_len = np.array([len(p) for p in self.payloads], dtype=np.int32)
            for s, p in enumerate(self.payloads):
                self.inc_letters[s, : len(p)] = p
        elif isinstance(self.model, FreeAbelianGroup):
            self.inc_vec = np.array(self.payloads, dtype=np.int64).reshape(
                len(self.payloads), self.model.rank)

    def draw(self, rng: np.random.Generator, shape) -> np.ndarray:
        u = rng.integers(0, self.denominator, size=shape, dtype=np.int64)
        return np.searchsorted(self.cum, u, side="right").astype(np.int32)

    def positions(self, incr: np.ndarray, steps: np.ndarray, reduce=None) -> list[tuple]:
        """Payload of the product of the first ``steps[i]`` increments of row i."""
        model = self.model
        if isinstance(model, FreeGroup):
            reduce = reduce or _kernels.reduce_paths
            words, lens = reduce(incr, steps.astype(np.int32), self.inc_letters, self.inc_len)
            return [tuple(int(x) for x in words[i, : lens[i]]) for i in range(len(lens))]
        if isinstance(model, FreeAbelianGroup):
            mask = np.arange(incr.shape[1])[None, :] < steps[:, None]
            vec = (self.inc_vec[incr] * mask[..., None]).sum(axis=1)
            return [tuple(int(x) for x in row) for row in vec]
        out = []
        mul = model.mul_payload
        for i in range(incr.shape[0]):
            p = model.identity_payload
            for t in range(int(steps[i])):
                p = mul(p, self.payloads[incr[i, t]])
            out.append(p)
        return out

    def first_returns(self, size: int, rng: np.random.Generator, start_label: int = 0,
                      block: int | None = None, max_steps: int = 10**7,
                      first_return=None, reduce=None) -> tuple[np.ndarray, list[tuple]]:
        """``size`` independent samples of ``(tau, Z_tau)`` for walks from the identity."""
        first_return = first_return or _kernels.first_return
        block = block or 4 * self.coset_step.shape[1] + 4
        taus = np.zeros(size, dtype=np.int64)
        gammas: list = [None] * size
        pending = np.arange(size)
        labels = np.full(size, start_label, dtype=np.int32)
        prefixes: list = [self.model.identity_payload] * size
        offset = 0
        mul = self.model.mul_payload
        while pending.size:
            if offset > max_steps:
                raise RuntimeError(f"{pending.size} walkers did not return within {max_steps} steps")
            incr = self.draw(rng, (pending.size, block))
            hit, end = first_return(self.coset_step, labels[pending], incr)
            done = hit > 0
            steps = np.where(done, hit, block)
            pos = self.positions(incr, steps, reduce=reduce)
            still = []
            for j, i in enumerate(pending):
                p = mul(prefixes[i], pos[j])
                if done[j]:
                    taus[i] = offset + hit[j]
                    gammas[i] = p
                else:
                    prefixes[i] = p
                    labels[i] = end[j]
                    still.append(i)
            pending = np.array(still, dtype=np.int64)
            offset += block
        return taus, gammas

    def endpoints(self, n: int, size: int, rng: np.random.Generator, reduce=None) -> list[tuple]:
        """Positions ``Z_n`` of ``size`` independent walks from the identity."""
        incr = self.draw(rng, (size, n))
        return self.positions(incr, np.full(size, n, dtype=np.int32), reduce=reduce)
