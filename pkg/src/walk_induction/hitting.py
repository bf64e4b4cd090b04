"""Hitting measures of a finite-index subgroup and their first-passage pieces."""

from __future__ import annotations

import bisect
import math
import random
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .chain import frac_str
from .cosets import CosetAction
from .errors import ModelMismatchError, ReducibleChainError, SupportCapExceeded
from .groups import GroupElement
from .measures import FinMeasure, projected_generation_check, scaled_integers
from .rng import chunked
from .sampling import StepSampler

DEFAULT_SUPPORT_CAP = 10**7


@dataclass(frozen=True)
class HittingTruncation:
    """First-passage pieces ``theta^(1..N)`` of a walk started at ``start``.

    ``survivors`` is the sub-probability law of ``Z_N`` on ``{tau > N}``;
    its mass is ``tail``.
    """

    action: CosetAction
    mu: FinMeasure
    start: GroupElement
    levels: tuple[FinMeasure, ...]
    survivors: FinMeasure
    tail: Fraction
    history: tuple[FinMeasure, ...] = ()

    @property
    def N(self) -> int:
        return len(self.levels)

    def masses(self) -> list[Fraction]:
        return [lv.mass for lv in self.levels]

    def combined(self) -> FinMeasure:
        """``theta_{<=N}``: the sum of all computed levels."""
        out: dict = defaultdict(Fraction)
        for lv in self.levels:
            for p, x in lv.weights.items():
                out[p] += x
        return FinMeasure.from_payloads(self.mu.model, out)

    def mean_return_bracket(self) -> tuple[Fraction, Fraction]:
        """``sum n P{tau = n}`` over computed levels, plus ``N * tail`` for the lower end."""
        partial = sum((n * x for n, x in enumerate(self.masses(), start=1)), Fraction(0))
        return partial + self.N * self.tail, partial

    def to_json(self) -> dict:
        fmt = self.mu.model.format_payload

        def atoms(m: FinMeasure):
            return [[fmt(p), frac_str(x)] for p, x in
                    sorted(m.weights.items(), key=lambda kv: (len(kv[0]), kv[0]))]

        return {"start": self.start.word, "N": self.N, "tail": frac_str(self.tail),
                "levels": [{"n": n, "mass": frac_str(lv.mass), "atoms": atoms(lv)}
                           for n, lv in enumerate(self.levels, start=1)],
                "survivor_mass": frac_str(self.survivors.mass)}


def theta_from(g: GroupElement, action: CosetAction, mu: FinMeasure, N: int,
               support_cap: int = DEFAULT_SUPPORT_CAP, keep_history: bool = False) -> HittingTruncation:
    """Exact first-passage decomposition for the walk ``g X_1 X_2 ...``.

    Survivors are kept as integer numerators over ``D**n`` (``D`` the common
    denominator of the step weights); the only truncation is in time.  With
    ``keep_history`` the surviving sub-probability after every step is kept.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if action.model != mu.model or g.model != mu.model:
        raise ModelMismatchError("start, action and measure must share one model")
    if not projected_generation_check(mu, action):
        raise ReducibleChainError("support does not act irreducibly on the coset labels")
    model = mu.model
    mul = model.mul_payload
    counts, D = scaled_integers(mu.weights)
    steps = [(p, c, action.element_perm(p)) for p, c in counts.items()]
    alive = {g.payload: 1}
    label = {g.payload: action.coset_of(g)}
    denom = 1
    levels: list[FinMeasure] = []
    history: list[FinMeasure] = []
    for n in range(1, N + 1):
        denom *= D
        hit: dict = defaultdict(int)
        nxt: dict = defaultdict(int)
        nxt_label: dict = {}
        for p, x in alive.items():
            c = label[p]
            for q, y, perm in steps:
                d = perm[c]
                r = mul(p, q)
                if d == 0:
                    hit[r] += x * y
                else:
                    nxt[r] += x * y
                    nxt_label[r] = d
        if len(nxt) > support_cap:
            partial = _truncation(action, mu, g, levels, alive, denom // D, history)
            raise SupportCapExceeded(
                f"surviving support {len(nxt)} exceeds cap {support_cap} at step {n}",
                achieved=n - 1, partial=partial)
        levels.append(FinMeasure.from_payloads(model, {p: Fraction(x, denom) for p, x in hit.items()}))
        alive, label = dict(nxt), nxt_label
        if keep_history:
            history.append(_sub_measure(model, alive, denom))
    return _truncation(action, mu, g, levels, alive, denom, history)


def _sub_measure(model, counts, denom) -> FinMeasure:
    return FinMeasure.from_payloads(model, {p: Fraction(x, denom) for p, x in counts.items()})


def _truncation(action, mu, g, levels, alive, denom, history) -> HittingTruncation:
    survivors = _sub_measure(mu.model, alive, denom)
    return HittingTruncation(action, mu, g, tuple(levels), survivors, survivors.mass, tuple(history))


def first_passage(action: CosetAction, mu: FinMeasure, N: int,
                  support_cap: int = DEFAULT_SUPPORT_CAP, keep_history: bool = False) -> HittingTruncation:
    return theta_from(mu.model.identity, action, mu, N, support_cap, keep_history)


def translation_identity_holds(base: HittingTruncation, shifted: HittingTruncation) -> bool:
    """``theta_gamma^(n) = gamma . theta^(n)`` for every computed level."""
    if shifted.N != base.N:
        raise ValueError("truncations must have the same depth")
    gamma = shifted.start
    return all(s == b.translate(gamma) for s, b in zip(shifted.levels, base.levels))


def sample_hit(action: CosetAction, mu: FinMeasure, rng: random.Random,
               max_steps: int = 10**7) -> tuple[GroupElement, int]:
    """One exact sample of ``(Z_tau, tau)`` by multiplying increments until label 0."""
    model = mu.model
    support = list(mu.weights.items())
    payloads = [p for p, _ in support]
    perms = {p: action.element_perm(p) for p in payloads}
    counts, D = scaled_integers(dict(support))
    cum = []
    acc = 0
    for p in payloads:
        acc += counts[p]
        cum.append(acc)
    z = model.identity_payload
    c = 0
    for n in range(1, max_steps + 1):
        u = rng.randrange(D)
        s = bisect.bisect_right(cum, u)
        z = model.mul_payload(z, payloads[s])
        c = perms[payloads[s]][c]
        if c == 0:
            return GroupElement(model, z), n
    raise RuntimeError(f"no return to the subgroup within {max_steps} steps")


@dataclass(frozen=True)
class HitSamples:
    taus: np.ndarray
    gammas: list
    seed: int

    @property
    def size(self) -> int:
        return len(self.taus)

    def tau_mean(self) -> tuple[float, float]:
        """Sample mean of tau and its standard error."""
        t = self.taus.astype(float)
        return float(t.mean()), float(t.std(ddof=1) / math.sqrt(len(t)))

    def atom_frequency(self, g: GroupElement) -> tuple[float, float]:
        """Empirical ``theta(g)`` and its binomial standard error."""
        k = sum(1 for p in self.gammas if p == g.payload)
        f = k / self.size
        return f, math.sqrt(max(f * (1 - f), 1e-300) / self.size)


def sample_hits(action: CosetAction, mu: FinMeasure, samples: int, seed: int,
                workers: int | None = None) -> HitSamples:
    sampler = StepSampler(mu, action)

    def run(size, rng):
        return sampler.first_returns(size, rng)

    parts = chunked(samples, seed, run, workers)
    taus = np.concatenate([t for t, _ in parts]) if parts else np.zeros(0, dtype=np.int64)
    gammas = [g for _, gs in parts for g in gs]
    return HitSamples(taus, gammas, seed)
