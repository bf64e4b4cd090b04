"""Random-walk entropy: exact ``H(mu^n)`` sequences, brackets and Monte Carlo checks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .chain import build_chain, frac_str, overshoot_mean
from .cosets import CosetAction
from .errors import SupportCapExceeded, WalkInductionError
from .hitting import DEFAULT_SUPPORT_CAP, first_passage
from .logvalue import LogValue
from .measures import EntropyValue, FinMeasure, convolve_counts, entropy_of_counts, scaled_integers
from .rng import chunked
from .sampling import StepSampler

GUARD = 1e-12


def _nats(x) -> float:
    return float(x)


@dataclass(frozen=True)
class PowerTable:
    """Integer counts of ``mu^n`` over ``denominator = D**n``."""

    n: int
    counts: dict
    denominator: int


def power_tables(mu: FinMeasure, n_max: int, support_cap: int = DEFAULT_SUPPORT_CAP):
    """Yield ``PowerTable`` for ``n = 1..n_max``; stops early past the support cap."""
    if not mu.is_probability:
        raise WalkInductionError(f"step measure has mass {mu.mass}, expected 1")
    base, D = scaled_integers(mu.weights)
    counts = {mu.model.identity_payload: 1}
    denom = 1
    for n in range(1, n_max + 1):
        nxt = convolve_counts(mu.model, counts, base)
        if len(nxt) > support_cap:
            raise SupportCapExceeded(f"support of mu^{n} has {len(nxt)} atoms > cap {support_cap}",
                                     achieved=n - 1)
        counts, denom = nxt, denom * D
        yield PowerTable(n, counts, denom)


@dataclass(frozen=True)
class EntropySequence:
    """``H(mu^n)`` for ``n = 1..n_max`` and the bracket it implies for ``h(G, mu)``.

    ``D_n = H(mu^n) - H(mu^(n-1))`` is non-increasing with limit ``h``, so
    ``D_{n_max}`` is an upper bound, as is the Cesaro mean ``H(mu^n)/n``.  The
    lower end is ``max(0, lower_certificate)`` where the certificate is the
    entropy of some stationary space (which can never exceed ``h``).
    """

    H: tuple[EntropyValue, ...]
    n_requested: int
    lower_certificate: float | None = None
    support_sizes: tuple[int, ...] = ()
    mass_exact: bool = True
    meta: dict = field(default_factory=dict)

    @property
    def n_max(self) -> int:
        return len(self.H)

    @property
    def truncated(self) -> bool:
        return self.n_max < self.n_requested

    def increments(self) -> list[float]:
        """``D_1 .. D_n`` in nats (exact differences when available)."""
        out = []
        prev: EntropyValue | None = None
        for h in self.H:
            if prev is None:
                out.append(h.nats)
            elif h.exact is not None and prev.exact is not None:
                out.append((h.exact - prev.exact).nats)
            else:
                out.append(h.nats - prev.nats)
            prev = h
        return out

    def cesaro(self) -> float:
        return self.H[-1].nats / self.n_max if self.H else math.inf

    @property
    def upper(self) -> float:
        return self.increments()[-1] if self.H else math.inf

    @property
    def lower(self) -> float:
        return max(0.0, self.lower_certificate or 0.0)

    def bracket(self) -> tuple[float, float]:
        return self.lower, self.upper

    def contains(self, value: float, guard: float = GUARD) -> bool:
        return self.lower - guard <= value <= self.upper + guard

    def monotone_violations(self, guard: float = 1e-10) -> list[int]:
        d = self.increments()
        return [n for n in range(2, len(d) + 1) if d[n - 1] > d[n - 2] + guard]

    def subadditivity_violations(self, guard: float = 1e-10) -> list[tuple[int, int]]:
        h = [0.0] + [x.nats for x in self.H]
        n = self.n_max
        return [(a, b) for a in range(1, n + 1) for b in range(a, n + 1 - a)
                if h[a + b] > h[a] + h[b] + guard]

    @property
    def consistent(self) -> bool:
        return (self.mass_exact and not self.monotone_violations()
                and not self.subadditivity_violations() and self.lower <= self.upper + GUARD)

    def to_json(self, unit: int | None = None) -> dict:
        inc = self.increments()
        return {"n_requested": self.n_requested, "n_max": self.n_max, "truncated": self.truncated,
                "H": [dict(h.to_json(unit), n=n) for n, h in enumerate(self.H, start=1)],
                "D": [round(x, 12) for x in inc],
                "support_sizes": list(self.support_sizes),
                "cesaro": round(self.cesaro(), 12),
                "bracket": [round(self.lower, 12), round(self.upper, 12)],
                "lower_certificate": None if self.lower_certificate is None
                else round(self.lower_certificate, 12),
                "monotone_violations": self.monotone_violations(),
                "subadditivity_violations": [list(p) for p in self.subadditivity_violations()],
                "mass_exact": self.mass_exact, "consistent": self.consistent, **self.meta}


def entropy_sequence(mu: FinMeasure, n_max: int, support_cap: int = DEFAULT_SUPPORT_CAP,
                     lower_certificate=None, exact: bool | None = None) -> EntropySequence:
    """Exact ``H(mu^n)`` up to ``n_max``, or up to the last ``n`` under the support cap."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    H: list[EntropyValue] = []
    sizes: list[int] = []
    mass_exact = True
    try:
        for t in power_tables(mu, n_max, support_cap):
            mass_exact &= sum(t.counts.values()) == t.denominator
            H.append(entropy_of_counts(t.counts, t.denominator, exact))
            sizes.append(len(t.counts))
    except SupportCapExceeded:
        if not H:
            raise
    cert = None if lower_certificate is None else _nats(lower_certificate)
    return EntropySequence(tuple(H), n_max, cert, tuple(sizes), mass_exact,
                           {"support_cap": support_cap})


@dataclass(frozen=True)
class SMBEstimate:
    """Monte Carlo mean of ``-(1/n) log mu^n(Z_n)`` next to its exact expectation."""

    n: int
    samples: int
    seed: int
    mean: float
    stderr: float
    expected: float

    @property
    def z(self) -> float:
        diff = self.mean - self.expected
        if self.stderr == 0:
            return 0.0 if abs(diff) <= GUARD else math.inf
        return diff / self.stderr

    def within(self, k: float = 4.0) -> bool:
        return abs(self.z) <= k

    def to_json(self) -> dict:
        return {"n": self.n, "samples": self.samples, "seed": self.seed,
                "mean": round(self.mean, 12), "stderr": round(self.stderr, 12),
                "expected": round(self.expected, 12), "z": round(self.z, 6),
                "within_4se": self.within()}


def smb_estimate(mu: FinMeasure, n: int, samples: int, seed: int,
                 table: PowerTable | None = None, workers: int | None = None) -> SMBEstimate:
    """Sample ``Z_n`` and average ``-(1/n) log mu^n(Z_n)`` using the exact table of ``mu^n``."""
    if table is None:
        for table in power_tables(mu, n):
            pass
    if table is None or table.n != n:
        raise WalkInductionError(f"no exact table for n = {n}")
    log_d = math.log(table.denominator)
    info = {p: (log_d - math.log(c)) / n for p, c in table.counts.items()}
    sampler = StepSampler(mu)

    def run(size, rng):
        pts = sampler.endpoints(n, size, rng)
        return np.array([info[p] for p in pts], dtype=float)

    values = np.concatenate(chunked(samples, seed, run, workers))
    expected = entropy_of_counts(table.counts, table.denominator, exact=False).nats / n
    se = float(values.std(ddof=1) / math.sqrt(len(values))) if len(values) > 1 else math.inf
    return SMBEstimate(n, samples, seed, float(values.mean()), se, expected)


@dataclass(frozen=True)
class CorollaryReport:
    """Entropy of the induced walk against ``index * h(G, mu)``, both as brackets."""

    index: int
    N: int
    tail: Fraction
    overshoot: Fraction
    bias: float
    max_bias: float
    walk: EntropySequence
    induced: EntropySequence

    @property
    def scaled_walk_bracket(self) -> tuple[float, float]:
        lo, hi = self.walk.bracket()
        return self.index * lo, self.index * hi

    @property
    def induced_bracket(self) -> tuple[float, float]:
        lo, hi = self.induced.bracket()
        return max(0.0, lo - self.bias), hi + self.bias

    @property
    def overlap(self) -> bool:
        a, b = self.scaled_walk_bracket
        c, d = self.induced_bracket
        return max(a, c) <= min(b, d) + GUARD

    @property
    def status(self) -> str:
        if self.bias > self.max_bias:
            return "inconclusive"
        if not (self.walk.consistent and self.induced.consistent):
            return "inconsistent"
        return "consistent" if self.overlap else "inconsistent"

    def to_json(self) -> dict:
        r = lambda p: [round(x, 12) for x in p]  # noqa: E731
        return {"index": self.index, "N": self.N, "tail": frac_str(self.tail),
                "overshoot_mean": frac_str(self.overshoot), "bias_nats": round(self.bias, 12),
                "max_bias": self.max_bias,
                "walk_bracket": r(self.walk.bracket()),
                "scaled_walk_bracket": r(self.scaled_walk_bracket),
                "induced_bracket": r(self.induced_bracket),
                "overlap": self.overlap, "status": self.status,
                "walk": self.walk.to_json(), "induced": self.induced.to_json()}


def truncation_bias(mu: FinMeasure, overshoot: Fraction) -> float:
    """``(-log min mu) E[tau ; tau > N]`` in nats."""
    return (LogValue.log(1 / mu.min_weight()) * overshoot).nats


def corollary_check(mu: FinMeasure, action: CosetAction, N: int, n_max: int,
                    n_max_induced: int | None = None, walk_lower=None, induced_lower=None,
                    max_bias: float = 0.05,
                    support_cap: int = DEFAULT_SUPPORT_CAP) -> CorollaryReport:
    """Compare the entropy of ``(Gamma, theta)`` with ``index * h(G, mu)``.

    ``theta`` is replaced by its renormalised first-passage truncation at
    ``N``; the resulting bracket is widened by :func:`truncation_bias`.
    """
    chain = build_chain(action, mu)
    trunc = first_passage(action, mu, N, support_cap)
    over = overshoot_mean(chain, N) if trunc.tail else Fraction(0)
    bias = truncation_bias(mu, over) if over else 0.0
    theta = trunc.combined().normalized()
    walk = entropy_sequence(mu, n_max, support_cap, walk_lower)
    induced = entropy_sequence(theta, n_max_induced or n_max, support_cap, induced_lower)
    return CorollaryReport(action.m, N, trunc.tail, over, bias, max_bias, walk, induced)
