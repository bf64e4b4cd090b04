"""Finite-support measures on a group model with exact rational weights."""

from __future__ import annotations

import math
import random
from collections import defaultdict, deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping

from .cosets import CosetAction
from .errors import ConfigError, ModelMismatchError, WalkInductionError
from .groups import GroupElement, GroupModel
from .logvalue import LogValue


class FinMeasure:
    """Immutable map from group elements to strictly positive rationals.

    Keys are stored as canonical payloads; zero weights are dropped on
    construction.  ``is_probability`` is true iff the total mass is exactly 1.
    """

    __slots__ = ("model", "_w", "mass")

    def __init__(self, model: GroupModel, weights: Mapping[GroupElement, object] | None = None):
        w: dict = {}
        for g, x in (weights or {}).items():
            if g.model != model:
                raise ModelMismatchError(f"atom {g!r} is not in {model}")
            x = Fraction(x)
            if x < 0:
                raise ValueError(f"negative weight {x} at {g!r}")
            if x:
                w[g.payload] = w.get(g.payload, 0) + x
        self._init(model, w)

    def _init(self, model, w):
        self.model = model
        self._w = w
        self.mass = sum(w.values(), Fraction(0))

    @classmethod
    def from_payloads(cls, model: GroupModel, weights: Mapping) -> FinMeasure:
        m = cls.__new__(cls)
        m._init(model, {p: Fraction(x) for p, x in weights.items() if x})
        return m

    # --- access -----------------------------------------------------------

    @property
    def weights(self) -> Mapping:
        """Payload -> weight (read-only view for internal fast paths)."""
        return self._w

    def items(self) -> Iterator[tuple[GroupElement, Fraction]]:
        for p, x in self._w.items():
            yield GroupElement(self.model, p), x

    def support(self) -> list[GroupElement]:
        return [GroupElement(self.model, p) for p in self._w]

    def __getitem__(self, g: GroupElement) -> Fraction:
        return self._w.get(g.payload, Fraction(0))

    def __len__(self) -> int:
        return len(self._w)

    def __contains__(self, g: GroupElement) -> bool:
        return g.payload in self._w

    @property
    def is_probability(self) -> bool:
        return self.mass == 1

    def __eq__(self, other) -> bool:
        return (isinstance(other, FinMeasure) and self.model == other.model
                and self._w == other._w)

    def __repr__(self) -> str:
        items = sorted(self._w.items(), key=lambda kv: (len(kv[0]), kv[0]))
        body = ", ".join(f"{self.model.format_payload(p)}: {x}" for p, x in items[:8])
        more = "" if len(items) <= 8 else f", ... ({len(items)} atoms)"
        return f"FinMeasure({{{body}{more}}})"

    # --- algebra ----------------------------------------------------------

    def restrict(self, keep: Callable[[tuple], bool]) -> FinMeasure:
        return FinMeasure.from_payloads(self.model, {p: x for p, x in self._w.items() if keep(p)})

    def scaled(self, k) -> FinMeasure:
        k = Fraction(k)
        return FinMeasure.from_payloads(self.model, {p: x * k for p, x in self._w.items()})

    def normalized(self) -> FinMeasure:
        if not self.mass:
            raise ValueError("cannot normalise the zero measure")
        return self.scaled(1 / self.mass)

    def __add__(self, other: FinMeasure) -> FinMeasure:
        _same_model(self, other)
        w = dict(self._w)
        for p, x in other._w.items():
            w[p] = w.get(p, 0) + x
        return FinMeasure.from_payloads(self.model, w)

    def translate(self, g: GroupElement) -> FinMeasure:
        """Left translate ``delta_g * self``."""
        mul = self.model.mul_payload
        return FinMeasure.from_payloads(self.model, {mul(g.payload, p): x for p, x in self._w.items()})

    def integrate(self, f: Callable[[tuple], object], zero=Fraction(0)):
        """``sum_g m(g) f(g)`` with ``f`` evaluated on payloads."""
        total = zero
        for p, x in self._w.items():
            total = total + f(p) * x
        return total

    def min_weight(self) -> Fraction:
        return min(self._w.values())


def _same_model(m1: FinMeasure, m2: FinMeasure) -> None:
    if m1.model != m2.model:
        raise ModelMismatchError(f"measures on {m1.model} and {m2.model}")


def _lcm_denominator(values: Iterable[Fraction]) -> int:
    d = 1
    for x in values:
        d = math.lcm(d, x.denominator)
    return d


def scaled_integers(w: Mapping[tuple, Fraction]) -> tuple[dict[tuple, int], int]:
    """Write a rational weight map as integer numerators over one denominator."""
    d = _lcm_denominator(w.values())
    return {p: x.numerator * (d // x.denominator) for p, x in w.items()}, d


def convolve_counts(model: GroupModel, a: Mapping[tuple, int], b: Mapping[tuple, int]) -> dict:
    """Integer-weight convolution; the hot loop of every exact power computation."""
    mul = model.mul_payload
    acc: dict = defaultdict(int)
    bl = list(b.items())
    for p, x in a.items():
        for q, y in bl:
            acc[mul(p, q)] += x * y
    return dict(acc)


def convolve(m1: FinMeasure, m2: FinMeasure) -> FinMeasure:
    _same_model(m1, m2)
    a, da = scaled_integers(m1.weights)
    b, db = scaled_integers(m2.weights)
    d = da * db
    return FinMeasure.from_payloads(
        m1.model, {p: Fraction(c, d) for p, c in convolve_counts(m1.model, a, b).items() if c})


def convolution_power(mu: FinMeasure, n: int) -> FinMeasure:
    if n < 0:
        raise ValueError("negative convolution power")
    out = dirac(mu.model)
    for _ in range(n):
        out = convolve(out, mu)
    return out


@dataclass(frozen=True)
class EntropyValue:
    """Shannon entropy: exact log-combination plus an independently summed float."""

    exact: LogValue | None
    nats: float

    def __float__(self) -> float:
        return self.nats

    def format(self, unit: int | None = None) -> str:
        return f"{self.nats:.12f} nats" if self.exact is None else self.exact.format(unit)

    def to_json(self, unit: int | None = None) -> dict:
        out = {"exact": None} if self.exact is None else self.exact.to_json(unit)
        out["nats"] = round(self.nats, 12)
        return out


EXACT_COUNT_BITS = 64


def entropy_of_counts(counts: Mapping[tuple, int], denominator: int,
                      exact: bool | None = None) -> EntropyValue:
    """Entropy of the probability vector ``counts / denominator``.

    The exact log-combination needs every count factored; with
    ``exact=None`` it is skipped once a count exceeds ``EXACT_COUNT_BITS``
    bits and only the float value is kept.
    """
    by_count: dict[int, int] = defaultdict(int)
    for c in counts.values():
        by_count[c] += c
    if exact is None:
        exact = max(by_count, default=1).bit_length() <= EXACT_COUNT_BITS
    value = None
    if exact:
        value = LogValue.zero()
        log_d = LogValue.log(denominator)
        for c, mass in by_count.items():
            # -(mass/d) * (log c - log d)
            value = value + (log_d - LogValue.log(c)) * Fraction(mass, denominator)
    nats = math.fsum(-(c / denominator) * (math.log(c) - math.log(denominator))
                     for c in counts.values())
    return EntropyValue(value, nats)


def entropy(m: FinMeasure) -> EntropyValue:
    if not m.is_probability:
        raise WalkInductionError(f"entropy needs a probability measure (mass {m.mass})")
    counts, d = scaled_integers(m.weights)
    return entropy_of_counts(counts, d, exact=True)


def entropy_subadditivity_check(m1: FinMeasure, m2: FinMeasure,
                                guard: float = 1e-12) -> tuple[bool, LogValue]:
    """Check ``H(m1*m2) <= H(m1) + H(m2)``; returns (holds, exact slack)."""
    slack = entropy(m1).exact + entropy(m2).exact - entropy(convolve(m1, m2)).exact
    return slack.nats >= -guard, slack


def _strongly_connected(m: int, edges: dict[int, set[int]]) -> bool:
    def reach(adj):
        seen = {0}
        queue = deque([0])
        while queue:
            c = queue.popleft()
            for d in adj.get(c, ()):
                if d not in seen:
                    seen.add(d)
                    queue.append(d)
        return len(seen) == m

    back: dict[int, set[int]] = defaultdict(set)
    for c, ds in edges.items():
        for d in ds:
            back[d].add(c)
    return reach(edges) and reach(back)


def projected_generation_check(m: FinMeasure, action: CosetAction) -> bool:
    """Irreducibility of the image of ``supp m`` acting on the coset labels."""
    if m.model != action.model:
        raise ModelMismatchError("measure and action live on different models")
    edges: dict[int, set[int]] = defaultdict(set)
    for p in m.weights:
        perm = action.element_perm(p)
        for c in range(action.m):
            edges[c].add(perm[c])
    return _strongly_connected(action.m, edges)


# --- constructors -------------------------------------------------------------


def dirac(model: GroupModel, g: GroupElement | None = None) -> FinMeasure:
    p = model.identity_payload if g is None else g.payload
    return FinMeasure.from_payloads(model, {p: Fraction(1)})


def srw(model: GroupModel) -> FinMeasure:
    """Uniform measure on the generators and their inverses (as 2k letters)."""
    letters = model.letters()
    w: dict = defaultdict(Fraction)
    for x in letters:
        w[model.letter_payload(x)] += Fraction(1, len(letters))
    return FinMeasure.from_payloads(model, w)


def from_word_weights(model: GroupModel, pairs: Iterable[tuple[str, object]]) -> FinMeasure:
    w: dict = defaultdict(Fraction)
    for word, x in pairs:
        x = Fraction(x)
        if x <= 0:
            raise ConfigError(f"weight of {word!r} must be positive, got {x}")
        w[model.parse(word).payload] += x
    return FinMeasure.from_payloads(model, w)


def measure_from_config(model: GroupModel, spec) -> FinMeasure:
    if spec == "srw":
        return srw(model)
    if isinstance(spec, dict):
        if set(spec) != {"weights"}:
            raise ConfigError(f"unknown keys in measure spec: {sorted(set(spec) - {'weights'})}")
        spec = spec["weights"]
    if not isinstance(spec, list):
        raise ConfigError("measure must be 'srw' or a list of [word, weight] pairs")
    try:
        mu = from_word_weights(model, [(str(w), str(x)) for w, x in spec])
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"bad measure entry: {exc}") from exc
    if not mu.is_probability:
        raise ConfigError(f"measure weights sum to {mu.mass}, not 1")
    return mu


def measure_to_config(mu: FinMeasure) -> list[list[str]]:
    fmt = mu.model.format_payload
    return sorted([fmt(p), f"{x.numerator}/{x.denominator}"] for p, x in mu.weights.items())


def random_rational_measure(model: GroupModel, support: Iterable[GroupElement],
                            rng: random.Random, max_numerator: int = 20) -> FinMeasure:
    """Random probability measure with full support on ``support``."""
    support = list(support)
    raw = [rng.randint(1, max_numerator) for _ in support]
    total = sum(raw)
    return FinMeasure(model, {g: Fraction(r, total) for g, r in zip(support, raw)})
