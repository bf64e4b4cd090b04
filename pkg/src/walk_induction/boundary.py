"""The boundary of a free group with the harmonic measure of simple random walk.

Boundary points are infinite reduced words.  The harmonic measure of SRW on
``F_k`` gives the cylinder of a reduced word ``w != e`` the weight
``1/(2k) * (2k-1)**-(|w|-1)``; everything here is exact in the single unit
``log(2k-1)``.  Cocycle and entropy values are returned as rational
coefficients of that unit; :meth:`BoundaryModel.value` turns them into
:class:`LogValue`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .chain import CosetChain, build_chain, frac_str, overshoot_mean
from .cosets import CosetAction
from .errors import (ModelMismatchError, NotInSupportError, ShallowCylinderError,
                     UnsupportedOperationError, WalkInductionError)
from .groups import FreeGroup, GroupElement, free_mul
from .hitting import DEFAULT_SUPPORT_CAP, HittingTruncation, first_passage, theta_from
from .logvalue import LogValue
from .measures import FinMeasure

Word = tuple[int, ...]


def _inverse(w: Word) -> Word:
    return tuple(-x for x in reversed(w))


def _is_reduced(w: Word) -> bool:
    return all(w[i] != -w[i + 1] for i in range(len(w) - 1))


@dataclass(frozen=True)
class BoundaryModel:
    """``(boundary of F_k, harmonic measure of SRW)``."""

    group: FreeGroup

    def __post_init__(self):
        if not isinstance(self.group, FreeGroup):
            raise UnsupportedOperationError("boundary computations need a free group model")
        if self.group.rank < 2:
            raise UnsupportedOperationError("the tree boundary needs rank >= 2")

    @property
    def k(self) -> int:
        return self.group.rank

    @property
    def unit(self) -> int:
        """Logarithm base of every exact boundary quantity: ``2k - 1``."""
        return 2 * self.k - 1

    def value(self, q) -> LogValue:
        return LogValue.of(Fraction(q), self.unit)

    def _word(self, w) -> Word:
        if isinstance(w, GroupElement):
            if w.model != self.group:
                raise ModelMismatchError("cylinder word lives on a different model")
            return w.payload
        if isinstance(w, str):
            return self.group.parse(w).payload
        w = tuple(w)
        if not _is_reduced(w) or any(not 1 <= abs(x) <= self.k for x in w):
            raise WalkInductionError(f"{w} is not a reduced word of F_{self.k}")
        return w

    # --- harmonic measure -------------------------------------------------

    def nu(self, w) -> Fraction:
        """Harmonic measure of the cylinder of infinite words starting with ``w``."""
        w = self._word(w)
        if not w:
            return Fraction(1)
        return Fraction(1, 2 * self.k * self.unit ** (len(w) - 1))

    def cylinders(self, depth: int) -> list[Word]:
        return self.group.sphere(depth)

    def extensions(self, w) -> list[Word]:
        w = self._word(w)
        return [w + (x,) for x in self.group.letters() if not w or x != -w[-1]]

    def additivity_holds(self, depth: int) -> bool:
        """Each cylinder of depth < ``depth`` splits exactly into its extensions."""
        if sum((self.nu(w) for w in self.cylinders(1)), Fraction(0)) != 1:
            return False
        return all(self.nu(w) == sum((self.nu(v) for v in self.extensions(w)), Fraction(0))
                   for d in range(depth) for w in self.cylinders(d))

    def translate_mass(self, g, w) -> Fraction:
        """``nu({x : g x in [w]})``, the cylinder ``[w]`` under ``g^-1 nu``.

        Split on how far a boundary point ``x`` cancels into ``g``.  If ``x``
        cancels exactly ``j < |g|`` letters then ``g x = g[:|g|-j] x[j:]``.
        """
        g, w = self._word(g), self._word(w)
        if not w:
            return Fraction(1)
        n, m = len(g), len(w)
        ginv = _inverse(g)
        total = Fraction(0)
        for j in range(n):
            u = g[: n - j]
            if m <= len(u):
                if u[:m] == w:
                    total += self.nu(ginv[:j]) - self.nu(ginv[: j + 1])
            elif w[: len(u)] == u:
                prefix = ginv[:j] + w[len(u):]
                if _is_reduced(prefix):
                    total += self.nu(prefix)
        # full cancellation: g x = x[n:]
        prefix = ginv + w
        if _is_reduced(prefix):
            total += self.nu(prefix)
        return total

    def stationarity_defects(self, mu: FinMeasure, depth: int) -> list[tuple[Word, Fraction]]:
        """Cylinders of depth ``1..depth`` where ``(mu * nu)[w] != nu[w]``."""
        self._check_measure(mu)
        bad = []
        for d in range(1, depth + 1):
            for w in self.cylinders(d):
                lhs = sum((x * self.translate_mass(p, w) for p, x in mu.weights.items()), Fraction(0))
                if lhs != self.nu(w):
                    bad.append((w, lhs - self.nu(w)))
        return bad

    # --- cocycle and phi ----------------------------------------------------

    def rho(self, g, w) -> int:
        """Integer ``q`` with ``rho(g, x) = q log(2k-1)`` for every ``x`` in ``[w]``.

        ``rho(g, x) = -log d(g^-1 nu)/d nu (x) = (|g x| - |x|) log(2k-1)``;
        the cylinder must be deeper than ``|g|`` for the value to be settled.
        """
        g, w = self._word(g), self._word(w)
        if len(w) <= len(g):
            raise ShallowCylinderError(
                f"cylinder depth {len(w)} must exceed |g| = {len(g)}")
        return len(free_mul(g, w)) - len(w)

    def cocycle_residual(self, g, g1, w) -> int:
        """``rho(g g1, w) - rho(g, g1 w) - rho(g1, w)``; zero when the relation holds."""
        g, g1, w = self._word(g), self._word(g1), self._word(w)
        return (self.rho(free_mul(g, g1), w) - self.rho(g, free_mul(g1, w))
                - self.rho(g1, w))

    def phi(self, g) -> Fraction:
        """``phi(g) = integral of rho(g, .) d nu`` in units of ``log(2k-1)``."""
        return _phi_by_length(self.k, len(self._word(g)))

    def phi_by_cylinders(self, g) -> Fraction:
        """Same value as :meth:`phi`, summed literally over the depth-(|g|+1) cylinders."""
        g = self._word(g)
        return sum((self.nu(w) * self.rho(g, w) for w in self.cylinders(len(g) + 1)), Fraction(0))

    def phi_value(self, g) -> LogValue:
        return self.value(self.phi(g))

    def phi_table(self, radius: int) -> list[dict]:
        rows = []
        for r in range(radius + 1):
            q = _phi_by_length(self.k, r)
            rows.append({"length": r, "q": frac_str(q), "exact": self.value(q).format(self.unit),
                         "nats": round(self.value(q).nats, 12)})
        return rows

    def _check_measure(self, mu: FinMeasure) -> None:
        if mu.model != self.group:
            raise ModelMismatchError("measure lives on a different model")

    # --- cylinder functions -------------------------------------------------

    def cylinder_function(self, coefficients: Mapping) -> dict[Word, Fraction]:
        """Validate ``{word: rational}`` as a finite combination of cylinder indicators."""
        out: dict[Word, Fraction] = {}
        for w, c in coefficients.items():
            key = self._word(w)
            if isinstance(c, float):
                raise WalkInductionError("cylinder coefficients must be exact rationals")
            out[key] = out.get(key, Fraction(0)) + Fraction(c)
        return {w: c for w, c in out.items() if c}

    def sup_norm(self, f: Mapping) -> Fraction:
        f = self.cylinder_function(f)
        depth = max((len(w) for w in f), default=0)
        if depth == 0:
            return abs(f.get((), Fraction(0)))
        return max(abs(sum((c for w, c in f.items() if x[: len(w)] == w), Fraction(0)))
                   for x in self.cylinders(depth))

    def transform(self, f: Mapping, g) -> Fraction:
        """Furstenberg transform ``h(g) = integral f(g x) d nu(x)``."""
        f = self.cylinder_function(f)
        return sum((c * self.translate_mass(g, w) for w, c in f.items()), Fraction(0))


@lru_cache(maxsize=None)
def _phi_by_length(k: int, n: int) -> Fraction:
    # rho(g, x) = n - 2J with J the number of letters x cancels from g, and
    # P{J >= j} is the measure of the cylinder of the first j letters of g^-1.
    q = 2 * k - 1
    at_least = sum((Fraction(1, 2 * k * q ** (j - 1)) for j in range(1, n + 1)), Fraction(0))
    return n - 2 * at_least


def boundary_for(model) -> BoundaryModel:
    return BoundaryModel(model)


# --- entropies -----------------------------------------------------------------


def furstenberg_entropy(bm: BoundaryModel, mu: FinMeasure) -> Fraction:
    """``h_mu = sum mu(g) phi(g)`` in units of ``log(2k-1)``."""
    bm._check_measure(mu)
    return sum((x * _phi_by_length(bm.k, len(p)) for p, x in mu.weights.items()), Fraction(0))


@dataclass(frozen=True)
class HittingEntropy:
    """Bracket for the Furstenberg entropy of the hitting measure."""

    lower_q: Fraction
    lower: LogValue
    upper: LogValue
    tail: Fraction
    overshoot: Fraction
    N: int
    unit: int

    @property
    def exact(self) -> bool:
        return self.tail == 0

    def contains(self, value: LogValue, guard: float = 1e-12) -> bool:
        return self.lower.le(value, guard) and value.le(self.upper, guard)

    def to_json(self) -> dict:
        return {"N": self.N, "exact": self.exact, "tail": frac_str(self.tail),
                "overshoot_mean": frac_str(self.overshoot),
                "lower": self.lower.to_json(self.unit), "upper": self.upper.to_json(self.unit)}


def furstenberg_entropy_hitting(bm: BoundaryModel, trunc: HittingTruncation,
                                chain: CosetChain | None = None) -> HittingEntropy:
    """``h_theta = sum theta(g) phi(g)`` bracketed by the first-passage truncation.

    The computed levels give an exact lower bound.  On ``{tau > N}`` the
    hitting point is a product of ``tau`` steps, so ``phi(Z_tau) <= tau
    (-log min mu)``; the upper bound adds that charge against the exact
    ``E[tau ; tau > N]``.
    """
    bm._check_measure(trunc.mu)
    if trunc.start.payload != ():
        raise WalkInductionError("hitting entropy needs the truncation started at the identity")
    lower_q = sum((lv.integrate(lambda p: _phi_by_length(bm.k, len(p))) for lv in trunc.levels),
                  Fraction(0))
    lower = bm.value(lower_q)
    if trunc.tail == 0:
        return HittingEntropy(lower_q, lower, lower, Fraction(0), Fraction(0), trunc.N, bm.unit)
    chain = chain or build_chain(trunc.action, trunc.mu)
    over = overshoot_mean(chain, trunc.N)
    upper = lower + LogValue.log(1 / trunc.mu.min_weight()) * over
    return HittingEntropy(lower_q, lower, upper, trunc.tail, over, trunc.N, bm.unit)


def nearly_harmonic_residual(bm: BoundaryModel, g, mu: FinMeasure) -> Fraction:
    """``sum mu(g1) phi(g g1) - phi(g) - h_mu``; zero for the harmonic measure."""
    bm._check_measure(mu)
    g = bm._word(g)
    mean = sum((x * _phi_by_length(bm.k, len(free_mul(g, p))) for p, x in mu.weights.items()),
               Fraction(0))
    return mean - _phi_by_length(bm.k, len(g)) - furstenberg_entropy(bm, mu)


def telescoping_check(bm: BoundaryModel, mu: FinMeasure, action: CosetAction, N: int,
                      support_cap: int = DEFAULT_SUPPORT_CAP) -> list[dict]:
    """Both sides of ``E[phi(Z_{tau ^ n})] = h_mu E[tau ^ n]`` for ``n = 1..N``.

    Left: ``h_mu * sum_{j<n} P{tau > j}`` from the coset chain.  Right: the
    first-passage levels integrated against phi plus the survivor term
    ``R_n = E[phi(Z_n); tau > n]`` from the hitting DP.  ``R_n`` is also
    compared with ``n (-log min mu) P{tau > n}``.
    """
    bm._check_measure(mu)
    chain = build_chain(action, mu)
    trunc = first_passage(action, mu, N, support_cap, keep_history=True)
    h = furstenberg_entropy(bm, mu)
    phi = lambda p: _phi_by_length(bm.k, len(p))  # noqa: E731
    per_step = math.log(1 / mu.min_weight()) / math.log(bm.unit)
    rows = []
    tail_sum = Fraction(0)
    prev_tail = Fraction(1)
    hit_sum = Fraction(0)
    for n in range(1, N + 1):
        tail_sum += prev_tail
        hit_sum += trunc.levels[n - 1].integrate(phi)
        survivors = trunc.history[n - 1]
        R = survivors.integrate(phi)
        lhs = h * tail_sum
        rhs = hit_sum + R
        bound = n * per_step * float(survivors.mass)
        rows.append({"n": n, "lhs": lhs, "rhs": rhs, "theta_part": hit_sum, "R": R,
                     "R_bound": bound, "equal": lhs == rhs, "R_nonnegative": R >= 0,
                     "R_within_bound": float(R) <= bound + 1e-12})
        prev_tail = survivors.mass
    return rows


def phi_bound_check(bm: BoundaryModel, steps: Sequence, mu: FinMeasure,
                    guard: float = 1e-9) -> tuple[bool, LogValue]:
    """``phi(g_1 ... g_n) <= -sum log mu(g_i)``; returns (holds, exact slack)."""
    bm._check_measure(mu)
    product: Word = ()
    cost = LogValue.zero()
    for s in steps:
        p = bm._word(s)
        weight = mu.weights.get(p)
        if weight is None:
            raise NotInSupportError(f"{bm.group.format_payload(p)} is not in the support")
        cost = cost - LogValue.log(weight)
        product = free_mul(product, p)
    slack = cost - bm.value(_phi_by_length(bm.k, len(product)))
    return slack.nats >= -guard, slack


# --- harmonic functions ----------------------------------------------------------


def harmonic_residual(bm: BoundaryModel, f: Mapping, g, mu: FinMeasure) -> Fraction:
    """``sum mu(g1) h(g g1) - h(g)`` for the transform ``h`` of ``f``."""
    bm._check_measure(mu)
    f = bm.cylinder_function(f)
    g = bm._word(g)
    mean = sum((x * bm.transform(f, free_mul(g, p)) for p, x in mu.weights.items()), Fraction(0))
    return mean - bm.transform(f, g)


@dataclass(frozen=True)
class RestrictionCheck:
    """``h(gamma)`` against the hitting-measure average of ``h`` over the subgroup."""

    start: str
    value: Fraction
    truncated_mean: Fraction
    tail: Fraction
    sup_norm: Fraction
    envelope: Fraction

    @property
    def gap(self) -> Fraction:
        return abs(self.value - self.truncated_mean)

    @property
    def allowance(self) -> Fraction:
        return self.sup_norm * self.tail

    @property
    def holds(self) -> bool:
        return self.gap <= self.allowance

    @property
    def sup_preserved(self) -> bool:
        """``|h(g)|`` does not exceed the largest ``|h|`` on the hit points plus the tail charge."""
        return abs(self.value) <= self.envelope + self.allowance

    def to_json(self) -> dict:
        return {"start": self.start, "value": frac_str(self.value),
                "truncated_mean": frac_str(self.truncated_mean), "tail": frac_str(self.tail),
                "sup_norm": frac_str(self.sup_norm), "gap": frac_str(self.gap),
                "allowance": frac_str(self.allowance), "holds": self.holds,
                "sup_preserved": self.sup_preserved}


def restriction_check(bm: BoundaryModel, f: Mapping, g: GroupElement, action: CosetAction,
                      mu: FinMeasure, N: int,
                      support_cap: int = DEFAULT_SUPPORT_CAP) -> RestrictionCheck:
    """Compare ``h(g)`` with ``theta_{g, <= N}(h)``.

    For ``g`` in the subgroup this is the statement that ``h`` restricted to
    the subgroup is harmonic for the hitting measure; for any ``g`` it bounds
    ``|h(g)|`` by the values of ``h`` on the subgroup.
    """
    f = bm.cylinder_function(f)
    trunc = theta_from(g, action, mu, N, support_cap)
    values: dict = {}
    mean = Fraction(0)
    for lv in trunc.levels:
        for p, x in lv.weights.items():
            if p not in values:
                values[p] = bm.transform(f, p)
            mean += x * values[p]
    envelope = max((abs(v) for v in values.values()), default=Fraction(0))
    return RestrictionCheck(g.word, bm.transform(f, g), mean, trunc.tail, bm.sup_norm(f), envelope)


# --- finite quotients ------------------------------------------------------------


def quotient_phi(action: CosetAction, g: GroupElement,
                 nu: Sequence | None = None) -> LogValue:
    """``phi(g)`` on the coset space with measure ``nu`` (uniform by default).

    ``g`` moves the label ``x`` to ``x . g^-1``; ``phi(g)`` is the relative
    entropy ``sum nu(x) log(nu(x) / nu(x . g^-1))``.
    """
    m = action.m
    nu = [Fraction(1, m)] * m if nu is None else [Fraction(x) for x in nu]
    if len(nu) != m or sum(nu) != 1 or min(nu) <= 0:
        raise WalkInductionError("quotient measure must be a positive probability vector")
    perm = action.element_perm(action.model.inv_payload(g.payload))
    total = LogValue.zero()
    for x in range(m):
        total = total + (LogValue.log(nu[x]) - LogValue.log(nu[perm[x]])) * nu[x]
    return total


def quotient_furstenberg_entropy(action: CosetAction, mu: FinMeasure,
                                 nu: Sequence | None = None) -> LogValue:
    total = LogValue.zero()
    for g, x in mu.items():
        total = total + quotient_phi(action, g, nu) * x
    return total


def random_cylinder_function(bm: BoundaryModel, rng, radius: int, terms: int = 4,
                             max_numerator: int = 5) -> dict[Word, Fraction]:
    """A random rational combination of cylinder indicators of depth ``<= radius``."""
    words: list[Word] = [()]
    for d in range(1, radius + 1):
        words.extend(bm.cylinders(d))
    out: dict[Word, Fraction] = {}
    for _ in range(terms):
        w = words[rng.randrange(len(words))]
        c = Fraction(rng.randint(-max_numerator, max_numerator), rng.randint(1, max_numerator))
        out[w] = out.get(w, Fraction(0)) + c
    return {w: c for w, c in out.items() if c}


def ball_words(bm: BoundaryModel, radius: int) -> Iterable[Word]:
    for d in range(radius + 1):
        yield from bm.cylinders(d)


def random_word(bm: BoundaryModel, rng, length: int) -> Word:
    """A uniformly random reduced word of the given length."""
    w: list[int] = []
    letters = bm.group.letters()
    while len(w) < length:
        x = letters[rng.randrange(len(letters))]
        if not w or x != -w[-1]:
            w.append(x)
    return tuple(w)
