"""The projected chain on coset labels, exact return times and avoidance tails."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cosets import CosetAction
from .errors import ModelMismatchError, NotInSupportError, ReducibleChainError, WalkInductionError
from .groups import GroupElement
from .measures import FinMeasure, projected_generation_check

Matrix = tuple[tuple[Fraction, ...], ...]


def frac_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def solve_rational(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> list[Fraction]:
    """Gauss-Jordan elimination over Q."""
    n = len(a)
    rows = [list(map(Fraction, row)) + [Fraction(bi)] for row, bi in zip(a, b)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if pivot is None:
            raise WalkInductionError("singular system in exact solve")
        rows[col], rows[pivot] = rows[pivot], rows[col]
        pr = rows[col]
        inv = 1 / pr[col]
        for j in range(col, n + 1):
            pr[j] *= inv
        for r in range(n):
            if r != col and rows[r][col] != 0:
                f = rows[r][col]
                row = rows[r]
                for j in range(col, n + 1):
                    row[j] -= f * pr[j]
    return [rows[i][n] for i in range(n)]


@dataclass(frozen=True)
class CosetChain:
    """Transition matrix ``P[i][j] = sum{mu(g) : i.g = j}`` on coset labels."""

    action: CosetAction
    mu: FinMeasure
    P: Matrix

    @property
    def m(self) -> int:
        return len(self.P)

    @property
    def Q(self) -> Matrix:
        """Avoidance block: P restricted to labels != 0."""
        return tuple(row[1:] for row in self.P[1:])

    @property
    def r(self) -> tuple[Fraction, ...]:
        """Entry vector: first step from the trivial coset into labels != 0."""
        return self.P[0][1:]

    @property
    def s(self) -> tuple[Fraction, ...]:
        """Absorption vector: one-step probabilities of reaching label 0."""
        return tuple(row[0] for row in self.P[1:])

    def row_sums(self) -> list[Fraction]:
        return [sum(row, Fraction(0)) for row in self.P]

    def column_sums(self) -> list[Fraction]:
        return [sum((row[j] for row in self.P), Fraction(0)) for j in range(self.m)]

    def is_irreducible(self) -> bool:
        return projected_generation_check(self.mu, self.action)

    def uniform_is_stationary(self) -> bool:
        u = Fraction(1, self.m)
        return all(sum((u * row[j] for row in self.P), Fraction(0)) == u for j in range(self.m))

    def certificates(self) -> dict[str, bool]:
        return {
            "row_sums_one": all(x == 1 for x in self.row_sums()),
            "column_sums_one": all(x == 1 for x in self.column_sums()),
            "irreducible": self.is_irreducible(),
            "uniform_stationary": self.uniform_is_stationary(),
        }

    def step(self, v: Sequence[Fraction], kill_zero: bool = True) -> list[Fraction]:
        """Row vector times P, optionally discarding mass that lands on label 0."""
        out = [Fraction(0)] * self.m
        for i, vi in enumerate(v):
            if vi:
                for j, pij in enumerate(self.P[i]):
                    if pij:
                        out[j] += vi * pij
        if kill_zero:
            out[0] = Fraction(0)
        return out

    def to_json(self) -> dict:
        mat = lambda rows: [[frac_str(x) for x in row] for row in rows]  # noqa: E731
        return {"m": self.m, "P": mat(self.P), "Q": mat(self.Q),
                "r": [frac_str(x) for x in self.r], "s": [frac_str(x) for x in self.s]}


def transition_matrix(action: CosetAction, mu: FinMeasure) -> Matrix:
    if action.model != mu.model:
        raise ModelMismatchError("measure and action live on different models")
    m = action.m
    P = [[Fraction(0)] * m for _ in range(m)]
    for p, x in mu.weights.items():
        perm = action.element_perm(p)
        for i in range(m):
            P[i][perm[i]] += x
    return tuple(tuple(row) for row in P)


def build_chain(action: CosetAction, mu: FinMeasure) -> CosetChain:
    if not mu.is_probability:
        raise WalkInductionError(f"step measure has mass {mu.mass}, expected 1")
    if not projected_generation_check(mu, action):
        raise ReducibleChainError(
            "support of the measure does not act irreducibly on the coset labels")
    return CosetChain(action, mu, transition_matrix(action, mu))


def hitting_times_to_zero(chain: CosetChain) -> list[Fraction]:
    """Expected steps to reach label 0 from each label != 0: ``(I-Q) x = 1``."""
    Q = chain.Q
    k = len(Q)
    if k == 0:
        return []
    a = [[(1 if i == j else 0) - Q[i][j] for j in range(k)] for i in range(k)]
    return solve_rational(a, [Fraction(1)] * k)


def expected_return_time(chain: CosetChain) -> Fraction:
    x = hitting_times_to_zero(chain)
    return 1 + sum((ri * xi for ri, xi in zip(chain.r, x)), Fraction(0))


def avoidance_tails(chain: CosetChain, n_max: int) -> list[Fraction]:
    """``[P{tau > n} for n in 1..n_max]``."""
    v = [Fraction(0)] * chain.m
    v[0] = Fraction(1)
    out = []
    for _ in range(n_max):
        v = chain.step(v)
        out.append(sum(v, Fraction(0)))
    return out


def avoidance_tail(chain: CosetChain, n: int) -> Fraction:
    if n < 0:
        raise ValueError("n must be >= 0")
    return Fraction(1) if n == 0 else avoidance_tails(chain, n)[-1]


def return_time_distribution(chain: CosetChain, n_max: int) -> list[Fraction]:
    """``[P{tau = n} for n in 1..n_max]``."""
    tails = [Fraction(1)] + avoidance_tails(chain, n_max)
    return [tails[i] - tails[i + 1] for i in range(n_max)]


def tail_sum_from(chain: CosetChain, n: int) -> Fraction:
    """``sum_{j >= n} P{tau > j}`` exactly, for ``n >= 1``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    v = [Fraction(0)] * chain.m
    v[0] = Fraction(1)
    for _ in range(n):
        v = chain.step(v)
    x = hitting_times_to_zero(chain)
    # each surviving label i contributes its expected remaining steps before absorption
    return sum((vi * xi for vi, xi in zip(v[1:], x)), Fraction(0))


def overshoot_mean(chain: CosetChain, n: int) -> Fraction:
    """``E[tau ; tau > n] = n P{tau > n} + sum_{j >= n} P{tau > j}``."""
    if n == 0:
        return expected_return_time(chain)
    return n * avoidance_tail(chain, n) + tail_sum_from(chain, n)


@dataclass(frozen=True)
class RateCertificate:
    """``P{tau > n} <= exp(-C n)`` for every ``n >= n0``.

    Derived from the first window ``w`` with ``rho = ||Q^w 1||_inf < 1``:
    ``P{tau > n} <= rho^floor((n-1)/w) <= exp(-C0 (n - w))`` with
    ``C0 = -log(rho)/w``; taking ``n0 = 2w`` and ``C = C0/2`` removes the
    prefactor.  ``C`` is ``inf`` when the tail vanishes after one window.
    """

    C: float
    n0: int
    window: int
    rho: Fraction
    checked_upto: int
    holds: bool

    def bound(self, n: int) -> float:
        return 0.0 if math.isinf(self.C) and n > 0 else math.exp(-self.C * n)

    def half_split_bound(self, n: int) -> float:
        """``exp(-C (n-1)/2)``, the pinned-step bound."""
        if n <= 1:
            return 1.0
        return 0.0 if math.isinf(self.C) else math.exp(-self.C * (n - 1) / 2)

    def to_json(self) -> dict:
        return {"C": None if math.isinf(self.C) else round(self.C, 12),
                "C_infinite": math.isinf(self.C), "n0": self.n0, "window": self.window,
                "rho": frac_str(self.rho), "checked_upto": self.checked_upto,
                "holds": self.holds}


def _tail_le(tail: Fraction, log_bound: float, guard: float = 1e-12) -> bool:
    if tail == 0:
        return True
    if math.isinf(log_bound):
        return False
    return math.log(tail) <= log_bound + guard


def tail_rate_certificate(chain: CosetChain, n_max: int = 50) -> RateCertificate:
    m = chain.m
    if m == 1:
        return RateCertificate(math.inf, 1, 1, Fraction(0), n_max, True)
    Q = chain.Q
    v = [Fraction(1)] * (m - 1)
    rho = None
    window = 0
    for w in range(1, m + 1):
        v = [sum((Q[i][j] * v[j] for j in range(m - 1)), Fraction(0)) for i in range(m - 1)]
        if max(v) < 1:
            rho, window = max(v), w
            break
    if rho is None:
        raise ReducibleChainError("label 0 is not reachable from every label")
    C = math.inf if rho == 0 else -math.log(rho) / window / 2
    n0 = 2 * window
    tails = avoidance_tails(chain, n_max)
    holds = all(_tail_le(tails[n - 1], -C * n) for n in range(n0, n_max + 1))
    return RateCertificate(C, n0, window, rho, n_max, holds)


def conditional_avoidance(chain: CosetChain, n: int, k: int, g: GroupElement) -> Fraction:
    """``P{tau > n | X_k = g}``: avoid for k-1 steps, force step g, avoid n-k more."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    if g.model != chain.mu.model:
        raise ModelMismatchError("pinned step lives on a different model")
    if g not in chain.mu:
        raise NotInSupportError(f"{g.word} is not in the support of the step measure")
    v = [Fraction(0)] * chain.m
    v[0] = Fraction(1)
    for _ in range(k - 1):
        v = chain.step(v)
    perm = chain.action.element_perm(g.payload)
    pinned = [Fraction(0)] * chain.m
    for i, vi in enumerate(v):
        if vi and perm[i] != 0:
            pinned[perm[i]] += vi
    v = pinned
    for _ in range(n - k):
        v = chain.step(v)
    return sum(v, Fraction(0))


def conditional_avoidance_grid(chain: CosetChain, cert: RateCertificate, n_max: int = 20,
                               guard: float = 1e-12) -> list[dict]:
    """Every (n, k, g) with ``k <= n <= n_max`` checked against the half-split bound."""
    rows = []
    for g in chain.mu.support():
        perm = chain.action.element_perm(g.payload)
        for k in range(1, n_max + 1):
            # reuse the prefix: v after k-1 avoidance steps, then the pinned step
            v = [Fraction(0)] * chain.m
            v[0] = Fraction(1)
            for _ in range(k - 1):
                v = chain.step(v)
            pinned = [Fraction(0)] * chain.m
            for i, vi in enumerate(v):
                if vi and perm[i] != 0:
                    pinned[perm[i]] += vi
            v = pinned
            for n in range(k, n_max + 1):
                if n > k:
                    v = chain.step(v)
                p = sum(v, Fraction(0))
                bound = cert.half_split_bound(n)
                rows.append({"n": n, "k": k, "g": g.word, "probability": p,
                             "bound": bound, "ok": float(p) <= bound + guard})
    return rows
