"""Exact rational combinations of logarithms of primes.

The log of a positive rational is an integer combination of log p over its
prime factors, so every entropy of a rational measure, every cocycle value
and every bound of the form ``-sum log mu(g)`` is an exact element of the
Q-span of ``{log p}``.  Distinct primes have Q-linearly independent logs, so
equality is decided exactly; order is decided on the float value.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
                 73, 79, 83, 89, 97)


@lru_cache(maxsize=1 << 16)
def factor(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorisation of a positive int as ``((p, e), ...)``."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out: dict[int, int] = {}
    for p in _SMALL_PRIMES:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
        if n == 1:
            break
    if n > 1:
        if n < 101 * 101:  # no prime factor <= 97 left, so n is prime
            out[n] = out.get(n, 0) + 1
        else:
            from sympy.ntheory import factorint

            for p, e in factorint(n).items():
                out[int(p)] = out.get(int(p), 0) + int(e)
    return tuple(sorted(out.items()))


def _fmt_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class LogValue:
    """An exact value ``sum_p c_p log p`` with rational ``c_p``."""

    __slots__ = ("_terms",)

    def __init__(self, terms: dict[int, Fraction] | None = None):
        self._terms = {p: Fraction(c) for p, c in (terms or {}).items() if c != 0}

    @classmethod
    def zero(cls) -> LogValue:
        return cls()

    @classmethod
    def log(cls, x) -> LogValue:
        """``log x`` for a positive rational ``x``."""
        x = Fraction(x)
        if x <= 0:
            raise ValueError(f"log of non-positive {x}")
        terms: dict[int, Fraction] = {}
        for p, e in factor(x.numerator):
            terms[p] = terms.get(p, 0) + e
        for p, e in factor(x.denominator):
            terms[p] = terms.get(p, 0) - e
        return cls(terms)

    @classmethod
    def of(cls, coefficient, base) -> LogValue:
        """``coefficient * log(base)``."""
        return cls.log(base) * Fraction(coefficient)

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    @property
    def nats(self) -> float:
        return math.fsum(float(c) * math.log(p) for p, c in self._terms.items())

    def __float__(self) -> float:
        return self.nats

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, base) -> Fraction | None:
        """``q`` with ``self == q * log(base)``, or None if no such rational exists."""
        unit = LogValue.log(base)
        if unit.is_zero():
            raise ValueError("log(1) is not a unit")
        if self.is_zero():
            return Fraction(0)
        if set(self._terms) != set(unit._terms):
            return None
        ratios = {self._terms[p] / unit._terms[p] for p in unit._terms}
        return ratios.pop() if len(ratios) == 1 else None

    def __add__(self, other: LogValue) -> LogValue:
        if not isinstance(other, LogValue):
            if other == 0:
                return self
            return NotImplemented
        terms = dict(self._terms)
        for p, c in other._terms.items():
            terms[p] = terms.get(p, 0) + c
        return LogValue(terms)

    __radd__ = __add__

    def __neg__(self) -> LogValue:
        return LogValue({p: -c for p, c in self._terms.items()})

    def __sub__(self, other: LogValue) -> LogValue:
        return self + (-other)

    def __mul__(self, k) -> LogValue:
        if not isinstance(k, (int, Rational)):
            return NotImplemented
        k = Fraction(k)
        return LogValue({p: c * k for p, c in self._terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, k) -> LogValue:
        return self * (1 / Fraction(k))

    def __eq__(self, other) -> bool:
        if isinstance(other, LogValue):
            return self._terms == other._terms
        if other == 0:
            return self.is_zero()
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def le(self, other, guard: float = 1e-12) -> bool:
        """Float comparison ``self <= other`` with an absolute guard."""
        if isinstance(other, LogValue):
            if self == other:
                return True
            diff = (other - self).nats
        else:
            diff = float(other) - self.nats
        return diff >= -guard

    def format(self, unit: int | None = None) -> str:
        if unit is not None:
            q = self.coefficient(unit)
            if q is not None:
                return f"{_fmt_fraction(q)} × log {unit}"
        if self.is_zero():
            return "0"
        parts = [f"{_fmt_fraction(c)} × log {p}" for p, c in sorted(self._terms.items())]
        return " + ".join(parts)

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"LogValue({self.format()})"

    def to_json(self, unit: int | None = None, digits: int = 12) -> dict:
        out = {"exact": self.format(unit),
               "terms": {str(p): _fmt_fraction(c) for p, c in sorted(self._terms.items())},
               "nats": round(self.nats, digits)}
        if unit is not None:
            q = self.coefficient(unit)
            out["unit"] = f"log {unit}"
            out["coefficient"] = None if q is None else _fmt_fraction(q)
        return out
