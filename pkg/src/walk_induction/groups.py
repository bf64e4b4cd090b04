"""Group models with canonical normal forms.

Three families are supported, each with decidable, fast equality:

* ``FreeGroup(k)``: payload is the freely reduced word, a tuple of nonzero
  ints where ``i+1`` is the i-th generator and ``-(i+1)`` its inverse.
* ``FreeAbelianGroup(d)``: payload is the integer vector.
* ``PermutationGroup(degree, generators)``: payload is the image tuple of the
  permutation; products compose left to right, ``(p*q)[i] == q[p[i]]``.

Words are written over ``ALPHABET`` (capital letter = inverse).  The letter
``e`` is skipped so that ``"e"`` can always denote the identity.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator

from .errors import ConfigError, ModelMismatchError, UnsupportedOperationError

ALPHABET = "abcdfghijklmnopqrstuvwxyz"
IDENTITY_WORD = "e"

Payload = tuple


def letter_char(letter: int) -> str:
    ch = ALPHABET[abs(letter) - 1]
    return ch if letter > 0 else ch.upper()


def char_letter(ch: str, ngens: int) -> int:
    idx = ALPHABET.find(ch.lower())
    if idx < 0 or idx >= ngens:
        raise ConfigError(f"letter {ch!r} is not a generator of a {ngens}-generator model")
    return idx + 1 if ch.islower() else -(idx + 1)


def parse_letters(word: str, ngens: int) -> list[int]:
    word = word.strip()
    if word in ("", IDENTITY_WORD):
        return []
    return [char_letter(ch, ngens) for ch in word]


def free_reduce(letters: Iterable[int]) -> tuple[int, ...]:
    stack: list[int] = []
    for x in letters:
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


def free_mul(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    """Product of two reduced words; cancellation only happens at the seam."""
    i, j = len(p), 0
    nq = len(q)
    while i and j < nq and p[i - 1] == -q[j]:
        i -= 1
        j += 1
    return p[:i] + q[j:]


class GroupModel:
    """Interface shared by the concrete models (not meant to be instantiated)."""

    kind: str = ""
    word_based: bool = True

    @property
    def ngens(self) -> int:
        raise NotImplementedError

    @property
    def identity_payload(self) -> Payload:
        raise NotImplementedError

    def mul_payload(self, p: Payload, q: Payload) -> Payload:
        raise NotImplementedError

    def inv_payload(self, p: Payload) -> Payload:
        raise NotImplementedError

    def letter_payload(self, letter: int) -> Payload:
        raise NotImplementedError

    def length_payload(self, p: Payload) -> int:
        raise UnsupportedOperationError(f"word length is undefined for the {self.kind} model")

    def format_payload(self, p: Payload) -> str:
        raise NotImplementedError

    def is_canonical(self, p: Payload) -> bool:
        raise NotImplementedError

    # --- element-level API ------------------------------------------------

    def element(self, payload: Payload) -> GroupElement:
        return GroupElement(self, tuple(payload))

    @property
    def identity(self) -> GroupElement:
        return GroupElement(self, self.identity_payload)

    def letters(self) -> list[int]:
        """Generators and their formal inverses, in alphabet order a, A, b, B, ..."""
        out = []
        for i in range(1, self.ngens + 1):
            out.extend((i, -i))
        return out

    def letter(self, letter: int) -> GroupElement:
        return GroupElement(self, self.letter_payload(letter))

    def word_payload(self, letters: Iterable[int]) -> Payload:
        p = self.identity_payload
        for x in letters:
            p = self.mul_payload(p, self.letter_payload(x))
        return p

    def parse(self, word: str) -> GroupElement:
        return GroupElement(self, self.word_payload(parse_letters(word, self.ngens)))

    def to_config(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class FreeGroup(GroupModel):
    rank: int
    kind = "free"

    def __post_init__(self):
        if not 1 <= self.rank <= len(ALPHABET):
            raise ConfigError(f"free group rank must be in 1..{len(ALPHABET)}, got {self.rank}")

    @property
    def ngens(self) -> int:
        return self.rank

    @property
    def identity_payload(self) -> Payload:
        return ()

    def mul_payload(self, p, q):
        return free_mul(p, q)

    def inv_payload(self, p):
        return tuple(-x for x in reversed(p))

    def letter_payload(self, letter):
        return (letter,)

    def word_payload(self, letters):
        return free_reduce(letters)

    def length_payload(self, p):
        return len(p)

    def format_payload(self, p):
        return "".join(letter_char(x) for x in p) if p else IDENTITY_WORD

    def is_canonical(self, p):
        return all(x != 0 and abs(x) <= self.rank for x in p) and free_reduce(p) == tuple(p)

    def to_config(self):
        return {"kind": "free", "rank": self.rank}

    def ball(self, radius: int) -> Iterator[GroupElement]:
        """All reduced words of length <= radius, shortest first."""
        layer = [()]
        for _ in range(radius + 1):
            nxt = []
            for w in layer:
                yield GroupElement(self, w)
                for x in self.letters():
                    if not w or w[-1] != -x:
                        nxt.append(w + (x,))
            layer = nxt

    def sphere(self, radius: int) -> list[tuple[int, ...]]:
        layer = [()]
        for _ in range(radius):
            layer = [w + (x,) for w in layer for x in self.letters() if not w or w[-1] != -x]
        return layer


@dataclass(frozen=True)
class FreeAbelianGroup(GroupModel):
    rank: int
    kind = "abelian"

    def __post_init__(self):
        if not 1 <= self.rank <= len(ALPHABET):
            raise ConfigError(f"abelian rank must be in 1..{len(ALPHABET)}, got {self.rank}")

    @property
    def ngens(self) -> int:
        return self.rank

    @property
    def identity_payload(self) -> Payload:
        return (0,) * self.rank

    def mul_payload(self, p, q):
        return tuple(a + b for a, b in zip(p, q))

    def inv_payload(self, p):
        return tuple(-a for a in p)

    def letter_payload(self, letter):
        v = [0] * self.rank
        v[abs(letter) - 1] = 1 if letter > 0 else -1
        return tuple(v)

    def length_payload(self, p):
        return sum(abs(a) for a in p)

    def format_payload(self, p):
        parts = []
        for i, a in enumerate(p):
            parts.append(letter_char(i + 1 if a > 0 else -(i + 1)) * abs(a))
        return "".join(parts) or IDENTITY_WORD

    def is_canonical(self, p):
        return len(p) == self.rank and all(isinstance(a, int) for a in p)

    def to_config(self):
        return {"kind": "abelian", "rank": self.rank}


def _check_perm(p: tuple[int, ...], degree: int) -> None:
    if len(p) != degree or sorted(p) != list(range(degree)):
        raise ConfigError(f"{list(p)} is not a permutation of 0..{degree - 1}")


def invert_perm(p: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


@dataclass(frozen=True)
class PermutationGroup(GroupModel):
    """Finite group given by its faithful permutation image."""

    degree: int
    generators: tuple[tuple[int, ...], ...]
    max_order: int = field(default=10**6, compare=False, repr=False)
    kind = "permutation"
    word_based = False

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(tuple(g) for g in self.generators))
        if not self.generators:
            raise ConfigError("a permutation group needs at least one generator")
        for g in self.generators:
            _check_perm(g, self.degree)

    @property
    def ngens(self) -> int:
        return len(self.generators)

    @property
    def identity_payload(self) -> Payload:
        return tuple(range(self.degree))

    def mul_payload(self, p, q):
        return tuple(q[i] for i in p)

    def inv_payload(self, p):
        return invert_perm(p)

    def letter_payload(self, letter):
        g = self.generators[abs(letter) - 1]
        return g if letter > 0 else invert_perm(g)

    @cached_property
    def shortlex_words(self) -> dict[Payload, tuple[int, ...]]:
        """BFS from the identity: each element mapped to its first shortest word."""
        e = self.identity_payload
        words = {e: ()}
        queue = deque([e])
        while queue:
            p = queue.popleft()
            for x in self.letters():
                q = self.mul_payload(p, self.letter_payload(x))
                if q not in words:
                    words[q] = words[p] + (x,)
                    if len(words) > self.max_order:
                        raise ConfigError(f"permutation group order exceeds {self.max_order}")
                    queue.append(q)
        return words

    @property
    def order(self) -> int:
        return len(self.shortlex_words)

    def format_payload(self, p):
        w = self.shortlex_words[tuple(p)]
        return "".join(letter_char(x) for x in w) if w else IDENTITY_WORD

    def is_canonical(self, p):
        return tuple(p) in self.shortlex_words

    def to_config(self):
        return {"kind": "permutation", "degree": self.degree,
                "generators": [list(g) for g in self.generators]}


@dataclass(frozen=True, slots=True)
class GroupElement:
    model: GroupModel
    payload: Payload

    def __mul__(self, other: GroupElement) -> GroupElement:
        return multiply(self, other)

    def __invert__(self) -> GroupElement:
        return invert(self)

    def __repr__(self) -> str:
        return f"<{self.model.format_payload(self.payload)}>"

    def __str__(self) -> str:
        return self.model.format_payload(self.payload)

    @property
    def word(self) -> str:
        return self.model.format_payload(self.payload)

    def __len__(self) -> int:
        return self.model.length_payload(self.payload)


def multiply(a: GroupElement, b: GroupElement) -> GroupElement:
    if a.model != b.model:
        raise ModelMismatchError(f"cannot multiply elements of {a.model} and {b.model}")
    return GroupElement(a.model, a.model.mul_payload(a.payload, b.payload))


def invert(a: GroupElement) -> GroupElement:
    return GroupElement(a.model, a.model.inv_payload(a.payload))


def word_length(a: GroupElement) -> int:
    return a.model.length_payload(a.payload)


def model_from_config(spec: dict) -> GroupModel:
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError("group spec must be a mapping with a 'kind' key")
    kind = spec["kind"]
    allowed = {"free": {"kind", "rank"}, "abelian": {"kind", "rank"},
               "permutation": {"kind", "degree", "generators"}}
    if kind not in allowed:
        raise ConfigError(f"unknown group kind {kind!r}")
    extra = set(spec) - allowed[kind]
    if extra:
        raise ConfigError(f"unknown keys in group spec: {sorted(extra)}")
    if kind == "free":
        return FreeGroup(int(spec["rank"]))
    if kind == "abelian":
        return FreeAbelianGroup(int(spec["rank"]))
    from .cosets import parse_permutation

    degree = int(spec["degree"])
    gens = tuple(parse_permutation(g, degree) for g in spec["generators"])
    return PermutationGroup(degree, gens)
