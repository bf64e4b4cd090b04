"""Finite-index subgroups encoded by a transitive right action on coset labels.

Label 0 is the trivial coset; the subgroup is its stabilizer, so membership
of ``g`` is ``coset_of(g) == 0`` and the index is the number of labels.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .errors import ConfigError, ModelMismatchError, TransitivityError
from .groups import (
    ALPHABET,
    FreeAbelianGroup,
    FreeGroup,
    GroupElement,
    GroupModel,
    PermutationGroup,
    invert_perm,
)

_CYCLE = re.compile(r"\(([^()]*)\)")


def parse_permutation(spec, degree: int) -> tuple[int, ...]:
    """Array notation ``[1, 0, 2]`` or 0-based cycle notation ``"(0 1)(2)"``."""
    if isinstance(spec, str):
        text = spec.strip()
        if _CYCLE.sub("", text).strip():
            raise ConfigError(f"cannot parse cycle notation {spec!r}")
        perm = list(range(degree))
        seen: set[int] = set()
        for body in _CYCLE.findall(text):
            pts = [int(t) for t in body.replace(",", " ").split()]
            for p in pts:
                if not 0 <= p < degree or p in seen:
                    raise ConfigError(f"bad point {p} in cycle notation {spec!r}")
                seen.add(p)
            for i, p in enumerate(pts):
                perm[p] = pts[(i + 1) % len(pts)]
        return tuple(perm)
    perm = tuple(int(x) for x in spec)
    if len(perm) != degree or sorted(perm) != list(range(degree)):
        raise ConfigError(f"{list(spec)} is not a permutation of 0..{degree - 1}")
    return perm


def _perm_power(perm: tuple[int, ...], n: int) -> tuple[int, ...]:
    if n < 0:
        perm, n = invert_perm(perm), -n
    result = tuple(range(len(perm)))
    base = perm
    while n:
        if n & 1:
            result = tuple(base[i] for i in result)
        base = tuple(base[i] for i in base)
        n >>= 1
    return result


@dataclass(frozen=True)
class CosetAction:
    """Right action of the generators on ``{0, ..., m-1}``.

    ``tables[i][c]`` is the label of ``c`` multiplied on the right by the
    (i+1)-th generator.  Inverse tables are derived, never supplied.
    """

    model: GroupModel
    tables: tuple[tuple[int, ...], ...]
    _inverse: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    _perm_cosets: dict = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self):
        tables = tuple(tuple(int(x) for x in t) for t in self.tables)
        object.__setattr__(self, "tables", tables)
        if len(tables) != self.model.ngens:
            raise ConfigError(
                f"action lists {len(tables)} generator tables, model has {self.model.ngens}")
        m = len(tables[0]) if tables else 0
        if m < 1:
            raise ConfigError("coset action needs at least one label")
        for t in tables:
            if len(t) != m or sorted(t) != list(range(m)):
                raise ConfigError(f"generator table {list(t)} is not a bijection on 0..{m - 1}")
        object.__setattr__(self, "_inverse", tuple(invert_perm(t) for t in tables))
        self._check_transitive()
        if isinstance(self.model, FreeAbelianGroup):
            self._check_commuting()
        elif isinstance(self.model, PermutationGroup):
            object.__setattr__(self, "_perm_cosets", self._check_homomorphism())

    @property
    def m(self) -> int:
        return len(self.tables[0])

    def _check_transitive(self) -> None:
        seen = {0}
        queue = deque([0])
        while queue:
            c = queue.popleft()
            for t in self.tables + self._inverse:
                d = t[c]
                if d not in seen:
                    seen.add(d)
                    queue.append(d)
        if len(seen) != self.m:
            missing = sorted(set(range(self.m)) - seen)
            raise TransitivityError(
                f"generators do not act transitively: labels {missing} unreachable from 0")

    def _check_commuting(self) -> None:
        for i, s in enumerate(self.tables):
            for t in self.tables[i + 1:]:
                if any(t[s[c]] != s[t[c]] for c in range(self.m)):
                    raise ConfigError("tables of an abelian model must commute")

    def _check_homomorphism(self) -> dict:
        # every relation of the finite group must act trivially on labels
        model = self.model
        action_of = {model.identity_payload: tuple(range(self.m))}
        for p, w in model.shortlex_words.items():
            if w:
                action_of[p] = self.letters_perm(w)
        for p, perm in action_of.items():
            for x in model.letters():
                q = model.mul_payload(p, model.letter_payload(x))
                step = self.letter_table(x)
                if action_of[q] != tuple(step[c] for c in perm):
                    raise ConfigError(
                        "coset tables do not define an action of the permutation group")
        return {p: perm[0] for p, perm in action_of.items()}

    def letter_table(self, letter: int) -> tuple[int, ...]:
        i = abs(letter) - 1
        return self.tables[i] if letter > 0 else self._inverse[i]

    def letters_perm(self, letters: Sequence[int]) -> tuple[int, ...]:
        perm = tuple(range(self.m))
        for x in letters:
            t = self.letter_table(x)
            perm = tuple(t[c] for c in perm)
        return perm

    def element_perm(self, payload) -> tuple[int, ...]:
        """Permutation of labels induced by right multiplication by ``payload``."""
        model = self.model
        if isinstance(model, FreeGroup):
            return self.letters_perm(payload)
        if isinstance(model, FreeAbelianGroup):
            perm = tuple(range(self.m))
            for i, a in enumerate(payload):
                if a:
                    step = _perm_power(self.tables[i], a)
                    perm = tuple(step[c] for c in perm)
            return perm
        return self.letters_perm(model.shortlex_words[tuple(payload)])

    def act(self, label: int, g: GroupElement) -> int:
        self._check_model(g)
        return self.element_perm(g.payload)[label]

    def coset_of(self, g: GroupElement) -> int:
        self._check_model(g)
        if isinstance(self.model, FreeGroup):
            c = 0
            for x in g.payload:
                c = self.letter_table(x)[c]
            return c
        if self._perm_cosets is not None:
            return self._perm_cosets[g.payload]
        return self.element_perm(g.payload)[0]

    def contains(self, g: GroupElement) -> bool:
        return self.coset_of(g) == 0

    def _check_model(self, g: GroupElement) -> None:
        if g.model != self.model:
            raise ModelMismatchError(f"element of {g.model} used with an action of {self.model}")

    def to_config(self) -> dict:
        return {"degree": self.m,
                "generators": {ALPHABET[i]: list(t) for i, t in enumerate(self.tables)}}


def index(action: CosetAction) -> int:
    return action.m


def coset_of(action: CosetAction, g: GroupElement) -> int:
    return action.coset_of(g)


def action_from_config(model: GroupModel, spec: dict) -> CosetAction:
    if not isinstance(spec, dict):
        raise ConfigError("action spec must be a mapping")
    extra = set(spec) - {"degree", "generators"}
    if extra:
        raise ConfigError(f"unknown keys in action spec: {sorted(extra)}")
    degree = int(spec["degree"])
    gens = spec["generators"]
    if isinstance(gens, dict):
        unknown = set(gens) - set(ALPHABET[: model.ngens])
        if unknown:
            raise ConfigError(f"action names non-generators {sorted(unknown)}")
        missing = [ALPHABET[i] for i in range(model.ngens) if ALPHABET[i] not in gens]
        if missing:
            raise ConfigError(f"action is missing tables for {missing}")
        gens = [gens[ALPHABET[i]] for i in range(model.ngens)]
    return CosetAction(model, tuple(parse_permutation(g, degree) for g in gens))


def trivial_action(model: GroupModel) -> CosetAction:
    """The action on a single label, i.e. the subgroup is the whole group."""
    return CosetAction(model, tuple((0,) for _ in range(model.ngens)))


def cyclic_action(model: GroupModel, m: int, shifts: Sequence[int] | None = None) -> CosetAction:
    """Each generator shifts labels by ``shifts[i]`` mod ``m`` (default +1)."""
    shifts = list(shifts) if shifts is not None else [1] * model.ngens
    return CosetAction(model, tuple(tuple((c + s) % m for c in range(m)) for s in shifts))
