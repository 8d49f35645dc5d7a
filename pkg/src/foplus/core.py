"""Ordered alphabets and words.

Letters live in a finite partially ordered set; the order extends to
equal-length words componentwise.  Powerset alphabets (letters are subsets of
a predicate set, ordered by inclusion) are the special case used throughout
the higher-level modules.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence


class AlphabetError(ValueError):
    """Malformed alphabet: unknown letters, duplicate names, or cyclic order."""


@dataclass(frozen=True)
class OrderedAlphabet:
    """A finite set of named letters with a partial order.

    The order is stored reflexively-transitively closed.  Construction from
    generator pairs closes the relation and rejects cycles (which would break
    antisymmetry).
    """

    letters: tuple[str, ...]
    order: frozenset[tuple[int, int]]  # pairs (i, j) meaning letters[i] <= letters[j]
    predicates: tuple[str, ...] | None = None  # set for powerset alphabets
    _index: dict[str, int] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        self._index.update({name: i for i, name in enumerate(self.letters)})

    @staticmethod
    def from_pairs(letters: Sequence[str], pairs: Iterable[tuple[str, str]],
                   predicates: Sequence[str] | None = None) -> "OrderedAlphabet":
        if len(set(letters)) != len(letters):
            raise AlphabetError("duplicate letter names")
        index = {name: i for i, name in enumerate(letters)}
        n = len(letters)
        leq = [[False] * n for _ in range(n)]
        for i in range(n):
            leq[i][i] = True
        for a, b in pairs:
            if a not in index or b not in index:
                raise AlphabetError(f"order pair ({a!r}, {b!r}) references unknown letter")
            leq[index[a]][index[b]] = True
        # Floyd-Warshall style transitive closure; n stays small.
        for k in range(n):
            for i in range(n):
                if leq[i][k]:
                    row_k = leq[k]
                    row_i = leq[i]
                    for j in range(n):
                        if row_k[j]:
                            row_i[j] = True
        for i in range(n):
            for j in range(n):
                if i != j and leq[i][j] and leq[j][i]:
                    raise AlphabetError(
                        f"order cycle through {letters[i]!r} and {letters[j]!r}")
        closed = frozenset((i, j) for i in range(n) for j in range(n) if leq[i][j])
        return OrderedAlphabet(tuple(letters), closed,
                               tuple(predicates) if predicates is not None else None)

    def __len__(self) -> int:
        return len(self.letters)

    def index(self, letter: str) -> int:
        try:
            return self._index[letter]
        except KeyError:
            raise AlphabetError(f"unknown letter {letter!r}") from None

    def __contains__(self, letter: str) -> bool:
        return letter in self._index

    def leq(self, a: str, b: str) -> bool:
        """a <=_A b on letter names."""
        return (self.index(a), self.index(b)) in self.order

    def leq_idx(self, i: int, j: int) -> bool:
        return (i, j) in self.order

    def upset(self, a: str) -> frozenset[str]:
        """All letters b with a <=_A b (includes a itself)."""
        i = self.index(a)
        return frozenset(self.letters[j] for j in self.upset_idx(i))

    def upset_idx(self, i: int) -> frozenset[int]:
        return frozenset(j for j in range(len(self.letters)) if (i, j) in self.order)

    def strict_pairs(self) -> frozenset[tuple[int, int]]:
        return frozenset((i, j) for i, j in self.order if i != j)

    def is_trivial(self) -> bool:
        """True if no two distinct letters are comparable."""
        return not self.strict_pairs()

    # Powerset helpers -----------------------------------------------------

    def letter_predicates(self, i: int) -> frozenset[str]:
        """The predicate set of powerset letter i."""
        if self.predicates is None:
            raise AlphabetError("not a powerset alphabet")
        name = self.letters[i]
        body = name[1:-1]
        return frozenset(body.split(",")) if body else frozenset()

    def letter_has_predicate(self, i: int, pred: str) -> bool:
        return pred in self.letter_predicates(i)

    def letter_of_predicates(self, preds: Iterable[str]) -> int:
        return self.index(powerset_letter_name(preds))

    # Serialization --------------------------------------------------------

    def to_json(self) -> dict:
        if self.predicates is not None:
            return {"powerset_of": list(self.predicates)}
        return {
            "letters": list(self.letters),
            "order": sorted([self.letters[i], self.letters[j]]
                            for i, j in self.strict_pairs()),
        }

    @staticmethod
    def from_json(data: dict) -> "OrderedAlphabet":
        if "powerset_of" in data:
            return make_powerset_alphabet(data["powerset_of"])
        return OrderedAlphabet.from_pairs(data["letters"],
                                          [tuple(p) for p in data.get("order", [])])


def powerset_letter_name(preds: Iterable[str]) -> str:
    return "{" + ",".join(sorted(preds)) + "}"


def make_powerset_alphabet(predicates: Sequence[str]) -> OrderedAlphabet:
    """Alphabet whose letters are all subsets of `predicates`, ordered by inclusion."""
    if len(set(predicates)) != len(predicates):
        raise AlphabetError("duplicate predicate names")
    preds = sorted(predicates)
    subsets = []
    for k in range(len(preds) + 1):
        for combo in combinations(preds, k):
            subsets.append(frozenset(combo))
    letters = [powerset_letter_name(s) for s in subsets]
    pairs = [(powerset_letter_name(s), powerset_letter_name(t))
             for s in subsets for t in subsets if s < t]
    return OrderedAlphabet.from_pairs(letters, pairs, predicates=preds)


@dataclass(frozen=True)
class Word:
    """A word over an OrderedAlphabet, stored as letter indices."""

    alphabet: OrderedAlphabet
    indices: tuple[int, ...]

    def __post_init__(self):
        for i in self.indices:
            if not 0 <= i < len(self.alphabet):
                raise AlphabetError(f"letter index {i} out of range")

    @staticmethod
    def from_letters(alphabet: OrderedAlphabet, letters: Sequence[str]) -> "Word":
        return Word(alphabet, tuple(alphabet.index(a) for a in letters))

    def __len__(self) -> int:
        return len(self.indices)

    def __getitem__(self, i: int) -> int:
        return self.indices[i]

    def letter(self, i: int) -> str:
        return self.alphabet.letters[self.indices[i]]

    def letters_list(self) -> list[str]:
        return [self.alphabet.letters[i] for i in self.indices]

    def __str__(self) -> str:
        return "".join(self.letters_list())

    def concat(self, other: "Word") -> "Word":
        if other.alphabet is not self.alphabet:
            raise AlphabetError("alphabet mismatch")
        return Word(self.alphabet, self.indices + other.indices)

    def slice(self, i: int, j: int) -> "Word":
        """Infix from position i to j inclusive."""
        return Word(self.alphabet, self.indices[i:j + 1])

    def to_json(self) -> list[str]:
        return self.letters_list()

    @staticmethod
    def from_json(alphabet: OrderedAlphabet, data: list[str]) -> "Word":
        return Word.from_letters(alphabet, data)


def leq_word(u: Word, v: Word) -> bool:
    """Componentwise order: |u| = |v| and u[i] <=_A v[i] everywhere."""
    if u.alphabet is not v.alphabet and u.alphabet != v.alphabet:
        raise AlphabetError("alphabet mismatch")
    if len(u) != len(v):
        return False
    order = u.alphabet.order
    return all((a, b) in order for a, b in zip(u.indices, v.indices))


def load_alphabet(path: str) -> OrderedAlphabet:
    with open(path) as f:
        return OrderedAlphabet.from_json(json.load(f))


def load_word(path: str, alphabet: OrderedAlphabet) -> Word:
    with open(path) as f:
        return Word.from_json(alphabet, json.load(f))
