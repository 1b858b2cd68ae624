"""Patterns, blocks, complete prefix codes, and the truncated tree metric."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from . import words as W
from .errors import (
    ContainsEmptyWord,
    Incomplete,
    NotPrefixFree,
    SchemaError,
    SupportTooShallow,
    WordOutsideSupport,
)


@dataclass(frozen=True)
class Pattern:
    """A labeling of a finite prefix-closed set of words.

    ``labels`` maps direction-words to symbol names; the support is the key
    set.  Instances are immutable after validation.
    """

    arity: int
    labels: Mapping[str, str]
    _support: tuple[str, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.arity < 2:
            raise SchemaError("arity must be at least 2")
        if not self.labels:
            raise SchemaError("a pattern must label at least the root")
        support = set(self.labels)
        for w in support:
            W.validate_word(w, self.arity)
        if not W.is_prefix_closed(support):
            raise SchemaError("pattern support is not prefix-closed")
        object.__setattr__(self, "labels", dict(self.labels))
        object.__setattr__(self, "_support", tuple(W.sort_words(support)))

    @property
    def support(self) -> tuple[str, ...]:
        return self._support

    @property
    def height(self) -> int:
        """1 + depth of the deepest support word."""
        return 1 + max(len(w) for w in self._support)

    def __getitem__(self, word: str) -> str:
        return self.labels[word]

    def __contains__(self, word: str) -> bool:
        return word in self.labels

    def __hash__(self):
        return hash((self.arity, self._support, tuple(self.labels[w] for w in self._support)))

    def __eq__(self, other):
        return (
            isinstance(other, Pattern)
            and self.arity == other.arity
            and dict(self.labels) == dict(other.labels)
        )

    def is_block(self) -> bool:
        """True when the support is exactly Sigma_{n-1} for some n >= 1."""
        n = self.height
        return len(self._support) == _full_support_size(self.arity, n)

    def restrict(self, support: Iterable[str]) -> "Pattern":
        sub = {w: self.labels[w] for w in support}
        return Pattern(self.arity, sub)

    def to_document(self) -> dict:
        return {
            "arity": self.arity,
            "labels": {w: self.labels[w] for w in self._support},
        }

    def __str__(self):
        body = ",".join(self.labels[w] for w in self._support)
        return f"({body})"


def _full_support_size(d: int, n: int) -> int:
    return (d**n - 1) // (d - 1)


def block_from_levels(arity: int, levels: Iterable[Iterable[str]]) -> Pattern:
    """Build an n-block from its breadth-first level rows.

    Row k must hold arity**k symbols in lexicographic word order.
    """
    labels: dict[str, str] = {}
    for k, row in enumerate(levels):
        row = list(row)
        expected = arity**k
        if len(row) != expected:
            raise SchemaError(f"level {k} must hold {expected} symbols, got {len(row)}")
        for w, sym in zip(W.words_of_length(arity, k), row):
            labels[w] = sym
    return Pattern(arity, labels)


def block_levels(block: Pattern) -> list[tuple[str, ...]]:
    """Inverse of :func:`block_from_levels`; requires a genuine block."""
    if not block.is_block():
        raise SchemaError("pattern is not a block")
    return [
        tuple(block[w] for w in W.words_of_length(block.arity, k))
        for k in range(block.height)
    ]


def leaves_of(u: Pattern) -> set[str]:
    """Support words with no child in the support."""
    support = set(u.support)
    return {w for w in support if not any(c in support for c in W.children(w, u.arity))}


def subtree_at(u: Pattern, w: str) -> Pattern:
    """The pattern rooted at w: x -> u[wx] over all wx in the support."""
    if w not in u:
        raise WordOutsideSupport(f"{w!r} is outside the support")
    sub = {x[len(w):]: lbl for x, lbl in u.labels.items() if x.startswith(w)}
    return Pattern(u.arity, sub)


@dataclass(frozen=True)
class TruncatedDistance:
    """2**-n with a flag marking "no disagreement found within the depth".

    When ``is_bound`` is set, the true distance is at most the stated value;
    finite truncations can never certify exact equality of infinite trees.
    """

    value: Fraction
    is_bound: bool

    def __str__(self):
        prefix = "<=" if self.is_bound else ""
        return f"{prefix}{self.value}"


def truncated_distance(t1: Pattern, t2: Pattern, depth: int) -> TruncatedDistance:
    """Least-disagreement metric restricted to words of length <= depth."""
    d = t1.arity
    needed = set(W.words_up_to(d, depth))
    if not needed <= set(t1.support) or not needed <= set(t2.support):
        raise SupportTooShallow(f"both patterns must contain all words of length <= {depth}")
    for n in range(depth + 1):
        for w in W.words_of_length(d, n):
            if t1[w] != t2[w]:
                return TruncatedDistance(Fraction(1, 2**n), is_bound=False)
    return TruncatedDistance(Fraction(1, 2 ** (depth + 1)), is_bound=True)


@dataclass(frozen=True)
class CompletePrefixCode:
    """A finite antichain of nonempty words whose d-ary tree is full."""

    arity: int
    elements: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(W.sort_words(self.elements)))

    @property
    def length(self) -> int:
        """|P| = length of the longest word."""
        return max(len(x) for x in self.elements)

    def interior(self) -> list[str]:
        """Proper prefixes of the code words (the root included), canonical order."""
        interior: set[str] = set()
        for x in self.elements:
            interior.update(W.proper_prefixes(x))
        return W.sort_words(interior)

    def to_document(self) -> dict:
        return {"arity": self.arity, "code": list(self.elements)}

    def __str__(self):
        return "{" + ",".join(self.elements) + "}"


def uniform_code(d: int, k: int) -> CompletePrefixCode:
    """The code Sigma^k of all words of length k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return CompletePrefixCode(d, tuple(W.words_of_length(d, k)))


def validate_cpc(code_words: Iterable[str], arity: int) -> CompletePrefixCode:
    """Validate prefix-freeness and completeness.

    Completeness is checked twice: by the Kraft equality
    sum(d**-|x|) == 1 and by a direct cover scan of all words of length |P|;
    the two tests must agree.
    """
    elems = W.sort_words(set(code_words))
    if not elems:
        raise Incomplete("a complete prefix code must be nonempty")
    for x in elems:
        if x == W.EPSILON:
            raise ContainsEmptyWord("the empty word may not appear in a prefix code")
        W.validate_word(x, arity)
    for i, x in enumerate(elems):
        for y in elems[i + 1:]:
            if W.is_prefix(x, y):
                raise NotPrefixFree(f"{x!r} is a prefix of {y!r}")

    kraft = sum(Fraction(1, arity ** len(x)) for x in elems)
    length = max(len(x) for x in elems)
    covered = all(
        any(W.is_prefix(x, w) for x in elems) for w in W.words_of_length(arity, length)
    )
    if (kraft == 1) != covered:
        raise AssertionError("Kraft equality and the cover scan disagree")
    if kraft < 1:
        raise Incomplete(f"Kraft sum {kraft} < 1: some length-{length} word is uncovered")
    if kraft > 1:
        # unreachable for a prefix-free set, kept as a guard
        raise NotPrefixFree(f"Kraft sum {kraft} > 1")
    return CompletePrefixCode(arity, tuple(elems))


# ---------------------------------------------------------------------------
# JSON document format


def pattern_from_document(doc: dict) -> Pattern:
    if not isinstance(doc, dict) or "labels" not in doc:
        raise SchemaError("pattern document must carry a 'labels' object")
    arity = doc.get("arity", 2)
    labels = doc["labels"]
    if not isinstance(labels, dict):
        raise SchemaError("'labels' must map direction-words to symbols")
    try:
        return Pattern(int(arity), {str(k): str(v) for k, v in labels.items()})
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc


def cpc_from_document(doc: dict) -> CompletePrefixCode:
    if not isinstance(doc, dict) or "code" not in doc:
        raise SchemaError("code document must carry a 'code' array")
    arity = int(doc.get("arity", 2))
    return validate_cpc([str(x) for x in doc["code"]], arity)


def dumps_canonical(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"
