"""Words over the direction set {0, ..., d-1}.

Words are plain strings of digit characters; the empty string is the root.
Canonical order everywhere is (length, lexicographic), which is the tie-break
rule for all searches in this package.
"""

from __future__ import annotations

from itertools import product
from typing import Iterable, Iterator

EPSILON = ""


def canonical_key(word: str) -> tuple[int, str]:
    return (len(word), word)


def sort_words(words: Iterable[str]) -> list[str]:
    return sorted(words, key=canonical_key)


def words_of_length(d: int, n: int) -> Iterator[str]:
    """All words of length exactly n, in lexicographic order."""
    digits = [str(i) for i in range(d)]
    for tup in product(digits, repeat=n):
        yield "".join(tup)


def words_up_to(d: int, n: int) -> list[str]:
    """The full support Sigma_n = all words of length <= n, canonical order."""
    out: list[str] = []
    for k in range(n + 1):
        out.extend(words_of_length(d, k))
    return out


def children(word: str, d: int) -> list[str]:
    return [word + str(i) for i in range(d)]


def parent(word: str) -> str:
    if not word:
        raise ValueError("the root has no parent")
    return word[:-1]


def direction(word: str) -> int:
    """Direction of the last step, i.e. which child of its parent this is."""
    if not word:
        raise ValueError("the root has no incoming direction")
    return int(word[-1])


def is_prefix(x: str, y: str) -> bool:
    return y.startswith(x)


def proper_prefixes(word: str) -> Iterator[str]:
    """All proper prefixes, including the empty word, shortest first."""
    for k in range(len(word)):
        yield word[:k]


def prefix_closure(words: Iterable[str]) -> set[str]:
    closed: set[str] = set()
    for w in words:
        closed.add(w)
        closed.update(proper_prefixes(w))
    return closed


def is_prefix_closed(words: set[str]) -> bool:
    return all(w[:-1] in words for w in words if w)


def validate_word(word: str, d: int) -> None:
    for ch in word:
        if not ch.isdigit() or int(ch) >= d:
            raise ValueError(f"word {word!r} is not over directions 0..{d - 1}")
