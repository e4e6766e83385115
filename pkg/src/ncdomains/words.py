"""Words of the free semigroup on n generators, in graded-lexicographic order.

A word is a tuple of letters from {1..n}; the empty tuple is the identity.
All operator matrices in this package are laid out in the order produced by
:func:`enumerate_words`, so a ``WordTable`` doubles as the basis index of a
truncated Fock space.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

Word = tuple[int, ...]

EMPTY: Word = ()


def check_word(w: Word, n: int) -> None:
    if any(not (1 <= int(c) <= n) for c in w):
        raise ValueError(f"word {w!r} has letters outside 1..{n}")


def concat(u: Word, v: Word) -> Word:
    return tuple(u) + tuple(v)


def reverse(u: Word) -> Word:
    return tuple(u)[::-1]


def word_key(w: Word) -> tuple[int, Word]:
    """Sort key realizing the graded-lex order g0 < g1 < ... < gn < g1g1 < ..."""
    return (len(w), tuple(w))


@dataclass(frozen=True)
class WordTable:
    """All words of length <= N over {1..n}, graded-lex ordered and indexed."""

    n: int
    N: int
    words: list[Word]
    index: dict[Word, int] = field(repr=False)

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, w: Word) -> bool:
        return tuple(w) in self.index

    def level_slice(self, m: int) -> slice:
        """Index range of the words of exact length m."""
        if not 0 <= m <= self.N:
            raise ValueError(f"level {m} outside 0..{self.N}")
        lo = sum(self.n**j for j in range(m))
        return slice(lo, lo + self.n**m)

    def max_level_index(self, m: int) -> int:
        """Number of words of length <= m (the matrix size at truncation m)."""
        return sum(self.n**j for j in range(m + 1))


def enumerate_words(n: int, N: int) -> WordTable:
    """Enumerate all words of length <= N over the alphabet {1..n}."""
    if n < 1:
        raise ValueError(f"alphabet size must be >= 1, got {n}")
    if N < 0:
        raise ValueError(f"truncation level must be >= 0, got {N}")
    words: list[Word] = []
    for m in range(N + 1):
        words.extend(itertools.product(range(1, n + 1), repeat=m))
    return WordTable(n=n, N=N, words=words, index={w: i for i, w in enumerate(words)})


def words_of_lengths(n: int, lo: int, hi: int) -> list[Word]:
    """Graded-lex list of words with lo <= length <= hi."""
    out: list[Word] = []
    for m in range(lo, hi + 1):
        out.extend(itertools.product(range(1, n + 1), repeat=m))
    return out
