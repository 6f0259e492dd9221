"""Words over a free-group basis: reduction, enumeration, exact counting.

A word is a tuple of nonzero signed integers.  The magnitude names the
generator (1-based), the sign marks inversion, so ``(1, -2, 1)`` is
s1 * s2^-1 * s1.  Rank is carried by the surrounding context (a
presentation, a block alphabet, an explicit argument), never by the
word itself.

Text form used by every file format: space-separated signed decimals,
with the lone token ``e`` for the empty word.
"""

from __future__ import annotations

from typing import Iterator, Sequence

Word = tuple[int, ...]

EMPTY_WORD_TOKEN = "e"


def alphabet(n: int) -> list[int]:
    """All 2n letters in canonical (integer) order: -n..-1, 1..n."""
    return [l for l in range(-n, n + 1) if l != 0]


def validate_word(word: Sequence[int], rank: int) -> Word:
    w = tuple(word)
    for letter in w:
        if not isinstance(letter, int) or letter == 0 or abs(letter) > rank:
            raise ValueError(f"letter {letter!r} invalid for rank {rank}")
    return w


def inverse(word: Sequence[int]) -> Word:
    return tuple(-l for l in reversed(word))


def is_positive(word: Sequence[int]) -> bool:
    return all(l > 0 for l in word)


def is_reduced(word: Sequence[int]) -> bool:
    return all(word[i] != -word[i + 1] for i in range(len(word) - 1))


def is_cyclically_reduced(word: Sequence[int]) -> bool:
    """Reduced with first letter not inverse to the last; empty word counts.

    >>> is_cyclically_reduced((1, 2, -1))
    False
    >>> is_cyclically_reduced(())
    True
    >>> is_cyclically_reduced((1, 1, 2))
    True
    """
    if not is_reduced(word):
        return False
    return len(word) == 0 or word[0] != -word[-1]


def free_reduce(word: Sequence[int]) -> Word:
    """The unique freely reduced word equal to ``word``.

    >>> free_reduce((1, -1))
    ()
    >>> free_reduce((1, 2, -2, 1))
    (1, 1)
    """
    out: list[int] = []
    for letter in word:
        if out and out[-1] == -letter:
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


def cyclic_reduce(word: Sequence[int]) -> tuple[Word, Word]:
    """Cyclically reduce, returning ``(core, u)`` with w = u * core * u^-1.

    The conjugating witness ``u`` makes the conjugacy invariant directly
    checkable: free_reduce(u + core + inverse(u)) == free_reduce(w).

    >>> cyclic_reduce((-1, 2, 1))
    ((2,), (-1,))
    >>> cyclic_reduce((1, 2))
    ((1, 2), ())
    """
    core = list(free_reduce(word))
    u: list[int] = []
    while len(core) >= 2 and core[0] == -core[-1]:
        u.append(core[0])
        core = core[1:-1]
    return tuple(core), tuple(u)


def count_reduced(n: int, length: int) -> int:
    """Number of freely reduced words of a given length over rank n."""
    if length < 0:
        raise ValueError("length must be >= 0")
    if length == 0:
        return 1
    return 2 * n * (2 * n - 1) ** (length - 1)


def count_positive(n: int, length: int) -> int:
    """Number of positive words of a given length over rank n."""
    return n**length


def count_cyclically_reduced(n: int, length: int) -> int:
    """Exact number of cyclically reduced words of a given length.

    Recurrence over classes of the last letter relative to the first
    (same / inverse / other); cyclically reduced means the last letter is
    never the inverse of the first.

    >>> count_cyclically_reduced(2, 1)
    4
    >>> count_cyclically_reduced(2, 2)
    12
    >>> count_cyclically_reduced(1, 5)
    2
    """
    if n < 1 or length < 1:
        raise ValueError("need n >= 1 and length >= 1")
    # same / inverse / other counts for a fixed first letter
    same, inv, other = 1, 0, 0
    for _ in range(length - 1):
        same, inv, other = (
            same + other,
            inv + other,
            (2 * n - 2) * (same + inv) + max(2 * n - 3, 0) * other,
        )
    return 2 * n * (same + other)


def enumerate_words(n: int, length: int, kind: str = "all") -> Iterator[Word]:
    """Yield every qualifying word of the given length exactly once, in
    lexicographic order of the letter tuple.

    kind: one of 'all', 'reduced', 'cyclically_reduced', 'positive'.
    Cost is exponential in length; callers accept that.

    >>> list(enumerate_words(1, 2, 'positive'))
    [(1, 1)]
    >>> list(enumerate_words(2, 1, 'all'))
    [(-2,), (-1,), (1,), (2,)]
    """
    if kind not in ("all", "reduced", "cyclically_reduced", "positive"):
        raise ValueError(f"unknown kind {kind!r}")
    letters = list(range(1, n + 1)) if kind == "positive" else alphabet(n)
    prune = kind in ("reduced", "cyclically_reduced")

    def rec(prefix: list[int]) -> Iterator[Word]:
        if len(prefix) == length:
            if (
                kind == "cyclically_reduced"
                and prefix
                and prefix[0] == -prefix[-1]
            ):
                return
            yield tuple(prefix)
            return
        for letter in letters:
            if prune and prefix and letter == -prefix[-1]:
                continue
            prefix.append(letter)
            yield from rec(prefix)
            prefix.pop()

    yield from rec([])


def format_word(word: Sequence[int]) -> str:
    """Render a word in the shared text form.

    >>> format_word((1, -2, 1))
    '1 -2 1'
    >>> format_word(())
    'e'
    """
    if not word:
        return EMPTY_WORD_TOKEN
    return " ".join(str(l) for l in word)


def parse_word(text: str) -> Word:
    """Inverse of :func:`format_word`.

    >>> parse_word('1 -2 1')
    (1, -2, 1)
    >>> parse_word('e')
    ()
    """
    text = text.strip()
    if text == EMPTY_WORD_TOKEN:
        return ()
    if not text:
        raise ValueError("empty word text; use the token 'e'")
    try:
        word = tuple(int(tok) for tok in text.split())
    except ValueError as exc:
        raise ValueError(f"bad word text {text!r}") from exc
    if any(l == 0 for l in word):
        raise ValueError(f"zero letter in word text {text!r}")
    return word
