"""Block regrouping: the positive part of a relator set, the block
alphabet of positive length-j words, the letter-level bijection onto
block indices, and the regrouped presentation over that alphabet.

Positivity is what makes regrouping exact: concatenating positive blocks
can never create a cancellation, so decoding a regrouped relator
reproduces the source relator letter for letter, with no free reduction
involved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import InsufficientPositiveRelators, NotDivisible, NotPositive
from .models import Presentation
from .words import Word, format_word, inverse, is_positive


@dataclass(frozen=True)
class BlockAlphabet:
    """Bijection between 1..n^j and the positive length-j words over rank
    n, in lexicographic order."""

    n: int
    j: int

    def __post_init__(self):
        if self.n < 1 or self.j < 1:
            raise ValueError("need n >= 1 and j >= 1")

    @property
    def m(self) -> int:
        """Alphabet size n^j."""
        return self.n**self.j

    def encode_block(self, block: Sequence[int]) -> int:
        """Index in 1..m of one positive length-j word."""
        if len(block) != self.j:
            raise NotDivisible(f"block {block} is not length {self.j}")
        if not is_positive(block):
            raise NotPositive(f"block {block} has an inverse letter")
        index = 0
        for letter in block:
            if letter > self.n:
                raise ValueError(f"letter {letter} exceeds rank {self.n}")
            index = index * self.n + (letter - 1)
        return index + 1

    def decode_block(self, index: int) -> Word:
        """Positive length-j word for a signed block index; a negative
        index decodes to the inverse of its magnitude's word."""
        if index == 0 or abs(index) > self.m:
            raise ValueError(f"block index {index} out of range 1..{self.m}")
        value = abs(index) - 1
        letters = []
        for _ in range(self.j):
            letters.append(value % self.n + 1)
            value //= self.n
        block = tuple(reversed(letters))
        return block if index > 0 else inverse(block)

    def decode_word(self, blockword: Sequence[int]) -> Word:
        """Concatenated decoding of a signed word over the block alphabet."""
        out: list[int] = []
        for index in blockword:
            out.extend(self.decode_block(index))
        return tuple(out)


def positive_part(pres: Presentation) -> Presentation:
    """Relators of ``pres`` that use no inverse letters; same rank."""
    kept = [r for r in pres.relators if is_positive(r)]
    return Presentation.make(pres.n, kept)


def length_mod(word: Sequence[int], j: int) -> int:
    """Word length modulo j."""
    if j < 1:
        raise ValueError("j must be >= 1")
    return len(word) % j


def block_encode(word: Sequence[int], alphabet: BlockAlphabet) -> Word:
    """The unique word over the block alphabet decoding to ``word``.

    Requires ``word`` positive with length divisible by j.
    """
    if not is_positive(word):
        raise NotPositive(f"word {word} has an inverse letter")
    j = alphabet.j
    if len(word) % j != 0:
        raise NotDivisible(f"length {len(word)} not divisible by {j}")
    return tuple(
        alphabet.encode_block(word[i : i + j]) for i in range(0, len(word), j)
    )


def block_decode(blockword: Sequence[int], alphabet: BlockAlphabet) -> Word:
    return alphabet.decode_word(blockword)


@dataclass(frozen=True)
class RegroupedPresentation:
    """A presentation over the block alphabet plus its provenance."""

    gamma: Presentation
    alphabet: BlockAlphabet
    source: Presentation


def build_gamma(pplus: Presentation, j: int) -> RegroupedPresentation:
    """Regroup a positive presentation with relator length divisible by j
    into a presentation over the rank-n^j block alphabet.

    Relator count is preserved: the encoding is injective on words.
    """
    alphabet = BlockAlphabet(pplus.n, j)
    encoded = [block_encode(r, alphabet) for r in pplus.relators]
    gamma = Presentation.make(alphabet.m, encoded)
    if len(gamma.relators) != len(pplus.relators):
        raise AssertionError("block encoding collided; bijection broken")
    return RegroupedPresentation(gamma=gamma, alphabet=alphabet, source=pplus)


def downsample(pplus: Presentation, target: int) -> Presentation:
    """First ``target`` relators under the fixed enumeration policy
    (lexicographic by letter tuple, the stored order)."""
    if target < 0:
        raise ValueError("target must be >= 0")
    if len(pplus.relators) < target:
        raise InsufficientPositiveRelators(
            have=len(pplus.relators), need=target
        )
    return Presentation.make(pplus.n, pplus.relators[:target])


def effective_density(count: int, k: int, rank: int) -> float:
    """ln(count) / (k * ln(2*rank - 1)): the density a presentation with
    this relator count would have if sampled natively at this rank and
    relator length.  A single relator sits at density 0 regardless of
    rank; at rank 1 the word space does not grow, so any larger count is
    off the density scale entirely."""
    if count < 1:
        raise ValueError("count must be >= 1")
    if k < 1:
        raise ValueError("k must be >= 1")
    if count == 1:
        return 0.0
    if rank == 1:
        return math.inf
    return math.log(count) / (k * math.log(2 * rank - 1))


def write_regrouped(rp: RegroupedPresentation) -> str:
    """Two presentation blocks plus a ``blockmap`` section of
    index -> positive word lines."""
    from .models import write_presentation

    parts = [
        "== source ==",
        write_presentation(rp.source).rstrip("\n"),
        "== gamma ==",
        write_presentation(rp.gamma).rstrip("\n"),
        "== blockmap ==",
    ]
    for index in range(1, rp.alphabet.m + 1):
        parts.append(f"{index} {format_word(rp.alphabet.decode_block(index))}")
    return "\n".join(parts) + "\n"
