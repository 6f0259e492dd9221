"""Uniform samplers and exact parameter arithmetic for the k-gonal and
positive k-gonal random group models.

Randomness discipline: every sampler draws from a numpy ``Generator``
backed by PCG64.  Streams are derived deterministically from integer
seeds via ``SeedSequence``, so identical parameters (seed included)
reproduce identical presentations across runs and platforms, and
per-trial streams derived from (master seed, indices) are disjoint.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Iterable, Optional

import mpmath
import numpy as np

from .errors import SpaceExhausted
from .words import (
    Word,
    alphabet,
    count_cyclically_reduced,
    count_positive,
    format_word,
    is_cyclically_reduced,
    is_positive,
    parse_word,
)

DEFAULT_RELATOR_BUDGET = 10**7

# Snap window for the floor of (2n-1)^(kd): a computed power this close to
# an integer is treated as hitting it exactly (float noise in kd, not a
# genuinely fractional power).
_POWER_SNAP = 1e-9


def floor_power(base: int, exponent: float) -> int:
    """``floor(base ** exponent)`` in extended precision.

    Exponentiation goes through exp/log at 50 significant digits; a value
    within 1e-9 of an integer is snapped to it before flooring, so float
    noise in the exponent (e.g. 3 * (1/3)) cannot drop the count by one.
    """
    if base < 1:
        raise ValueError("base must be >= 1")
    if base == 1:
        return 1
    with mpmath.workdps(50):
        value = mpmath.exp(mpmath.mpf(exponent) * mpmath.log(base))
        nearest = mpmath.nint(value)
        if abs(value - nearest) < _POWER_SNAP:
            return int(nearest)
        return int(mpmath.floor(value))


@dataclass(frozen=True)
class ModelParams:
    """Parameters of M_k(n, d) / M+_k(n, d) plus the sampling seed."""

    n: int
    k: int
    d: float
    positive: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("rank n must be >= 1")
        if self.k < 1:
            raise ValueError("relator length k must be >= 1")
        if not (0.0 < self.d < 1.0):
            raise ValueError("density d must lie in (0, 1)")

    @property
    def name(self) -> str:
        return f"M{'+' if self.positive else ''}_{self.k}({self.n}, {self.d})"


def relator_count(
    params: ModelParams, budget: int = DEFAULT_RELATOR_BUDGET
) -> int:
    """Number of relators: floor((2n - 1)^(k d)), both models.

    Raises OverflowError when the count exceeds ``budget`` (the
    configurable relator-set cap for desk-scale runs).
    """
    count = floor_power(2 * params.n - 1, params.k * params.d)
    if count > budget:
        raise OverflowError(
            f"relator count {count} exceeds budget {budget} for {params.name}"
        )
    return count


def word_space_size(params: ModelParams) -> int:
    """Size of the space relators are drawn from."""
    if params.positive:
        return count_positive(params.n, params.k)
    return count_cyclically_reduced(params.n, params.k)


def make_rng(seed: int) -> np.random.Generator:
    """PCG64 generator for an integer seed."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def derive_rng(master_seed: int, *indices: int) -> np.random.Generator:
    """Disjoint per-trial stream derived from (master seed, indices)."""
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence((master_seed, *indices)))
    )


def derive_seed(master_seed: int, *indices: int) -> int:
    """A 64-bit child seed derived from (master seed, indices)."""
    seq = np.random.SeedSequence((master_seed, *indices))
    return int(seq.generate_state(1, dtype=np.uint64)[0])


def sample_relator(n: int, k: int, rng: np.random.Generator) -> Word:
    """Uniform cyclically reduced word of length k over rank n.

    Draws a uniform freely reduced word (first letter uniform over 2n,
    each later letter uniform over the 2n - 1 non-cancelling choices) and
    rejects until cyclically reduced.  Conditioning a uniform reduced
    word on cyclic reducedness leaves the uniform distribution on the
    cyclically reduced words.
    """
    if n == 1:
        # Only s1^k and s1^-k exist; pick one.
        sign = 1 if int(rng.integers(0, 2)) == 0 else -1
        return (sign,) * k
    letters = alphabet(n)
    while True:
        first = int(rng.integers(0, 2 * n))
        draws = rng.integers(0, 2 * n - 1, size=k - 1)
        word = [letters[first]]
        for r in draws:
            forbidden = letters.index(-word[-1])
            r = int(r)
            word.append(letters[r if r < forbidden else r + 1])
        if k == 1 or word[0] != -word[-1]:
            return tuple(word)


def sample_positive_relator(n: int, k: int, rng: np.random.Generator) -> Word:
    """Uniform positive word of length k; positive words are automatically
    cyclically reduced."""
    return tuple(int(l) for l in rng.integers(1, n + 1, size=k))


@dataclass(frozen=True)
class Presentation:
    """A group presentation: rank plus a set of distinct relators.

    Relators are stored sorted lexicographically, which makes equality,
    serialization, and the downsampling policy canonical.
    """

    n: int
    relators: tuple[Word, ...]
    params: Optional[ModelParams] = None

    @staticmethod
    def make(
        n: int, relators: Iterable[Word], params: Optional[ModelParams] = None
    ) -> "Presentation":
        rels = sorted(set(tuple(r) for r in relators))
        pres = Presentation(n=n, relators=tuple(rels), params=params)
        pres.validate()
        return pres

    def validate(self):
        if self.n < 1:
            raise ValueError("rank must be >= 1")
        for rel in self.relators:
            if len(rel) == 0:
                raise ValueError("identity relator not allowed")
            if any(l == 0 or abs(l) > self.n for l in rel):
                raise ValueError(f"relator {rel} invalid for rank {self.n}")
            if not is_cyclically_reduced(rel):
                raise ValueError(f"relator {rel} is not cyclically reduced")
        if self.params is not None:
            if self.params.n != self.n:
                raise ValueError("params rank disagrees with presentation")
            for rel in self.relators:
                if len(rel) != self.params.k:
                    raise ValueError("relator length disagrees with params")
                if self.params.positive and not is_positive(rel):
                    raise ValueError("negative letter in positive model")

    def relator_length(self) -> Optional[int]:
        """Common relator length, or None when there are no relators."""
        if not self.relators:
            return None
        lengths = {len(r) for r in self.relators}
        if len(lengths) != 1:
            raise ValueError(f"mixed relator lengths {sorted(lengths)}")
        return lengths.pop()

    def digest(self) -> str:
        body = f"gens {self.n}\n" + "".join(
            f"rel {format_word(r)}\n" for r in self.relators
        )
        return hashlib.sha256(body.encode()).hexdigest()


def sample_presentation(
    params: ModelParams,
    rng: Optional[np.random.Generator] = None,
    count_override: Optional[int] = None,
    budget: int = DEFAULT_RELATOR_BUDGET,
) -> Presentation:
    """Uniformly random set of ``relator_count(params)`` distinct relators.

    Duplicates are rejected and resampled, so the result is a uniform
    random subset of the word space of the required size.  Raises
    SpaceExhausted when the word space is too small to hold it.
    """
    target = (
        count_override
        if count_override is not None
        else relator_count(params, budget=budget)
    )
    space = word_space_size(params)
    if target > space:
        raise SpaceExhausted(requested=target, available=space)
    if rng is None:
        rng = make_rng(params.seed)
    draw = sample_positive_relator if params.positive else sample_relator
    relators: set[Word] = set()
    while len(relators) < target:
        relators.add(draw(params.n, params.k, rng))
    return Presentation.make(params.n, relators, params=params)


def write_presentation(pres: Presentation) -> str:
    """Line-oriented text form: ``gens <n>`` header, one ``rel <word>``
    line per relator, model provenance in ``#`` comments.  Parsing the
    output and writing it again is byte-exact."""
    lines = []
    if pres.params is not None:
        p = pres.params
        lines.append(
            f"# model n={p.n} k={p.k} d={p.d!r} "
            f"positive={str(p.positive).lower()} seed={p.seed}"
        )
    lines.append(f"gens {pres.n}")
    for rel in pres.relators:
        lines.append(f"rel {format_word(rel)}")
    return "\n".join(lines) + "\n"


def parse_presentation(text: str) -> Presentation:
    """Parse the :func:`write_presentation` format."""
    n: Optional[int] = None
    params: Optional[ModelParams] = None
    relators: list[Word] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if line.startswith("# model "):
                params = _parse_model_comment(line)
            continue
        fields = line.split(None, 1)
        if fields[0] == "gens":
            if n is not None:
                raise ValueError(f"line {lineno}: duplicate gens header")
            n = int(fields[1])
        elif fields[0] == "rel":
            if n is None:
                raise ValueError(f"line {lineno}: rel before gens header")
            if len(fields) < 2:
                raise ValueError(f"line {lineno}: rel without word")
            relators.append(parse_word(fields[1]))
        else:
            raise ValueError(f"line {lineno}: unknown directive {fields[0]!r}")
    if n is None:
        raise ValueError("missing gens header")
    return Presentation.make(n, relators, params=params)


def _parse_model_comment(line: str) -> ModelParams:
    kv = {}
    for token in line[len("# model ") :].split():
        key, _, value = token.partition("=")
        kv[key] = value
    return ModelParams(
        n=int(kv["n"]),
        k=int(kv["k"]),
        d=float(kv["d"]),
        positive=kv["positive"] == "true",
        seed=int(kv["seed"]),
    )
