"""Finitely generated subgroups of free groups, two ways.

A Stallings folding engine gives exact membership and index for any
finitely generated subgroup.  Independently, a constructive rewriting
procedure decomposes an arbitrary word as (short positive prefix) *
(product of signed length-j blocks), witnessing that the subgroup
generated by all positive length-j words has a transversal of words
shorter than j.  Each side checks the other.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .regroup import BlockAlphabet, block_encode
from .words import (
    Word,
    alphabet,
    enumerate_words,
    format_word,
    free_reduce,
    inverse,
    is_positive,
)


class SubgroupGraph:
    """Folded base-pointed labeled graph for a subgroup of a free group.

    Vertices are numbered in BFS order from the base (letters explored in
    canonical order), so two runs over the same generators produce
    identical graphs.  ``out[v][letter]`` is the endpoint of the edge at
    ``v`` labeled ``letter``; edges satisfy out(v, l) = w iff
    out(w, -l) = v, and at most one out-edge per letter per vertex.
    """

    def __init__(self, rank: int, out: Sequence[dict[int, int]], base: int = 0):
        self.rank = rank
        self.out = tuple(dict(d) for d in out)
        self.base = base

    def __len__(self) -> int:
        return len(self.out)

    def membership(self, word: Sequence[int]) -> bool:
        """True iff the freely reduced word traces a base-to-base path."""
        v = self.base
        for letter in free_reduce(word):
            nxt = self.out[v].get(letter)
            if nxt is None:
                return False
            v = nxt
        return v == self.base

    def is_complete(self) -> bool:
        """Every vertex carries all 2n out-edges (a covering of the rose)."""
        return all(len(d) == 2 * self.rank for d in self.out)

    def index(self) -> float:
        """Subgroup index: the vertex count when the graph is a complete
        covering of the rose, else math.inf."""
        return len(self.out) if self.is_complete() else math.inf

    def dump(self) -> str:
        """Text form: ``base <v>`` header, one ``from letter to`` line per
        edge (positive letters only; each undirected edge appears once)."""
        lines = [f"base {self.base}"]
        for v, edges in enumerate(self.out):
            for letter in range(1, self.rank + 1):
                if letter in edges:
                    lines.append(f"{v} {letter} {edges[letter]}")
        return "\n".join(lines) + "\n"


def stallings_fold(generators: Sequence[Sequence[int]], n: int) -> SubgroupGraph:
    """Fold the wedge of generator loops into the subgroup graph.

    Generators are freely reduced first; empty words are dropped.  The
    result is folded (no vertex has two same-labeled out-edges) and
    trimmed to its core plus the base point.
    """
    out: list[dict[int, int]] = [{}]
    parent: list[int] = [0]

    def find(v: int) -> int:
        root = v
        while parent[root] != root:
            root = parent[root]
        while parent[v] != root:
            parent[v], v = root, parent[v]
        return root

    def unify(a: int, b: int) -> None:
        work = [(a, b)]
        while work:
            x, y = work.pop()
            x, y = find(x), find(y)
            if x == y:
                continue
            if y < x:
                x, y = y, x
            parent[y] = x
            for letter, target in out[y].items():
                existing = out[x].get(letter)
                if existing is None:
                    out[x][letter] = target
                else:
                    work.append((existing, target))
            out[y] = {}

    def insert_half(v: int, letter: int, w: int) -> None:
        v, w = find(v), find(w)
        existing = out[v].get(letter)
        if existing is None:
            out[v][letter] = w
        elif find(existing) != w:
            unify(existing, w)

    def add_edge(v: int, letter: int, w: int) -> None:
        insert_half(v, letter, w)
        insert_half(w, -letter, v)

    def new_vertex() -> int:
        out.append({})
        parent.append(len(out) - 1)
        return len(out) - 1

    for gen in generators:
        word = free_reduce(gen)
        if any(abs(l) > n for l in word):
            raise ValueError(f"generator {tuple(gen)} exceeds rank {n}")
        if not word:
            continue
        v = find(0)
        for letter in word[:-1]:
            w = new_vertex()
            add_edge(v, letter, w)
            v = find(w)
        add_edge(v, word[-1], find(0))

    return _compact(out, find, n)


def _compact(out, find, n) -> SubgroupGraph:
    """Resolve union-find indirections, trim hanging trees, renumber by
    BFS from the base."""
    base = find(0)
    live = {v for v in range(len(out)) if find(v) == v}
    adj = {v: {l: find(w) for l, w in out[v].items()} for v in live}

    # Trim: a reduced path never enters a hanging tree, so degree-1
    # vertices other than the base carry no subgroup information.
    leaves = deque(v for v in live if v != base and len(adj[v]) <= 1)
    while leaves:
        v = leaves.popleft()
        if v not in adj or len(adj[v]) > 1:
            continue
        for letter, w in adj.pop(v).items():
            del adj[w][-letter]
            if w != base and len(adj[w]) <= 1:
                leaves.append(w)

    order = {base: 0}
    queue = deque([base])
    letters = alphabet(n)
    while queue:
        v = queue.popleft()
        for letter in letters:
            w = adj[v].get(letter)
            if w is not None and w not in order:
                order[w] = len(order)
                queue.append(w)
    renumbered = [dict() for _ in order]
    for v, edges in adj.items():
        renumbered[order[v]] = {l: order[w] for l, w in edges.items()}
    return SubgroupGraph(rank=n, out=renumbered, base=0)


def wjplus_generators(n: int, j: int) -> list[Word]:
    """All n^j positive words of length j, lexicographic."""
    return list(enumerate_words(n, j, "positive"))


@dataclass(frozen=True)
class Decomposition:
    """A word rewritten as rep * (product of signed length-j blocks).

    Invariants: rep is positive or empty with len(rep) < j, and
    free_reduce(rep + decoded blocks) equals the reduced source word.
    """

    rep: Word
    blocks: Word
    source: Word


def transversal_decompose(
    word: Sequence[int], block_alphabet: BlockAlphabet
) -> Decomposition:
    """Rewrite ``word`` as a short positive prefix times an element of the
    subgroup generated by the positive length-j words.

    Working right to left over the maximal negative/positive runs, insert
    canonical padding pairs (powers of generator 1) so that the trailing
    positive run and the negative run before it each reach a length
    divisible by j, then peel both off as signed block factors.  Padding
    that would need a full extra block (residue 0) uses the empty word
    instead.  Total on all words.
    """
    j = block_alphabet.j
    source = tuple(word)
    cur = free_reduce(word)
    blocks: list[int] = []
    while not is_positive(cur):
        i = len(cur)
        while i > 0 and cur[i - 1] > 0:
            i -= 1
        pos_run = cur[i:]
        t = i
        while t > 0 and cur[t - 1] < 0:
            t -= 1
        neg_run = cur[t:i]
        prefix = cur[:t]
        x = (1,) * ((j - len(pos_run) % j) % j)
        y = (1,) * ((j - (len(neg_run) + len(x)) % j) % j)
        # cur = prefix . y . (y^-1 neg_run x^-1) . (x pos_run); the two
        # parenthesized factors have length divisible by j.
        neg_word = inverse(y) + neg_run + inverse(x)
        pos_word = x + pos_run
        neg_blocks = [
            -b for b in reversed(block_encode(inverse(neg_word), block_alphabet))
        ]
        blocks = neg_blocks + list(block_encode(pos_word, block_alphabet)) + blocks
        cur = prefix + y
    split = len(cur) % j
    rep, tail = cur[:split], cur[split:]
    if tail:
        blocks = list(block_encode(tail, block_alphabet)) + blocks
    return Decomposition(rep=rep, blocks=tuple(blocks), source=source)


@dataclass
class LemmaAuditReport:
    """Outcome of exhaustively checking the transversal rewriting against
    the folding oracle on all short reduced words."""

    n: int
    j: int
    max_len: int
    words_checked: int = 0
    failures: list[str] = field(default_factory=list)
    max_rep_len: int = 0
    subgroup_index: float = math.inf

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        verdict = "all pass" if self.ok else f"{len(self.failures)} FAILURES"
        return (
            f"lemma audit n={self.n} j={self.j} max_len={self.max_len}: "
            f"{self.words_checked} reduced words, {verdict}; "
            f"max rep length {self.max_rep_len}, "
            f"subgroup index {self.subgroup_index}"
        )


def lemma_audit(n: int, j: int, max_len: int) -> LemmaAuditReport:
    """For every reduced word up to max_len: decompose, check the prefix
    is shorter than j, check exact reconstruction, and confirm the block
    part against Stallings membership.  Any counterexample is recorded
    (and is a build-failing event for the suite)."""
    block_alphabet = BlockAlphabet(n, j)
    graph = stallings_fold(wjplus_generators(n, j), n)
    report = LemmaAuditReport(
        n=n, j=j, max_len=max_len, subgroup_index=graph.index()
    )
    for length in range(1, max_len + 1):
        for word in enumerate_words(n, length, "reduced"):
            report.words_checked += 1
            dec = transversal_decompose(word, block_alphabet)
            decoded = block_alphabet.decode_word(dec.blocks)
            good = (
                len(dec.rep) < j
                and is_positive(dec.rep)
                and free_reduce(dec.rep + decoded) == word
                and graph.membership(decoded)
            )
            report.max_rep_len = max(report.max_rep_len, len(dec.rep))
            if not good:
                report.failures.append(format_word(word))
    return report


def parse_generators(text: str) -> list[Word]:
    """One word per line in the shared text form; ``#`` comments allowed."""
    from .words import parse_word

    gens = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        gens.append(parse_word(line))
    return gens
