"""Link graphs of triangular presentations and the spectral-gap test.

For a presentation with all relators of length 3, the link graph is an
undirected multigraph on the 2n directed letters: each relator t1 t2 t3
contributes the edges {-t1, t2}, {-t2, t3}, {-t3, t1} (cyclically, the
letter pairs that meet at the base vertex of the presentation complex).
If that graph touches every letter, is connected, and the second-smallest
eigenvalue of its normalized Laplacian exceeds 1/2, the group has
Property (T).  The verdict is one-sided: anything else is Inconclusive,
never a refutation.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import EmptyGraph, WrongRelatorLength
from .models import Presentation
from .words import alphabet

#: Certified requires lambda1 > threshold + this margin, so floating-point
#: error can only withhold a certificate, never grant one.
CERTIFICATION_MARGIN = 1e-6

#: Eigenvalues below this count into the multiplicity of zero.
ZERO_TOLERANCE = 1e-8

DEFAULT_THRESHOLD = 0.5


@dataclass(frozen=True)
class LinkGraph:
    """Undirected multigraph on the directed letters ±1..±n.

    ``edges`` maps a canonical pair (u, v) with u <= v to its
    multiplicity; loops are pairs (v, v) and add 2 to the degree of v.
    """

    rank: int
    edges: tuple  # ((u, v, multiplicity), ...) sorted; built from any pair->count mapping

    def __init__(self, rank: int, edges):
        object.__setattr__(self, "rank", rank)
        object.__setattr__(
            self, "edges", tuple(sorted((u, v, m) for (u, v), m in dict(edges).items()))
        )

    @property
    def edge_count(self) -> int:
        return sum(m for _, _, m in self.edges)

    def degrees(self) -> dict[int, int]:
        deg = {v: 0 for v in alphabet(self.rank)}
        for u, v, m in self.edges:
            if u == v:
                deg[u] += 2 * m
            else:
                deg[u] += m
                deg[v] += m
        return deg

    def isolated_vertices(self) -> tuple[int, ...]:
        deg = self.degrees()
        return tuple(v for v in alphabet(self.rank) if deg[v] == 0)


def link_graph(presentation: Presentation) -> LinkGraph:
    """Build the link graph of a triangular presentation.

    >>> from .models import Presentation
    >>> g = link_graph(Presentation.make(3, [(1, 2, 3)]))
    >>> g.edges
    ((-3, 1, 1), (-2, 3, 1), (-1, 2, 1))
    """
    length = presentation.relator_length()
    if length != 3:
        raise WrongRelatorLength(
            f"link graph needs relator length 3, presentation has {length}"
        )
    pairs: Counter = Counter()
    for relator in presentation.relators:
        for i in range(3):
            u, v = -relator[i], relator[(i + 1) % 3]
            if v < u:
                u, v = v, u
            pairs[(u, v)] += 1
    return LinkGraph(presentation.n, pairs)


@dataclass(frozen=True)
class Spectrum:
    """Normalized-Laplacian spectrum of a link graph, non-isolated part.

    eigenvalues are ascending in [0, 2]; lambda1 is the second smallest
    (None when fewer than two vertices carry edges); connected means
    connectivity of the non-isolated vertex set (multiplicity_of_zero
    equals 1); isolated lists the degree-0 letters, whose mere existence
    already blocks certification.
    """

    eigenvalues: tuple[float, ...]
    lambda1: Optional[float]
    connected: bool
    multiplicity_of_zero: int
    n_vertices: int
    edge_count: int
    isolated: tuple[int, ...]


def normalized_laplacian_spectrum(graph: LinkGraph) -> Spectrum:
    """Dense symmetric eigensolve of I - D^{-1/2} A D^{-1/2}.

    Isolated vertices are excluded from the matrix (their degree admits
    no normalization) but reported on the Spectrum.
    """
    if graph.edge_count == 0:
        raise EmptyGraph("link graph has no edges")
    degrees = graph.degrees()
    vertices = [v for v in alphabet(graph.rank) if degrees[v] > 0]
    position = {v: i for i, v in enumerate(vertices)}
    size = len(vertices)
    adjacency = np.zeros((size, size))
    for u, v, mult in graph.edges:
        if u == v:
            adjacency[position[u], position[u]] += 2 * mult
        else:
            adjacency[position[u], position[v]] += mult
            adjacency[position[v], position[u]] += mult
    scale = 1.0 / np.sqrt(np.array([degrees[v] for v in vertices], dtype=float))
    laplacian = np.eye(size) - scale[:, None] * adjacency * scale[None, :]
    eigenvalues = np.linalg.eigvalsh(laplacian)
    zeros = int(np.count_nonzero(eigenvalues < ZERO_TOLERANCE))
    return Spectrum(
        eigenvalues=tuple(float(x) for x in eigenvalues),
        lambda1=float(eigenvalues[1]) if size >= 2 else None,
        connected=zeros == 1,
        multiplicity_of_zero=zeros,
        n_vertices=size,
        edge_count=graph.edge_count,
        isolated=graph.isolated_vertices(),
    )


def _empty_spectrum(rank: int) -> Spectrum:
    return Spectrum(
        eigenvalues=(),
        lambda1=None,
        connected=False,
        multiplicity_of_zero=0,
        n_vertices=0,
        edge_count=0,
        isolated=tuple(alphabet(rank)),
    )


@dataclass(frozen=True)
class ZukReport:
    """Outcome of the spectral criterion on one presentation."""

    verdict: str  # "Certified" | "Inconclusive"
    spectrum: Spectrum
    threshold: float

    @property
    def certified(self) -> bool:
        return self.verdict == "Certified"

    def verdict_line(self) -> str:
        lam = "nan" if self.spectrum.lambda1 is None else repr(self.spectrum.lambda1)
        return (
            f"{self.verdict.lower()} lambda1={lam} "
            f"vertices={self.spectrum.n_vertices} edges={self.spectrum.edge_count}"
        )


def zuk_certify(
    presentation: Presentation, threshold: float = DEFAULT_THRESHOLD
) -> ZukReport:
    """Certified iff the link graph covers all 2n letters, is connected,
    and lambda1 clears the threshold by the certification margin.

    An empty relator set is Inconclusive (every letter uncovered), not an
    error.
    """
    graph = link_graph(presentation) if presentation.relators else None
    if graph is None or graph.edge_count == 0:
        return ZukReport("Inconclusive", _empty_spectrum(presentation.n), threshold)
    spectrum = normalized_laplacian_spectrum(graph)
    certified = (
        not spectrum.isolated
        and spectrum.connected
        and spectrum.lambda1 is not None
        and spectrum.lambda1 > threshold + CERTIFICATION_MARGIN
    )
    return ZukReport("Certified" if certified else "Inconclusive", spectrum, threshold)


def spectrum_csv(spectrum: Spectrum) -> str:
    """CSV dump, one row per eigenvalue: ``index,eigenvalue``."""
    lines = ["index,eigenvalue"]
    lines.extend(f"{i},{value!r}" for i, value in enumerate(spectrum.eigenvalues))
    return "\n".join(lines) + "\n"
