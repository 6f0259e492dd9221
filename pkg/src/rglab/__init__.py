"""rglab: random k-gonal groups, block regrouping, Property (T) certificates.

Sample presentations in the models M_k(n, d) and M+_k(n, d), regroup
positive relators over the alphabet of length-j blocks, witness the
finite-index step with Stallings foldings, and certify Property (T)
through the normalized-Laplacian gap of the link graph.  The service
subpackage exposes the same operations over HTTP; the CLI is a thin
client of it.
"""

__version__ = "0.1.0"

from .errors import (
    EmptyGraph,
    InsufficientPositiveRelators,
    NotDivisible,
    NotPositive,
    RGLabError,
    SpaceExhausted,
    WrongRelatorLength,
)
from .words import (
    Word,
    alphabet,
    count_cyclically_reduced,
    count_positive,
    count_reduced,
    cyclic_reduce,
    enumerate_words,
    format_word,
    free_reduce,
    inverse,
    is_cyclically_reduced,
    is_positive,
    is_reduced,
    parse_word,
)
from .models import (
    DEFAULT_RELATOR_BUDGET,
    ModelParams,
    Presentation,
    derive_rng,
    derive_seed,
    floor_power,
    make_rng,
    parse_presentation,
    relator_count,
    sample_positive_relator,
    sample_presentation,
    sample_relator,
    word_space_size,
    write_presentation,
)
from .regroup import (
    BlockAlphabet,
    RegroupedPresentation,
    block_decode,
    block_encode,
    build_gamma,
    downsample,
    effective_density,
    positive_part,
    write_regrouped,
)
from .subgroup import (
    Decomposition,
    LemmaAuditReport,
    SubgroupGraph,
    lemma_audit,
    parse_generators,
    stallings_fold,
    transversal_decompose,
    wjplus_generators,
)
from .spectral import (
    CERTIFICATION_MARGIN,
    DEFAULT_THRESHOLD,
    LinkGraph,
    Spectrum,
    ZukReport,
    link_graph,
    normalized_laplacian_spectrum,
    spectrum_csv,
    zuk_certify,
)
from .pipeline import (
    DEFAULT_HYPOTHESIS,
    EXPERIMENT_COLUMNS,
    AuditReport,
    Certificate,
    ThresholdHypothesis,
    certification_rates,
    certify,
    chain_audit,
    experiment,
    model_grid,
    parse_family,
    write_certificate,
)

__all__ = [name for name in dir() if not name.startswith("_")]
