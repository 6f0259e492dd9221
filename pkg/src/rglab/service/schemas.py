"""Request/response bodies for the HTTP service.

Presentations, certificates, graph dumps, and CSV tables travel as the
same text formats the library reads and writes, embedded in JSON
strings, so a service round-trip is byte-exact.
"""

from __future__ import annotations

from typing import Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field


class Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ErrorBody(Strict):
    type: str
    message: str


class ErrorEnvelope(Strict):
    error: ErrorBody


class HealthResponse(Strict):
    status: str
    version: str


class SampleRequest(Strict):
    n: int = Field(ge=1, le=10_000)
    k: int = Field(ge=1, le=64)
    d: float = Field(gt=0.0, lt=1.0)
    positive: bool = False
    seed: int = 0
    count_override: Optional[int] = Field(default=None, ge=0)


class SampleResponse(Strict):
    presentation: str
    relators: int
    effective_density: Optional[float]
    digest: str


class CertifyRequest(Strict):
    presentation: str
    j: int = Field(default=1, ge=1, le=8)
    # dprime: a number downsamples to the matching model size, "mid" uses
    # the midpoint of (d0, d), null keeps every positive relator.
    dprime: Union[float, Literal["mid"], None] = None
    d0: float = Field(default=1.0 / 3.0, gt=0.0, lt=1.0)
    base_k: int = Field(default=3, ge=3, le=16)
    threshold: float = Field(default=0.5, ge=0.0, le=2.0)


class AuditBody(Strict):
    a_gamma_decodes_into_gplus: bool
    b_gplus_relators_in_input: bool
    c_wjplus_finite_index: bool
    d_counts_match: bool
    wjplus_index: Optional[int]  # None encodes an infinite index
    all_true: bool


class CertifyResponse(Strict):
    verdict: str
    certificate: str
    lambda1: Optional[float]
    connected: Optional[bool]
    positive_relators: int
    downsample_target: int
    gamma_rank: int
    audit: AuditBody


class FoldRequest(Strict):
    n: int = Field(ge=1, le=64)
    # Either the canonical generating set W+_j of all positive length-j
    # words, or an explicit list of words in text form.
    wjplus_j: Optional[int] = Field(default=None, ge=1, le=8)
    generators: Optional[list[str]] = None


class FoldResponse(Strict):
    dump: str
    index: str  # integer as text, or "inf"
    vertices: int
    complete: bool


class SpectrumRequest(Strict):
    presentation: str
    threshold: float = Field(default=0.5, ge=0.0, le=2.0)


class SpectrumResponse(Strict):
    csv: str
    verdict_line: str
    verdict: str
    lambda1: Optional[float]
    connected: bool
    vertices: int
    edges: int


class LemmaAuditRequest(Strict):
    n: int = Field(ge=1, le=6)
    j: int = Field(ge=1, le=8)
    max_len: int = Field(ge=0, le=12)


class LemmaAuditResponse(Strict):
    ok: bool
    words_checked: int
    failures: list[str]
    max_rep_len: int
    subgroup_index: Optional[int]
    summary: str


class ExperimentRequest(Strict):
    family: str = Field(pattern=r"^(pos|m|mix)[0-9]+$")
    n: list[int] = Field(min_length=1, max_length=32)
    d: list[float] = Field(min_length=1, max_length=32)
    j: int = Field(default=1, ge=1, le=8)
    dprime: Union[float, None] = None
    trials: int = Field(ge=0, le=10_000)
    master_seed: int
    timing: bool = False


class RateBody(Strict):
    n: int
    d: float
    rate: float


class ExperimentResponse(Strict):
    csv: str
    rates: list[RateBody]
