"""The rglab HTTP service.

Stateless compute endpoints over the library; every error is a JSON
envelope ``{"error": {"type", "message"}}`` with status 400 for bad
input and 409 for runs that are well-formed but infeasible (word space
too small, not enough positive relators, relator budget exceeded).
"""

from __future__ import annotations

import math

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import InsufficientPositiveRelators, RGLabError, SpaceExhausted
from ..models import (
    ModelParams,
    parse_presentation,
    sample_presentation,
    write_presentation,
)
from ..pipeline import (
    ThresholdHypothesis,
    certification_rates,
    certify,
    experiment,
    model_grid,
    parse_family,
    write_certificate,
)
from ..regroup import effective_density
from ..spectral import spectrum_csv, zuk_certify
from ..subgroup import lemma_audit, stallings_fold, wjplus_generators
from ..words import count_reduced, parse_word
from .schemas import (
    AuditBody,
    CertifyRequest,
    CertifyResponse,
    ExperimentRequest,
    ExperimentResponse,
    FoldRequest,
    FoldResponse,
    HealthResponse,
    LemmaAuditRequest,
    LemmaAuditResponse,
    RateBody,
    SampleRequest,
    SampleResponse,
    SpectrumRequest,
    SpectrumResponse,
)

#: Upper bound on reduced words one lemma-audit request may enumerate.
AUDIT_WORD_LIMIT = 10_000_000

#: Upper bound on trials x models per experiment request.
EXPERIMENT_ROW_LIMIT = 20_000


def _envelope(exc: Exception) -> dict:
    return {"error": {"type": type(exc).__name__, "message": str(exc)}}


def create_app() -> FastAPI:
    app = FastAPI(title="rglab", version=__version__)

    @app.exception_handler(RGLabError)
    async def _domain_error(request: Request, exc: RGLabError):
        infeasible = isinstance(exc, (SpaceExhausted, InsufficientPositiveRelators))
        return JSONResponse(status_code=409 if infeasible else 400, content=_envelope(exc))

    @app.exception_handler(ValueError)
    async def _value_error(request: Request, exc: ValueError):
        return JSONResponse(status_code=400, content=_envelope(exc))

    @app.exception_handler(OverflowError)
    async def _overflow_error(request: Request, exc: OverflowError):
        return JSONResponse(status_code=409, content=_envelope(exc))

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.post("/sample", response_model=SampleResponse)
    def sample(req: SampleRequest) -> SampleResponse:
        params = ModelParams(
            n=req.n, k=req.k, d=req.d, positive=req.positive, seed=req.seed
        )
        pres = sample_presentation(params, count_override=req.count_override)
        count = len(pres.relators)
        return SampleResponse(
            presentation=write_presentation(pres),
            relators=count,
            effective_density=(
                effective_density(count, req.k, req.n) if count >= 1 else None
            ),
            digest=pres.digest(),
        )

    @app.post("/certify", response_model=CertifyResponse)
    def certify_presentation(req: CertifyRequest) -> CertifyResponse:
        pres = parse_presentation(req.presentation)
        hypothesis = ThresholdHypothesis(d0=req.d0, base_k=req.base_k)
        dprime = req.dprime
        if dprime == "mid":
            if pres.params is None:
                raise ValueError(
                    "dprime 'mid' needs a presentation with model provenance"
                )
            dprime = (req.d0 + pres.params.d) / 2
        cert = certify(pres, req.j, dprime, hypothesis, req.threshold)
        index = cert.audit.wjplus_index
        return CertifyResponse(
            verdict=cert.verdict,
            certificate=write_certificate(cert),
            lambda1=cert.lambda1,
            connected=cert.zuk.spectrum.connected if cert.zuk else None,
            positive_relators=cert.positive_relators,
            downsample_target=cert.downsample_target,
            gamma_rank=cert.regrouped.alphabet.m,
            audit=AuditBody(
                a_gamma_decodes_into_gplus=cert.audit.a_gamma_decodes_into_gplus,
                b_gplus_relators_in_input=cert.audit.b_gplus_relators_in_input,
                c_wjplus_finite_index=cert.audit.c_wjplus_finite_index,
                d_counts_match=cert.audit.d_counts_match,
                wjplus_index=None if math.isinf(index) else int(index),
                all_true=cert.audit.all_true,
            ),
        )

    @app.post("/fold", response_model=FoldResponse)
    def fold(req: FoldRequest) -> FoldResponse:
        if (req.wjplus_j is None) == (req.generators is None):
            raise ValueError("pass exactly one of wjplus_j and generators")
        if req.wjplus_j is not None:
            generators = wjplus_generators(req.n, req.wjplus_j)
        else:
            generators = [parse_word(text) for text in req.generators or []]
        graph = stallings_fold(generators, req.n)
        index = graph.index()
        return FoldResponse(
            dump=graph.dump(),
            index="inf" if math.isinf(index) else str(int(index)),
            vertices=len(graph),
            complete=graph.is_complete(),
        )

    @app.post("/spectrum", response_model=SpectrumResponse)
    def spectrum(req: SpectrumRequest) -> SpectrumResponse:
        pres = parse_presentation(req.presentation)
        report = zuk_certify(pres, req.threshold)
        s = report.spectrum
        return SpectrumResponse(
            csv=spectrum_csv(s),
            verdict_line=report.verdict_line(),
            verdict=report.verdict,
            lambda1=s.lambda1,
            connected=s.connected,
            vertices=s.n_vertices,
            edges=s.edge_count,
        )

    @app.post("/lemma-audit", response_model=LemmaAuditResponse)
    def run_lemma_audit(req: LemmaAuditRequest) -> LemmaAuditResponse:
        workload = sum(
            count_reduced(req.n, length) for length in range(1, req.max_len + 1)
        )
        if workload > AUDIT_WORD_LIMIT:
            raise ValueError(
                f"audit would enumerate {workload} words (limit {AUDIT_WORD_LIMIT})"
            )
        report = lemma_audit(req.n, req.j, req.max_len)
        return LemmaAuditResponse(
            ok=report.ok,
            words_checked=report.words_checked,
            failures=report.failures,
            max_rep_len=report.max_rep_len,
            subgroup_index=(
                None
                if math.isinf(report.subgroup_index)
                else int(report.subgroup_index)
            ),
            summary=report.summary(),
        )

    @app.post("/experiment", response_model=ExperimentResponse)
    def run_experiment(req: ExperimentRequest) -> ExperimentResponse:
        k, _ = parse_family(req.family)
        if k % req.j != 0:
            raise ValueError(f"relator length {k} is not divisible by j={req.j}")
        models = model_grid(req.family, req.n, req.d)
        if len(models) * req.trials > EXPERIMENT_ROW_LIMIT:
            raise ValueError(
                f"grid of {len(models) * req.trials} rows exceeds "
                f"limit {EXPERIMENT_ROW_LIMIT}"
            )
        hypothesis = ThresholdHypothesis(base_k=k // req.j)
        csv_text = experiment(
            models,
            req.j,
            req.dprime,
            req.trials,
            req.master_seed,
            hypothesis=hypothesis,
            timing=req.timing,
        )
        rates = certification_rates(csv_text)
        return ExperimentResponse(
            csv=csv_text,
            rates=[
                RateBody(n=n, d=d, rate=rates[(n, d)])
                for (n, d) in sorted(rates)
            ],
        )

    return app
