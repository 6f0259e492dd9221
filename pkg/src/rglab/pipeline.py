"""End-to-end certification chain and the experiment harness.

Given a sampled group G = <s1..sn | R> with relator length j*k, the
chain runs: keep the positive relators (G+), optionally downsample them
to the count a density-d' model would have, regroup into blocks of
length j (Gamma over rank n^j), apply the spectral criterion to Gamma,
and audit every link.  Property (T) descends the chain: Gamma surjects
onto the block image, which sits with finite index in G+, which surjects
onto G — so the verdict PropertyT is sound whenever the spectral
certificate and the audits hold.
"""

from __future__ import annotations

import csv
import io
import math
import os
import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Optional, Sequence

from .errors import RGLabError, WrongRelatorLength
from .models import (
    ModelParams,
    Presentation,
    derive_seed,
    floor_power,
    sample_presentation,
)
from .regroup import (
    RegroupedPresentation,
    build_gamma,
    downsample,
    effective_density,
    positive_part,
)
from .spectral import DEFAULT_THRESHOLD, ZukReport, zuk_certify
from .subgroup import stallings_fold, wjplus_generators
from .words import Word


@dataclass(frozen=True)
class ThresholdHypothesis:
    """The assumed phase threshold: positive base_k-gonal random groups
    at density above d0 have Property (T).  Defaults to the triangular
    case with d0 = 1/3."""

    d0: float = 1.0 / 3.0
    base_k: int = 3

    def __post_init__(self):
        if not (0.0 < self.d0 < 1.0):
            raise ValueError("d0 must lie in (0, 1)")
        if self.base_k < 3:
            raise ValueError("base_k must be >= 3")


DEFAULT_HYPOTHESIS = ThresholdHypothesis()


@dataclass(frozen=True)
class AuditReport:
    """The four chain-link checks.

    a: every Gamma relator decodes to a relator of the downsampled G+.
    b: every downsampled G+ relator is a relator of the input.
    c: <W+_j> has finite index in the free group (Stallings witness).
    d: relator counts agree across the chain after downsampling.
    """

    a_gamma_decodes_into_gplus: bool
    b_gplus_relators_in_input: bool
    c_wjplus_finite_index: bool
    d_counts_match: bool
    wjplus_index: float

    @property
    def all_true(self) -> bool:
        return (
            self.a_gamma_decodes_into_gplus
            and self.b_gplus_relators_in_input
            and self.c_wjplus_finite_index
            and self.d_counts_match
        )


@dataclass(frozen=True)
class Certificate:
    """Auditable record of one run of the chain.

    Carries the actual intermediate presentations (not just digests) so
    that chain_audit can re-verify a certificate against the input from
    scratch."""

    input_digest: str
    input_n: int
    input_relators: int
    input_relator_length: Optional[int]
    input_params: Optional[ModelParams]
    j: int
    base_k: int
    d0: float
    dprime: Optional[float]
    threshold: float
    positive_relators: int
    downsample_target: int
    gplus: Presentation
    regrouped: RegroupedPresentation
    subgroup_generators: tuple[Word, ...]
    density_input: Optional[float]
    density_positive: Optional[float]
    density_downsampled: Optional[float]
    density_gamma: Optional[float]
    zuk: Optional[ZukReport]
    audit: AuditReport
    verdict: str  # "PropertyT" | "Inconclusive"

    @property
    def gamma(self) -> Presentation:
        return self.regrouped.gamma

    @property
    def lambda1(self) -> Optional[float]:
        if self.zuk is None:
            return None
        return self.zuk.spectrum.lambda1


def _density(count: int, k: int, rank: int) -> Optional[float]:
    return effective_density(count, k, rank) if count >= 1 else None


def _run_audit(
    gamma: Presentation,
    regrouped: RegroupedPresentation,
    gplus: Presentation,
    source: Presentation,
    generators: Sequence[Word],
    target: int,
) -> AuditReport:
    gplus_set = set(gplus.relators)
    a = all(
        regrouped.alphabet.decode_word(r) in gplus_set for r in gamma.relators
    )
    b = set(gplus.relators) <= set(source.relators)
    index = stallings_fold(generators, source.n).index()
    c = math.isfinite(index)
    d = len(gamma.relators) == len(gplus.relators) == target
    return AuditReport(
        a_gamma_decodes_into_gplus=a,
        b_gplus_relators_in_input=b,
        c_wjplus_finite_index=c,
        d_counts_match=d,
        wjplus_index=index,
    )


def certify(
    source: Presentation,
    j: int,
    dprime: Optional[float] = None,
    hypothesis: ThresholdHypothesis = DEFAULT_HYPOTHESIS,
    threshold: float = DEFAULT_THRESHOLD,
) -> Certificate:
    """Run the full chain on one presentation and certify the result.

    dprime = None skips downsampling and keeps every positive relator
    (the certificate is then about the group actually sampled); a number
    keeps the first floor((2n-1)^(j*base_k*dprime)) of them, matching
    the relator count of a density-dprime model.  A deterministic, seed-
    free function of its arguments.
    """
    if j < 1:
        raise ValueError("j must be >= 1")
    length = source.relator_length()
    expected = j * hypothesis.base_k
    if length is not None and length != expected:
        raise WrongRelatorLength(
            f"relator length {length}, but j={j} and base_k={hypothesis.base_k} "
            f"need {expected}"
        )
    d_known = source.params.d if source.params is not None else None
    if dprime is not None:
        if not (hypothesis.d0 < dprime):
            raise ValueError(f"dprime {dprime} must exceed d0 {hypothesis.d0}")
        if d_known is not None and not (dprime < d_known):
            raise ValueError(f"dprime {dprime} must be below d {d_known}")

    pplus = positive_part(source)
    have = len(pplus.relators)
    if dprime is None:
        target = have
        gplus = pplus
    else:
        target = floor_power(2 * source.n - 1, j * hypothesis.base_k * dprime)
        gplus = downsample(pplus, target)  # raises InsufficientPositiveRelators
    regrouped = build_gamma(gplus, j)
    gamma = regrouped.gamma

    zuk = zuk_certify(gamma, threshold) if hypothesis.base_k == 3 else None
    generators = tuple(wjplus_generators(source.n, j))
    audit = _run_audit(gamma, regrouped, gplus, source, generators, target)
    certified = zuk is not None and zuk.certified and audit.all_true
    k_full = expected
    return Certificate(
        input_digest=source.digest(),
        input_n=source.n,
        input_relators=len(source.relators),
        input_relator_length=length,
        input_params=source.params,
        j=j,
        base_k=hypothesis.base_k,
        d0=hypothesis.d0,
        dprime=dprime,
        threshold=threshold,
        positive_relators=have,
        downsample_target=target,
        gplus=gplus,
        regrouped=regrouped,
        subgroup_generators=generators,
        density_input=_density(len(source.relators), k_full, source.n),
        density_positive=_density(have, k_full, source.n),
        density_downsampled=_density(target, k_full, source.n),
        density_gamma=_density(
            len(gamma.relators), hypothesis.base_k, regrouped.alphabet.m
        ),
        zuk=zuk,
        audit=audit,
        verdict="PropertyT" if certified else "Inconclusive",
    )


def chain_audit(cert: Certificate, source: Presentation) -> AuditReport:
    """Re-run the four audit checks of a certificate against the claimed
    input presentation.  Never raises; failures come back as falsified
    booleans."""
    return _run_audit(
        cert.gamma,
        cert.regrouped,
        cert.gplus,
        source,
        cert.subgroup_generators,
        cert.downsample_target,
    )


def _fmt(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_certificate(cert: Certificate) -> str:
    """Single self-contained text document; field order is fixed so two
    certificates diff cleanly."""
    lines = ["rglab certificate", ""]
    lines.append("[INPUT]")
    lines.append(f"n = {cert.input_n}")
    lines.append(f"relators = {cert.input_relators}")
    lines.append(f"relator_length = {_fmt(cert.input_relator_length)}")
    if cert.input_params is not None:
        p = cert.input_params
        lines.append(f"model = {p.name}")
        lines.append(f"seed = {p.seed}")
    else:
        lines.append("model = none")
        lines.append("seed = none")
    lines.append(f"digest = {cert.input_digest}")
    lines.append("")
    lines.append("[STAGES]")
    lines.append(f"j = {cert.j}")
    lines.append(f"base_k = {cert.base_k}")
    lines.append(f"d0 = {_fmt(cert.d0)}")
    lines.append(f"dprime = {_fmt(cert.dprime)}")
    lines.append(f"positive_relators = {cert.positive_relators}")
    lines.append(f"downsample_target = {cert.downsample_target}")
    lines.append(f"gplus_digest = {cert.gplus.digest()}")
    lines.append(f"gamma_rank = {cert.regrouped.alphabet.m}")
    lines.append(f"gamma_relators = {len(cert.gamma.relators)}")
    lines.append(f"gamma_digest = {cert.gamma.digest()}")
    lines.append(f"density_input = {_fmt(cert.density_input)}")
    lines.append(f"density_positive = {_fmt(cert.density_positive)}")
    lines.append(f"density_downsampled = {_fmt(cert.density_downsampled)}")
    lines.append(f"density_gamma = {_fmt(cert.density_gamma)}")
    lines.append("")
    lines.append("[SPECTRUM]")
    if cert.zuk is None:
        lines.append("evaluated = false")
    else:
        s = cert.zuk.spectrum
        lines.append("evaluated = true")
        lines.append(f"vertices = {s.n_vertices}")
        lines.append(f"edges = {s.edge_count}")
        lines.append(f"isolated = {len(s.isolated)}")
        lines.append(f"connected = {_fmt(s.connected)}")
        lines.append(f"multiplicity_of_zero = {s.multiplicity_of_zero}")
        lines.append(f"lambda1 = {_fmt(s.lambda1)}")
        lines.append(f"threshold = {_fmt(cert.threshold)}")
        lines.append(f"spectral_verdict = {cert.zuk.verdict}")
    lines.append("")
    lines.append("[AUDIT]")
    lines.append(
        f"a_gamma_decodes_into_gplus = {_fmt(cert.audit.a_gamma_decodes_into_gplus)}"
    )
    lines.append(
        f"b_gplus_relators_in_input = {_fmt(cert.audit.b_gplus_relators_in_input)}"
    )
    lines.append(
        f"c_wjplus_finite_index = {_fmt(cert.audit.c_wjplus_finite_index)}"
    )
    lines.append(f"wjplus_index = {_fmt(cert.audit.wjplus_index)}")
    lines.append(f"d_counts_match = {_fmt(cert.audit.d_counts_match)}")
    lines.append("")
    lines.append("[VERDICT]")
    lines.append(cert.verdict)
    return "\n".join(lines) + "\n"


EXPERIMENT_COLUMNS = [
    "trial",
    "n",
    "k",
    "j",
    "d",
    "dprime",
    "relators",
    "positive_relators",
    "target",
    "gamma_rank",
    "gamma_density_eff",
    "lambda1",
    "connected",
    "verdict",
    "error",
    "seed",
    "ms",
]


def _worker_count() -> int:
    env = os.environ.get("RG_LAB_THREADS", "").strip()
    if env:
        return max(1, int(env))
    return min(8, os.cpu_count() or 1)


def _trial_row(
    model: ModelParams,
    model_index: int,
    trial: int,
    j: int,
    dprime: Optional[float],
    master_seed: int,
    hypothesis: ThresholdHypothesis,
    threshold: float,
    timing: bool,
) -> dict[str, str]:
    seed = derive_seed(master_seed, model_index, trial)
    row = {column: "" for column in EXPERIMENT_COLUMNS}
    row.update(
        trial=str(trial),
        n=str(model.n),
        k=str(model.k),
        j=str(j),
        d=repr(model.d),
        dprime="" if dprime is None else repr(dprime),
        seed=str(seed),
    )
    started = time.perf_counter()
    try:
        pres = sample_presentation(replace(model, seed=seed))
        row["relators"] = str(len(pres.relators))
        cert = certify(pres, j, dprime, hypothesis, threshold)
        row["positive_relators"] = str(cert.positive_relators)
        row["target"] = str(cert.downsample_target)
        row["gamma_rank"] = str(cert.regrouped.alphabet.m)
        if cert.density_gamma is not None:
            row["gamma_density_eff"] = repr(cert.density_gamma)
        if cert.lambda1 is not None:
            row["lambda1"] = repr(cert.lambda1)
        if cert.zuk is not None:
            row["connected"] = str(cert.zuk.spectrum.connected).lower()
        row["verdict"] = cert.verdict
    except (RGLabError, OverflowError, ValueError) as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
    if timing:
        row["ms"] = str(int((time.perf_counter() - started) * 1000))
    return row


def experiment(
    models: Sequence[ModelParams],
    j: int,
    dprime: Optional[float],
    trials: int,
    master_seed: int,
    hypothesis: ThresholdHypothesis = DEFAULT_HYPOTHESIS,
    threshold: float = DEFAULT_THRESHOLD,
    timing: bool = False,
    max_workers: Optional[int] = None,
) -> str:
    """Run trials x models through the chain; return the CSV table.

    Each trial samples with an RNG stream derived from (master_seed,
    model index, trial index), so the table is a pure function of its
    arguments (timing disabled) regardless of worker count.  Individual
    trial failures become rows with the error column set; they never
    abort the sweep.
    """
    if trials < 0:
        raise ValueError("trials must be >= 0")
    tasks = [
        (mi, trial) for mi in range(len(models)) for trial in range(trials)
    ]
    workers = max_workers if max_workers is not None else _worker_count()

    def run(task: tuple[int, int]) -> dict[str, str]:
        mi, trial = task
        return _trial_row(
            models[mi], mi, trial, j, dprime, master_seed,
            hypothesis, threshold, timing,
        )

    if workers > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run, tasks))
    else:
        rows = [run(task) for task in tasks]

    out = io.StringIO()
    writer = csv.DictWriter(out, fieldnames=EXPERIMENT_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return out.getvalue()


def parse_family(family: str) -> tuple[int, bool]:
    """Model-family shorthand: ``pos<k>`` is the positive k-gonal model,
    ``m<k>`` / ``mix<k>`` the mixed-sign one.

    >>> parse_family("pos3")
    (3, True)
    >>> parse_family("m6")
    (6, False)
    """
    match = re.fullmatch(r"(pos|mix|m)([0-9]+)", family.strip())
    if match is None:
        raise ValueError(f"unknown model family {family!r} (want pos<k> or m<k>)")
    k = int(match.group(2))
    if k < 1:
        raise ValueError("relator length in family name must be >= 1")
    return k, match.group(1) == "pos"


def model_grid(
    family: str, ns: Sequence[int], ds: Sequence[float]
) -> list[ModelParams]:
    """Cross product of ranks and densities for one model family."""
    k, positive = parse_family(family)
    return [
        ModelParams(n=n, k=k, d=d, positive=positive) for n in ns for d in ds
    ]


def certification_rates(csv_text: str) -> dict[tuple[int, float], float]:
    """Fraction of PropertyT verdicts per (n, d), from an experiment CSV."""
    totals: dict[tuple[int, float], list[int]] = {}
    for row in csv.DictReader(io.StringIO(csv_text)):
        key = (int(row["n"]), float(row["d"]))
        hit, seen = totals.setdefault(key, [0, 0])
        totals[key][1] = seen + 1
        totals[key][0] = hit + (1 if row["verdict"] == "PropertyT" else 0)
    return {key: hit / seen for key, (hit, seen) in totals.items()}
