"""Randomized verification campaigns over seeded ensembles.

A campaign turns every (state, ordering, bound, parameter point) into an
:class:`AuditRecord` and folds the records, in sample order, into a
:class:`CampaignReport`. Work can be spread over processes with ``workers``;
results are reassembled in sample order, so the report does not depend on it.
"""
import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import bounds as B
from .coherence import c_l1, coherence_profile
from .ensembles import (
    SeedSpec,
    paper_example_state,
    random_density,
    random_product_pure,
    random_pure,
)
from .errors import InputError, PreconditionError
from .qmatrix import as_density, partial_trace, pure_to_density

VIOLATION_THRESHOLD = -1e-9
ENSEMBLES = ("pure", "ginibre", "product")
QUANTILES = (0.0, 0.05, 0.25, 0.5, 0.75, 0.95, 1.0)

# findings about the published statements, not engine faults
AS_PRINTED_COEFFICIENTS = "as_printed_coefficients"
PRINTED_TAIL_CONDITION = "printed_tail_condition"

CSV_COLUMNS = (
    "state_id",
    "ordering",
    "variant",
    "alpha",
    "beta",
    "x",
    "m",
    "claimed",
    "actual",
    "residual",
    "verdict",
)
SWEEP_COLUMNS = ("alpha", "y1", "y2", "actual_pow", "thm1_proof_consistent")


@dataclass(frozen=True)
class EnsembleSpec:
    kind: str
    seed: int
    rank: int | None = None

    def __post_init__(self):
        if self.kind not in ENSEMBLES:
            raise InputError(f"ensemble must be one of {ENSEMBLES}, got {self.kind!r}")

    def state(self, n, index):
        s = SeedSpec(self.seed, index)
        if self.kind == "pure":
            return pure_to_density(random_pure(n, s))
        if self.kind == "product":
            return pure_to_density(random_product_pure(n, s))
        return random_density(n, self.rank or 2**n, s)

    def state_id(self, index):
        tag = self.kind if self.rank is None else f"{self.kind}{self.rank}"
        return f"{tag}:{self.seed}:{index}"


@dataclass(frozen=True)
class AuditRecord:
    state_id: str
    ordering: tuple
    variant: str
    alpha: float
    beta: float
    x: float
    m: int
    claimed: float
    actual: float
    residual: float
    verdict: str
    finding: str = ""
    params: B.BoundParams | None = field(default=None, compare=False)

    def csv_row(self):
        return [
            self.state_id,
            " ".join(str(o) for o in self.ordering),
            self.variant,
            _fmt(self.alpha),
            _fmt(self.beta),
            _fmt(self.x),
            str(self.m),
            _fmt(self.claimed),
            _fmt(self.actual),
            _fmt(self.residual),
            self.verdict,
        ]


def _fmt(v):
    if isinstance(v, float) and math.isnan(v):
        return "nan"
    return repr(float(v))


def _json_float(v):
    if v is None or (isinstance(v, float) and not math.isfinite(v)):
        return None
    return float(v)


def judged(state_id, ordering, bound, actual, finding_if_violated=""):
    """Record for a feasible bound evaluation."""
    p = bound.params
    residual = actual - bound.value
    violated = residual < VIOLATION_THRESHOLD
    return AuditRecord(
        state_id,
        tuple(ordering),
        bound.variant,
        p.alpha if p else 1.0,
        p.beta if p else 1.0,
        p.x if p else 1.0,
        p.m if p else 0,
        bound.value,
        actual,
        residual,
        "violated" if violated else "holds",
        finding_if_violated if violated else "",
        p,
    )


def infeasible(state_id, ordering, variant, alpha, beta, m, actual):
    nan = math.nan
    return AuditRecord(
        state_id, tuple(ordering), variant, alpha, beta, nan, m, nan, actual, nan, "infeasible"
    )


@dataclass(frozen=True)
class CampaignReport:
    total: int
    holds: int
    violated: int
    infeasible: int
    min_residual: float | None
    tightness_stats: dict
    by_variant: dict
    discrepancies: tuple

    @property
    def unexplained_violations(self):
        return self.violated - len(self.discrepancies)

    def to_dict(self):
        return {
            "total": self.total,
            "holds": self.holds,
            "violated": self.violated,
            "infeasible": self.infeasible,
            "min_residual": _json_float(self.min_residual),
            "tightness_stats": {k: _json_float(v) for k, v in self.tightness_stats.items()},
            "by_variant": self.by_variant,
            "paper_discrepancies": list(self.discrepancies),
            "unexplained_violations": self.unexplained_violations,
        }


@dataclass(frozen=True)
class Campaign:
    report: CampaignReport
    records: tuple


def summarize(records):
    """Sequential fold of records into a report."""
    counts = {"holds": 0, "violated": 0, "infeasible": 0}
    by_variant = {}
    min_res = None
    ratios = []
    discrepancies = []
    for r in records:
        counts[r.verdict] += 1
        v = by_variant.setdefault(r.variant, {"holds": 0, "violated": 0, "infeasible": 0})
        v[r.verdict] += 1
        if r.verdict != "infeasible":
            if min_res is None or r.residual < min_res:
                min_res = r.residual
        if r.verdict == "holds" and r.actual > 0:
            ratios.append(r.claimed / r.actual)
        if r.verdict == "violated" and r.finding:
            discrepancies.append(
                {
                    "state_id": r.state_id,
                    "ordering": list(r.ordering),
                    "variant": r.variant,
                    "finding": r.finding,
                    "alpha": r.alpha,
                    "beta": r.beta,
                    "x": r.x,
                    "m": r.m,
                    "claimed": r.claimed,
                    "actual": r.actual,
                    "residual": r.residual,
                }
            )
    if ratios:
        qs = np.quantile(np.array(ratios), QUANTILES)
        stats = {f"q{int(round(100 * p)):02d}": float(v) for p, v in zip(QUANTILES, qs)}
    else:
        stats = {f"q{int(round(100 * p)):02d}": None for p in QUANTILES}
    return CampaignReport(
        len(records),
        counts["holds"],
        counts["violated"],
        counts["infeasible"],
        min_res,
        stats,
        {k: by_variant[k] for k in sorted(by_variant)},
        tuple(discrepancies),
    )


def _run(worker, args_list, workers):
    if workers <= 1 or len(args_list) <= 1:
        return [worker(*a) for a in args_list]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(worker, *zip(*args_list)))


def _chunks(samples, workers):
    size = max(1, math.ceil(samples / max(1, workers * 4)))
    return [(lo, min(samples, lo + size)) for lo in range(0, samples, size)]


def _orderings(n, all_orderings):
    if not all_orderings:
        return [tuple(range(1, n + 1))]
    if n > 5:
        raise InputError("ordering search is limited to n <= 5")
    return list(itertools.permutations(range(1, n + 1)))


# superadditivity ------------------------------------------------------------


def superadditivity_records(rho, state_id):
    rho = as_density(rho)
    n = rho.n_qubits
    profile = coherence_profile(rho)
    full = profile.full
    out = [judged(state_id, profile.ordering, B.plain_superadditivity(profile), full)]
    for i in range(1, n + 1):
        rest = [j for j in range(1, n + 1) if j != i]
        claimed = profile.C[i - 1] + (c_l1(partial_trace(rho, rest)) if rest else 0.0)
        bound = B.BoundValue(claimed, f"bipartite_q{i}", None)
        out.append(judged(state_id, profile.ordering, bound, full))
    return out


def _superadditivity_chunk(ensemble, n, lo, hi):
    out = []
    for i in range(lo, hi):
        out.extend(superadditivity_records(ensemble.state(n, i), ensemble.state_id(i)))
    return out


def verify_superadditivity(ensemble, n, samples, workers=1):
    """Full-sum and every qubit-vs-rest split on ``samples`` states."""
    if not 2 <= n <= 8:
        raise InputError(f"n must lie in [2, 8], got {n}")
    parts = _run(
        _superadditivity_chunk,
        [(ensemble, n, lo, hi) for lo, hi in _chunks(samples, workers)],
        workers,
    )
    records = tuple(r for part in parts for r in part)
    return Campaign(summarize(records), records)


# theorem campaigns ----------------------------------------------------------


def theorem_records(profile, state_id, alphas, betas=(1.0,), hypotheses=B.PRINTED):
    """Audit every feasible bound variant of one profile on the parameter grids."""
    ordering = profile.ordering
    n = profile.n
    out = []
    betas = tuple(float(b) for b in betas)
    partition = {b: B.partition_and_feasibility(profile, b, hypotheses) for b in set(betas) | {1.0}}
    proof = {b: B.partition_and_feasibility(profile, b, B.PROOF) for b in partition}
    leading = {b: B.leading_interval(profile, b) for b in partition}

    def partition_family(variant, alpha, beta, evaluator):
        actual = profile.full ** (alpha * beta)
        for m, interval in enumerate(partition[beta], start=1):
            if not interval.feasible:
                out.append(infeasible(state_id, ordering, variant, alpha, beta, m, actual))
                continue
            for x in B.candidate_xs(interval):
                params = B.BoundParams.make(alpha, beta, x=x, m=m)
                bound = evaluator(profile, params, hypotheses=hypotheses, check=False)
                finding = "" if proof[beta][m - 1].contains(x) else PRINTED_TAIL_CONDITION
                out.append(judged(state_id, ordering, bound, actual, finding))

    def leading_family(tag, alpha, beta, evaluator):
        actual = profile.full ** (alpha * beta)
        interval = leading[beta]
        for variant in ("as_printed", "proof_consistent"):
            name = f"{tag}_{variant}"
            if not interval.feasible:
                out.append(infeasible(state_id, ordering, name, alpha, beta, n - 2, actual))
                continue
            finding = AS_PRINTED_COEFFICIENTS if variant == "as_printed" else ""
            for x in B.candidate_xs(interval):
                params = B.BoundParams.make(alpha, beta, x=x, m=n - 2)
                bound = evaluator(profile, params, variant, check=False)
                out.append(judged(state_id, ordering, bound, actual, finding))

    for alpha in alphas:
        alpha = float(alpha)
        partition_family("thm1", alpha, 1.0, B.thm1_bound)
        leading_family("thm2", alpha, 1.0, B.thm2_bound)
        for beta in betas:
            partition_family("thm3", alpha, beta, B.thm3_bound)
            leading_family("thm4", alpha, beta, B.thm4_bound)
    return out


def _theorem_chunk(ensemble, n, lo, hi, alphas, betas, all_orderings, hypotheses):
    out = []
    for i in range(lo, hi):
        rho = ensemble.state(n, i)
        sid = ensemble.state_id(i)
        for ordering in _orderings(n, all_orderings):
            profile = coherence_profile(rho, ordering)
            out.extend(theorem_records(profile, sid, alphas, betas, hypotheses))
    return out


def verify_theorems(
    ensemble,
    n,
    samples,
    alphas=(1.0, 1.5, 2.0, 3.0),
    betas=(1.0,),
    all_orderings=False,
    hypotheses=B.PRINTED,
    workers=1,
):
    if n < 3:
        raise InputError(f"theorem campaigns need n >= 3, got {n}")
    args = [
        (ensemble, n, lo, hi, tuple(alphas), tuple(betas), all_orderings, hypotheses)
        for lo, hi in _chunks(samples, workers)
    ]
    parts = _run(_theorem_chunk, args, workers)
    records = tuple(r for part in parts for r in part)
    return Campaign(summarize(records), records)


# tightness ------------------------------------------------------------------


@dataclass(frozen=True)
class TightnessTable:
    count: int
    min_ratio: float | None
    quantiles: dict
    per_alpha: dict

    def to_dict(self):
        return {
            "count": self.count,
            "min_ratio": _json_float(self.min_ratio),
            "quantiles": {k: _json_float(v) for k, v in self.quantiles.items()},
            "per_alpha": self.per_alpha,
        }


def tightness_ratios(profile, alpha, delta=2.0, hypotheses=B.PRINTED):
    """Ratios thm1(x) / eq5(k) with ``x = k**delta`` wherever both are feasible at the same ``m``."""
    ratios = []
    for m, interval in enumerate(B.partition_and_feasibility(profile, 1.0, hypotheses), start=1):
        for x in B.candidate_xs(interval):
            k = x ** (1.0 / delta)
            if not interval.contains(k):
                continue
            params = B.BoundParams.make(alpha, k=k, delta=delta, m=m)
            ours = B.thm1_bound(profile, params, hypotheses, check=False).value
            prior = B.prior_bound_eq5(profile, alpha, k, m, hypotheses=hypotheses, check=False).value
            if prior == 0.0:
                ratios.append(1.0 if ours == 0.0 else math.inf)
            else:
                ratios.append(ours / prior)
    return ratios


def tightness_compare(ensemble, n, samples, alphas=(1.0, 1.5, 2.0, 3.0), delta=2.0, hypotheses=B.PRINTED):
    if n < 3:
        raise InputError(f"tightness comparison needs n >= 3, got {n}")
    per_alpha = {}
    everything = []
    for alpha in alphas:
        rs = []
        for i in range(samples):
            rs.extend(tightness_ratios(coherence_profile(ensemble.state(n, i)), alpha, delta, hypotheses))
        per_alpha[repr(float(alpha))] = {
            "count": len(rs),
            "min_ratio": _json_float(min(rs)) if rs else None,
        }
        everything.extend(rs)
    if everything:
        qs = np.quantile(np.array(everything), QUANTILES)
        quantiles = {f"q{int(round(100 * p)):02d}": float(v) for p, v in zip(QUANTILES, qs)}
    else:
        quantiles = {f"q{int(round(100 * p)):02d}": None for p in QUANTILES}
    return TightnessTable(len(everything), min(everything) if everything else None, quantiles, per_alpha)


# Fig. 1 ---------------------------------------------------------------------


@dataclass(frozen=True)
class SweepRow:
    alpha: float
    y1: float
    y2: float
    actual_pow: float
    thm1_proof_consistent: float

    def csv_row(self):
        return [_fmt(getattr(self, c)) for c in SWEEP_COLUMNS]


def y1_closed_form(alpha):
    return 1.0 + ((41 / 25) ** alpha - 1.0) ** 2 * (375 / 256) ** alpha


def y2_closed_form(alpha):
    return 1.0 + ((9 / 5) ** alpha - 1.0) ** 2 * (15 / 16) ** alpha


def alpha_grid(alpha_min, alpha_max, step):
    if not 1 <= alpha_min <= alpha_max:
        raise InputError("need 1 <= alpha_min <= alpha_max")
    if not step > 0:
        raise InputError("step must be positive")
    count = int(math.floor((alpha_max - alpha_min) / step + 1e-9)) + 1
    return [round(alpha_min + i * step, 12) for i in range(count)]


def fig1_sweep(alpha_min=1.0, alpha_max=3.0, step=0.1):
    """Comparison curves for the three-qubit example (x = 0.64 against k = 0.8)."""
    rho = pure_to_density(paper_example_state())
    profile = coherence_profile(rho)
    full = c_l1(rho)
    rows = []
    for alpha in alpha_grid(alpha_min, alpha_max, step):
        params = B.BoundParams.make(alpha, k=0.8, delta=2.0, m=1)
        engine = B.thm1_bound(profile, params).value
        rows.append(SweepRow(alpha, y1_closed_form(alpha), y2_closed_form(alpha), full**alpha, engine))
    return rows


# single-state audit ---------------------------------------------------------


def audit_profile(profile, state_id, params, k_prior=None, m=None, hypotheses=B.PRINTED):
    """Every bound variant for one profile at one parameter point.

    Returns ``(records, chains)`` where ``chains`` maps a label to the list of
    :class:`~cohbound.bounds.ChainLink` for each feasible chain.
    """
    n = profile.n
    alpha, beta = params.alpha, params.beta
    ordering = profile.ordering
    k_prior = params.k if k_prior is None else k_prior
    records = [judged(state_id, ordering, B.plain_superadditivity(profile), profile.full)]
    chains = {}
    if n < 3:
        return records, chains
    ms = [m] if m is not None else list(range(1, n - 1))
    proof1 = B.partition_and_feasibility(profile, 1.0, B.PROOF)
    proofb = B.partition_and_feasibility(profile, beta, B.PROOF)

    def attempt(variant, m_, beta_, fn, finding=""):
        actual = profile.full ** (alpha * beta_)
        try:
            bound = fn()
        except PreconditionError:
            records.append(infeasible(state_id, ordering, variant, alpha, beta_, m_, actual))
            return None
        records.append(judged(state_id, ordering, bound, actual, finding))
        return bound

    for m_ in ms:
        attempt("eq4", m_, 1.0, lambda: B.prior_bound_eq4(profile, alpha, m_))
        tail_eq5 = "" if proof1[m_ - 1].contains(k_prior) else PRINTED_TAIL_CONDITION
        attempt("eq5", m_, 1.0, lambda: B.prior_bound_eq5(profile, alpha, k_prior, m_, hypotheses=hypotheses), tail_eq5)
        pm = B.BoundParams(alpha, 1.0, params.k, params.delta, params.x, m_)
        tail1 = "" if proof1[m_ - 1].contains(params.x) else PRINTED_TAIL_CONDITION
        if attempt("thm1", m_, 1.0, lambda: B.thm1_bound(profile, pm, hypotheses), tail1):
            chains[f"thm1 m={m_}"] = B.chain_links(profile, pm, "partition", hypotheses)
        pb = B.BoundParams(alpha, beta, params.k, params.delta, params.x, m_)
        tailb = "" if proofb[m_ - 1].contains(params.x) else PRINTED_TAIL_CONDITION
        attempt("thm3", m_, beta, lambda: B.thm3_bound(profile, pb, hypotheses), tailb)

    p1 = B.BoundParams(alpha, 1.0, params.k, params.delta, params.x, n - 2)
    pb = B.BoundParams(alpha, beta, params.k, params.delta, params.x, n - 2)
    for variant in ("as_printed", "proof_consistent"):
        finding = AS_PRINTED_COEFFICIENTS if variant == "as_printed" else ""
        attempt(f"thm2_{variant}", n - 2, 1.0, lambda: B.thm2_bound(profile, p1, variant), finding)
        attempt(f"thm4_{variant}", n - 2, beta, lambda: B.thm4_bound(profile, pb, variant), finding)
    if B.leading_interval(profile, 1.0).contains(params.x):
        chains["thm2_proof_consistent"] = B.chain_links(profile, p1, "proof_consistent")
    return records, chains
