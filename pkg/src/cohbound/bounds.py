"""Strengthened superadditivity bounds for powers of the l1-norm of coherence.

Every bound is a weighted sum of marginal coherences ``C[i]**(alpha*beta)``
with weights that are powers of one coefficient

    q(alpha, x) = ((1 + x)**alpha - 1) / x**alpha,      0 < x <= 1,

where ``x = k**delta``. The admissible ``x`` for a profile is decided by ratio
conditions between each marginal ``C[i]`` and the tail ``T[i]`` behind it.

Two readings of the conditions on the parties after the split index ``m`` are
supported:

``"printed"``
    ``C[j]**beta <= T[j]**beta / x``: an upper bound on ``x``. This is the
    default and the contract the rest of the package is tested against.
``"proof"``
    ``C[j]**beta <= x * T[j]**beta``: a lower bound on ``x``. This is what the
    telescoping argument needs for the ``q``-weighted tail terms; the printed
    reading admits product states that violate the partition bound (see
    ``tests/test_bounds.py::test_printed_tail_condition_counterexample``).
"""
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError, InputError, PreconditionError

PRINTED = "printed"
PROOF = "proof"
HYPOTHESES = (PRINTED, PROOF)

FEAS_TOL = 1e-9
X_FLOOR = 1e-6
GRID_POINTS = 16

VARIANTS = (
    "eq4",
    "eq5",
    "thm1",
    "thm2_as_printed",
    "thm2_proof_consistent",
    "thm3",
    "thm4_as_printed",
    "thm4_proof_consistent",
    "plain_superadditivity",
)


@dataclass(frozen=True)
class BoundParams:
    alpha: float
    beta: float
    k: float
    delta: float
    x: float
    m: int

    def __post_init__(self):
        if not self.alpha >= 1:
            raise DomainError(f"alpha must be >= 1, got {self.alpha}")
        if not self.beta >= 1:
            raise DomainError(f"beta must be >= 1, got {self.beta}")
        if not 0 < self.k <= 1:
            raise DomainError(f"k must lie in (0, 1], got {self.k}")
        if not self.delta >= 1:
            raise DomainError(f"delta must be >= 1, got {self.delta}")
        if not 0 < self.x <= 1:
            raise DomainError(f"x must lie in (0, 1], got {self.x}")
        if abs(self.k**self.delta - self.x) > 1e-12:
            raise DomainError("x must equal k**delta")
        if int(self.m) != self.m or self.m < 1:
            raise DomainError(f"m must be a positive integer, got {self.m}")

    @classmethod
    def make(cls, alpha, beta=1.0, k=None, delta=None, x=None, m=1):
        """Build params from either ``x`` or ``(k, delta)``; ``(k, delta) = (x, 1)`` by default."""
        if x is not None and (k is not None or delta is not None):
            raise InputError("give either x or k/delta, not both")
        if x is None:
            if k is None:
                raise InputError("one of x or k is required")
            delta = 1.0 if delta is None else float(delta)
            x = float(k) ** delta
        else:
            k, delta = float(x), 1.0
        return cls(float(alpha), float(beta), float(k), float(delta), float(x), int(m))


@dataclass(frozen=True)
class FeasibleInterval:
    lo: float
    hi: float
    feasible: bool

    @property
    def upper(self):
        return min(self.hi, 1.0)

    def contains(self, x, tol=FEAS_TOL):
        return self.feasible and self.lo - tol <= x <= self.hi + tol


@dataclass(frozen=True)
class BoundValue:
    value: float
    variant: str
    params: BoundParams | None


@dataclass(frozen=True)
class OptimizeResult:
    best: BoundValue | None
    m: int | None
    x: float | None
    intervals: tuple

    @property
    def feasible(self):
        return self.best is not None


@dataclass(frozen=True)
class ChainLink:
    """One inequality of the telescoping chain: ``lhs >= rhs``.

    ``residual = lhs - rhs`` splits into the slack from bipartite
    superadditivity and the slack from the scalar inequality.
    """

    step: int
    stage: str
    lhs: float
    rhs: float
    residual: float
    superadditivity_slack: float
    lemma_slack: float


def q_coeff(alpha, x):
    if not alpha >= 1:
        raise DomainError(f"alpha must be >= 1, got {alpha}")
    if not 0 < x <= 1:
        raise DomainError(f"x must lie in (0, 1], got {x}")
    if alpha == 1:
        return 1.0
    if x == 1:
        return 2.0**alpha - 1.0
    return math.expm1(alpha * math.log1p(x)) / x**alpha


def scalar_lemma_gap(alpha, x, t):
    """``(1+t)**alpha - 1 - q(alpha, x) * t**alpha``; nonnegative for ``0 <= t <= x``."""
    if t < 0 or t > x:
        raise DomainError(f"t must lie in [0, x] = [0, {x}], got {t}")
    q = q_coeff(alpha, x)
    return math.expm1(alpha * math.log1p(t)) - q * t**alpha


def _ratio(num, den, zero_over_zero):
    if den == 0:
        return math.inf if num > 0 else zero_over_zero
    return num / den


def _check_hypotheses(hypotheses):
    if hypotheses not in HYPOTHESES:
        raise InputError(f"hypotheses must be one of {HYPOTHESES}, got {hypotheses!r}")


def partition_and_feasibility(profile, beta=1.0, hypotheses=PRINTED):
    """Feasible ``x`` interval for every split index ``m = 1..n-2`` (list index ``m-1``)."""
    _check_hypotheses(hypotheses)
    n = profile.n
    if n < 3:
        raise InputError("partition conditions need at least three parties")
    if not beta >= 1:
        raise DomainError(f"beta must be >= 1, got {beta}")
    C, T = profile.C, profile.T
    # leading family: x >= (T/C)**beta; 0/0 imposes nothing
    lower = [_ratio(T[i], C[i], 0.0) ** beta for i in range(n - 1)]
    if hypotheses == PRINTED:
        # x <= (T/C)**beta; 0/0 imposes nothing
        tail = [_ratio(T[j], C[j], math.inf) ** beta for j in range(n - 1)]
    else:
        # x >= (C/T)**beta
        tail = [_ratio(C[j], T[j], 0.0) ** beta for j in range(n - 1)]
    out = []
    for m in range(1, n - 1):
        if hypotheses == PRINTED:
            lo = max(lower[:m])
            hi = min(tail[m:])
        else:
            lo = max(lower[:m] + tail[m:])
            hi = math.inf
        feasible = lo <= min(hi, 1.0) + FEAS_TOL and hi > 0
        out.append(FeasibleInterval(lo, hi, feasible))
    return out


def leading_interval(profile, beta=1.0):
    """Feasible ``x`` when the leading condition holds for all ``i = 1..n-2``."""
    n = profile.n
    if n < 3:
        raise InputError("partition conditions need at least three parties")
    lo = max(_ratio(profile.T[i], profile.C[i], 0.0) ** beta for i in range(n - 2))
    return FeasibleInterval(lo, math.inf, lo <= 1.0 + FEAS_TOL)


def _powers(profile, alpha, beta):
    p = alpha * beta
    return [c**p for c in profile.C]


def _partition_sum(cp, q, m):
    n = len(cp)
    head = sum(q**i * cp[i] for i in range(m))
    middle = sum(cp[m : n - 1])
    return head + q ** (m + 1) * middle + q**m * cp[n - 1]


def _as_printed_sum(cp, q):
    n = len(cp)
    return sum(q**i * cp[i] for i in range(n - 1)) + q ** (n - 1) * cp[n - 1]


def _proof_consistent_sum(cp, q):
    n = len(cp)
    head = sum(q**i * cp[i] for i in range(n - 2))
    return head + q ** (n - 2) * (cp[n - 2] + cp[n - 1])


def _check_m(profile, m):
    if not 1 <= m <= profile.n - 2:
        raise InputError(f"m must lie in [1, {profile.n - 2}], got {m}")


def _require(interval, x, what):
    if not interval.contains(x):
        raise PreconditionError(
            f"{what}: x = {x!r} outside feasible interval "
            f"[{interval.lo!r}, {interval.upper!r}] (feasible={interval.feasible})",
            interval,
        )


def _partition_bound(profile, params, variant, hypotheses, check):
    _check_m(profile, params.m)
    if check:
        interval = partition_and_feasibility(profile, params.beta, hypotheses)[params.m - 1]
        _require(interval, params.x, variant)
    q = q_coeff(params.alpha, params.x)
    value = _partition_sum(_powers(profile, params.alpha, params.beta), q, params.m)
    return BoundValue(value, variant, params)


def thm1_bound(profile, params, hypotheses=PRINTED, check=True):
    """Partition bound on ``full**alpha`` at split index ``params.m`` (beta forced to 1)."""
    return _partition_bound(profile, replace(params, beta=1.0), "thm1", hypotheses, check)


def thm3_bound(profile, params, hypotheses=PRINTED, check=True):
    """Partition bound on ``full**(alpha*beta)`` under the beta-powered conditions."""
    return _partition_bound(profile, params, "thm3", hypotheses, check)


def _leading_bound(profile, params, variant, tag, check):
    if profile.n < 3:
        raise InputError("needs at least three parties")
    params = replace(params, m=profile.n - 2)
    if check:
        _require(leading_interval(profile, params.beta), params.x, f"{tag}_{variant}")
    q = q_coeff(params.alpha, params.x)
    cp = _powers(profile, params.alpha, params.beta)
    if variant == "as_printed":
        value = _as_printed_sum(cp, q)
    elif variant == "proof_consistent":
        value = _proof_consistent_sum(cp, q)
    else:
        raise InputError(f"variant must be 'as_printed' or 'proof_consistent', got {variant!r}")
    return BoundValue(value, f"{tag}_{variant}", params)


def thm2_bound(profile, params, variant="proof_consistent", check=True):
    """Bound when every leading condition ``i = 1..n-2`` holds (``m = n-2``).

    ``as_printed`` weights ``C[i]`` by ``q**(i-1)`` up to ``i = n-1`` and
    ``C[n]`` by ``q**(n-1)``; ``proof_consistent`` gives the last two parties
    the common weight ``q**(n-2)``, which is all the telescoping chain supports
    without a further condition on the last pair.
    """
    return _leading_bound(profile, replace(params, beta=1.0), variant, "thm2", check)


def thm4_bound(profile, params, variant="proof_consistent", check=True):
    return _leading_bound(profile, params, variant, "thm4", check)


def prior_bound_eq4(profile, alpha, m, check=True):
    """Partition bound with ``q = 2**alpha - 1``; requires ``C[j] <= T[j]`` for ``j > m``."""
    _check_m(profile, m)
    params = BoundParams.make(alpha, k=1.0, delta=1.0, m=m)
    if check:
        bad = [j + 1 for j in range(m, profile.n - 1) if profile.C[j] > profile.T[j] + FEAS_TOL]
        if bad:
            raise PreconditionError(f"eq4: C[j] > T[j] for j in {bad}")
    q = q_coeff(alpha, 1.0)
    return BoundValue(_partition_sum(_powers(profile, alpha, 1.0), q, m), "eq4", params)


def prior_bound_eq5(profile, alpha, k, m, pattern="partition", hypotheses=PRINTED, check=True):
    """Earlier strengthened bound with coefficient ``q(alpha, k)``.

    ``pattern="as_printed"`` uses the all-leading weighting (``m = n-2``) that
    the three-qubit comparison curve is drawn with.
    """
    params = BoundParams.make(alpha, k=k, delta=1.0, m=m)
    if pattern == "as_printed":
        bv = _leading_bound(profile, params, "as_printed", "eq5", check)
        return BoundValue(bv.value, "eq5", bv.params)
    if pattern != "partition":
        raise InputError(f"pattern must be 'partition' or 'as_printed', got {pattern!r}")
    bv = _partition_bound(profile, params, "eq5", hypotheses, check)
    return bv


def plain_superadditivity(profile):
    return BoundValue(float(sum(profile.C)), "plain_superadditivity", None)


def candidate_xs(interval, floor=X_FLOOR, points=GRID_POINTS):
    """Lower endpoint of a feasible interval plus a geometric grid up to its top."""
    if not interval.feasible:
        return []
    upper = interval.upper
    x0 = min(max(interval.lo, floor), upper)
    if x0 <= 0:
        return []
    if x0 >= upper:
        return [x0]
    grid = np.geomspace(x0, upper, points + 1)[1:]
    return [x0] + [float(g) for g in grid]


def optimize_bound(profile, alpha, beta=1.0, hypotheses=PRINTED):
    """Largest partition bound over every feasible ``(m, x)``; ties go to the smaller ``m``."""
    intervals = partition_and_feasibility(profile, beta, hypotheses)
    variant = "thm1" if beta == 1 else "thm3"
    best = None
    best_m = best_x = None
    for m, interval in enumerate(intervals, start=1):
        for x in candidate_xs(interval):
            params = BoundParams.make(alpha, beta, x=x, m=m)
            value = _partition_sum(_powers(profile, alpha, beta), q_coeff(alpha, x), m)
            if best is None or value > best.value:
                best = BoundValue(value, variant, params)
                best_m, best_x = m, x
    return OptimizeResult(best, best_m, best_x, tuple(intervals))


def chain_links(profile, params, pattern="partition", hypotheses=PRINTED, check=True):
    """Residual of every step of the telescoping chain behind a bound.

    ``pattern="partition"`` follows the split at ``params.m``;
    ``"proof_consistent"`` peels every leading party and closes with plain
    superadditivity on the last pair.
    """
    n = profile.n
    alpha, beta = params.alpha, params.beta
    if pattern == "proof_consistent":
        params = replace(params, m=n - 2)
        if check:
            _require(leading_interval(profile, beta), params.x, "chain")
    elif pattern == "partition":
        _check_m(profile, params.m)
        if check:
            interval = partition_and_feasibility(profile, beta, hypotheses)[params.m - 1]
            _require(interval, params.x, "chain")
    else:
        raise InputError(f"unknown chain pattern {pattern!r}")
    m = params.m
    q = q_coeff(alpha, params.x)
    c = [v**beta for v in profile.C]
    tau = [profile.full**beta] + [v**beta for v in profile.T]

    links = []
    for i in range(1, m + 1):
        w = q ** (i - 1)
        joined = (c[i - 1] + tau[i]) ** alpha
        sup = w * (tau[i - 1] ** alpha - joined)
        lem = w * (joined - c[i - 1] ** alpha - q * tau[i] ** alpha)
        lhs = w * tau[i - 1] ** alpha
        rhs = w * (c[i - 1] ** alpha + q * tau[i] ** alpha)
        links.append(ChainLink(i, "leading", lhs, rhs, lhs - rhs, sup, lem))
    if pattern == "proof_consistent":
        w = q ** (n - 2)
        lhs = w * tau[n - 2] ** alpha
        rhs = w * (c[n - 2] ** alpha + c[n - 1] ** alpha)
        joined = (c[n - 2] + c[n - 1]) ** alpha
        sup = w * (tau[n - 2] ** alpha - joined)
        links.append(ChainLink(n - 1, "closing", lhs, rhs, lhs - rhs, sup, w * (joined - c[n - 2] ** alpha - c[n - 1] ** alpha)))
        return links
    w = q**m
    for j in range(m + 1, n):
        joined = (c[j - 1] + tau[j]) ** alpha
        sup = w * (tau[j - 1] ** alpha - joined)
        lem = w * (joined - q * c[j - 1] ** alpha - tau[j] ** alpha)
        lhs = w * tau[j - 1] ** alpha
        rhs = w * (q * c[j - 1] ** alpha + tau[j] ** alpha)
        links.append(ChainLink(j, "tail", lhs, rhs, lhs - rhs, sup, lem))
    return links


def chain_audit(rho, params, ordering=None, pattern="partition", hypotheses=PRINTED):
    """Chain residuals computed from the actual marginals of ``rho``."""
    from .coherence import coherence_profile

    return chain_links(coherence_profile(rho, ordering), params, pattern, hypotheses)
