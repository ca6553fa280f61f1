"""Random code construction and success-probability estimates.

Theoretical lower bounds are compared against Monte-Carlo frequencies.  A
trial's randomness comes from ``default_rng([seed, index])`` so any trial
can be replayed alone and trials may run in any order or in parallel.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import comb

import numpy as np
from scipy.stats import binomtest

from .code import NecCode
from .errors import DomainError, EnumerationLimitError, UsageError
from .ff import FieldMatrix, FieldSpec
from .metrics import DistanceReport, compute_Q, verify_mds
from .topology import Network, rt_sum
from .variable_rate import choose_k, reduce_rate

TARGETS = ("mds", "joint_family", "exists_k")


def random_code(network: Network, rate: int, field: FieldSpec, seed=None) -> NecCode:
    """Every local coefficient, source included, i.i.d. uniform over GF(p).

    ``seed`` may be an int, a sequence of ints, or a ``numpy`` Generator.
    No verification is done.
    """
    if not 1 <= rate <= network.min_min_cut:
        raise UsageError(f"rate {rate} must lie in [1, {network.min_min_cut}]")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    kernels = {}
    for v in network.coding_nodes:
        rows = rate if v == network.source else len(network.in_channels(v))
        cols = len(network.out_channels(v))
        draw = rng.integers(0, field.p, size=(rows, cols))
        kernels[v] = FieldMatrix(field, tuple(tuple(int(x) for x in r) for r in draw), cols)
    return NecCode(network, field, rate, kernels)


def _pow_clamped(base: float, exponent: int) -> float:
    # a negative base means the bound is vacuous, not that it alternates sign
    return max(0.0, base) ** exponent


def mds_lower_bound(network: Network, rate: int, field: FieldSpec, max_subsets: int | None = None) -> float:
    """[1 − Σ_t |R_t(δ_t)| / (|F| − 1)]^(|J|+1), J the internal nodes."""
    J = len(network.internal_nodes)
    R = rt_sum(network, {t: network.min_cut(t) - rate for t in network.sinks}, max_subsets)
    return min(1.0, _pow_clamped(1 - R / (field.p - 1), J + 1))


@dataclass(frozen=True)
class JointBounds:
    """Lower bounds on Pr(rate-ω code MDS and its uniform-k reduction MDS)."""

    exact: float | None
    binomial: float
    binomial_simplified: float
    q_total: int | None = None


def joint_lower_bound(
    network: Network,
    rate: int,
    field: FieldSpec,
    q_total: int | None = None,
    max_subsets: int | None = None,
) -> JointBounds:
    """Exact-form and binomial-form joint bounds.

    Without ``q_total`` the exact form uses Σ_t |R_t(δ_t + 1)|, which
    upper-bounds Σ_t |Q(t)|.  The exact form is ``None`` when enumeration
    would exceed the subset budget.
    """
    if rate < 2:
        raise UsageError("the joint bound needs rate >= 2")
    q = field.p
    J = len(network.internal_nodes)
    E = network.num_channels
    cuts = [network.min_cut(t) for t in network.sinks]
    b_hi = sum(comb(E, c - rate + 1) for c in cuts)
    b_lo = sum(comb(E, c - rate) for c in cuts)
    binomial = _pow_clamped(1 - b_hi / q, 1) * _pow_clamped(1 - b_lo / (q - 1), J + 1)
    simplified = _pow_clamped(1 - b_hi / (q - 1), J + 2)
    try:
        R = rt_sum(network, {t: network.min_cut(t) - rate for t in network.sinks}, max_subsets)
        if q_total is None:
            q_total = rt_sum(network, {t: network.min_cut(t) - rate + 1 for t in network.sinks}, max_subsets)
        exact = _pow_clamped(1 - q_total / q, 1) * _pow_clamped(1 - R / (q - 1), J + 1)
    except EnumerationLimitError:
        exact = None
    return JointBounds(exact, binomial, simplified, q_total)


def family_heuristic_bound(network: Network, rate: int, field: FieldSpec, max_subsets: int | None = None) -> float:
    """Product of per-step bounds for a whole family down to rate 1.

    Heuristic only: it multiplies the rate-ω construction bound by one
    k-selection factor per reduction step, using R_t sets as stand-ins for
    the unknown Q(t) of later codes.
    """
    q = field.p
    out = mds_lower_bound(network, rate, field, max_subsets)
    for w in range(rate, 1, -1):
        Rq = rt_sum(network, {t: network.min_cut(t) - w + 1 for t in network.sinks}, max_subsets)
        out *= _pow_clamped(1 - Rq / q, 1)
    return out


@dataclass(frozen=True)
class TrialConfig:
    network: Network
    field: FieldSpec
    rate: int
    trials: int
    seed: int = 0

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise UsageError("need at least one trial")

    def rng(self, index: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, index])


def _diagnose(report: DistanceReport) -> str:
    bad = []
    for s in report.sinks:
        if not s.regular:
            bad.append(f"{s.sink}: not regular")
        elif not s.is_mds:
            bad.append(f"{s.sink}: d_min={s.d_min} < {s.redundancy + 1}")
    return ", ".join(bad)


def run_trial(cfg: TrialConfig, index: int, target: str) -> str | None:
    """One trial; returns ``None`` on success or a failure diagnosis."""
    rng = cfg.rng(index)
    code = random_code(cfg.network, cfg.rate, cfg.field, rng)
    rep = verify_mds(code)
    if not rep.is_mds:
        return f"rate-{cfg.rate} code: {_diagnose(rep)}"
    if target == "mds":
        return None
    if target == "joint_family":
        k = tuple(int(x) for x in rng.integers(0, cfg.field.p, size=cfg.rate - 1))
    else:
        try:
            k = choose_k(code)
        except DomainError as exc:
            return f"no valid k: {exc}"
    low = verify_mds(reduce_rate(code, k))
    if not low.is_mds:
        return f"rate-{cfg.rate - 1} code with k={list(k)}: {_diagnose(low)}"
    return None


def _run_chunk(args) -> list[str | None]:
    cfg, indices, target = args
    return [run_trial(cfg, i, target) for i in indices]


@dataclass
class ProbabilityReport:
    target: str
    trials: int
    successes: int
    ci_low: float
    ci_high: float
    bounds: dict[str, float | None] = field(default_factory=dict)
    failures: list[tuple[int, str]] = field(default_factory=list)

    @property
    def p_hat(self) -> float:
        return self.successes / self.trials

    def to_dict(self) -> dict:
        return {
            "target": self.target,
            "trials": self.trials,
            "successes": self.successes,
            "p_hat": self.p_hat,
            "wilson95": [self.ci_low, self.ci_high],
            "bounds": self.bounds,
            "failures": [{"trial": i, "reason": r} for i, r in self.failures],
        }


def wilson_interval(successes: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    ci = binomtest(successes, trials).proportion_ci(confidence_level=confidence, method="wilson")
    return float(ci.low), float(ci.high)


def estimate_success(cfg: TrialConfig, target: str = "mds", workers: int = 1) -> ProbabilityReport:
    """Monte-Carlo success frequency with its Wilson 95% interval and the bounds.

    ``exists_k`` replaces the uniform draw of k by a search for a valid one;
    it measures something the uniform-k bound does not cover.
    """
    if target not in TARGETS:
        raise UsageError(f"target must be one of {TARGETS}, got {target!r}")
    if target != "mds" and cfg.rate < 2:
        raise UsageError(f"target {target!r} needs rate >= 2")
    idx = list(range(cfg.trials))
    if workers > 1:
        chunks = [idx[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(workers) as ex:
            parts = list(ex.map(_run_chunk, [(cfg, c, target) for c in chunks]))
        results: list[str | None] = [None] * cfg.trials
        for c, res in zip(chunks, parts):
            for i, r in zip(c, res):
                results[i] = r
    else:
        results = _run_chunk((cfg, idx, target))
    failures = [(i, r) for i, r in enumerate(results) if r is not None]
    succ = cfg.trials - len(failures)
    lo, hi = wilson_interval(succ, cfg.trials)
    bounds: dict[str, float | None] = {}
    try:
        bounds["mds"] = mds_lower_bound(cfg.network, cfg.rate, cfg.field)
    except EnumerationLimitError:
        bounds["mds"] = None
    if cfg.rate >= 2 and target != "mds":
        jb = joint_lower_bound(cfg.network, cfg.rate, cfg.field)
        bounds["joint_exact"] = jb.exact
        bounds["joint_binomial"] = jb.binomial
        bounds["joint_binomial_simplified"] = jb.binomial_simplified
    return ProbabilityReport(target, cfg.trials, succ, lo, hi, bounds, failures)


def q_total(code: NecCode) -> int:
    """Σ_t |Q(t)| for an MDS code."""
    return sum(len(compute_Q(code, t)) for t in code.network.sinks)


def exhaustive_success(network: Network, rate: int, field: FieldSpec) -> tuple[int, int]:
    """(MDS codes, all codes) over every assignment of local coefficients.

    Only feasible for a handful of coefficients over tiny fields.
    """
    from itertools import product

    shapes = []
    for v in network.coding_nodes:
        rows = rate if v == network.source else len(network.in_channels(v))
        shapes.append((v, rows, len(network.out_channels(v))))
    n = sum(r * c for _, r, c in shapes)
    if field.p**n > 1_000_000:
        raise EnumerationLimitError(f"{field.p}^{n} codes is too many to enumerate", field.p**n, 1_000_000)
    good = total = 0
    for flat in product(range(field.p), repeat=n):
        pos = 0
        kernels = {}
        for v, r, c in shapes:
            vals = flat[pos : pos + r * c]
            pos += r * c
            kernels[v] = FieldMatrix(field, tuple(tuple(vals[i * c : (i + 1) * c]) for i in range(r)), c)
        total += 1
        good += verify_mds(NecCode(network, field, rate, kernels)).is_mds
    return good, total
