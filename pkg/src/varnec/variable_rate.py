"""Variable-rate families of network MDS codes.

Starting from an MDS code of rate ω, a reduction vector k of length ω−1
folds the last message row of the source kernel into the others:
row_i ← row_i + k_i · row_ω.  Internal kernels are untouched.  k is chosen
outside every forbidden hyperplane derived from the critical patterns Q(t),
which keeps the reduced code MDS.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import product
from math import comb
from typing import Sequence

import numpy as np

from .code import NecCode
from .errors import ConstructionError, DomainError, EnumerationLimitError, FamilyError, UsageError
from .ff import FieldMatrix, FieldSpec, Row
from .metrics import DistanceReport, compute_Q, verify_mds
from .topology import ErrorPattern, Network, rt_sum

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ForbiddenHyperplane:
    """K(t,ρ) = {k : Σ_{i<ω} a_i k_i = a_ω}, stored by its coefficients a_1..a_ω.

    The coefficients express the (unique up to scale) nonzero vector of
    Δ(t,ρ) ∩ Φ(t) in the basis of message rows; they are normalized so the
    first nonzero one equals 1.
    """

    sink: str
    pattern: ErrorPattern
    coeffs: tuple[int, ...]
    p: int

    @property
    def degenerate(self) -> bool:
        """True when a_1..a_{ω−1} all vanish, so no k satisfies the equation."""
        return not any(self.coeffs[:-1])

    def contains(self, k: Sequence[int]) -> bool:
        *a, last = self.coeffs
        return sum(x * y for x, y in zip(a, k)) % self.p == last


def forbidden_hyperplanes(code: NecCode) -> list[ForbiddenHyperplane]:
    if not verify_mds(code).is_mds:
        raise DomainError("forbidden hyperplanes are defined only for network MDS codes")
    out = []
    w = code.rate
    p = code.field.p
    for t in code.network.sinks:
        dm = code.decoding_matrix(t)
        for rho in compute_Q(code, t):
            null = dm.F.vstack(dm.error_rows(rho.channels)).left_nullspace()
            # Φ has independent rows, so the message parts of the left null
            # vectors span the coordinates of Δ ∩ Φ; MDS forces dimension 1
            parts = FieldMatrix.from_rows(code.field, [n[:w] for n in null.rows], w) if null.rows else None
            if parts is None or parts.rank() != 1:
                got = 0 if parts is None else parts.rank()
                raise DomainError(f"dim(Δ∩Φ) = {got} at {t!r} for {rho.ids(code.network)}; expected 1")
            a = next(r for r in parts.rows if any(r))
            lead = next(x for x in a if x)
            inv = pow(lead, -1, p)
            out.append(ForbiddenHyperplane(t, rho, tuple(x * inv % p for x in a), p))
    return out


def extended_transform(old: Sequence[Row], rate: int, k: Sequence[int], p: int) -> tuple[Row, ...]:
    """Apply [[I k 0], [0 0 I]] to each extended kernel of a rate-``rate`` code."""
    out = []
    for f in old:
        last = f[rate - 1]
        top = tuple((f[i] + k[i] * last) % p for i in range(rate - 1))
        out.append(top + tuple(f[rate:]))
    return tuple(out)


def reduce_rate(code: NecCode, k: Sequence[int]) -> NecCode:
    """The rate ω−1 code obtained with reduction vector ``k``.

    The new extended kernels are derived twice, from the new local kernels
    and by transforming the old extended kernels; the two must agree.
    """
    w = code.rate
    if w == 1:
        raise DomainError("a rate-1 code has no lower rate")
    if len(k) != w - 1:
        raise UsageError(f"reduction vector must have length {w - 1}, got {len(k)}")
    if not code.is_regular():
        raise DomainError("rate reduction requires a regular code")
    p = code.field.p
    k = [x % p for x in k]
    K = code.source_kernel
    last = K.rows[w - 1]
    rows = [tuple((x + ki * y) % p for x, y in zip(K.rows[i], last)) for i, ki in enumerate(k)]
    reduced = code.with_source_kernel(w - 1, FieldMatrix(code.field, tuple(rows), K.ncols))
    expected = extended_transform(code.extended_kernels, w, k, p)
    if reduced.extended_kernels != expected:
        raise AssertionError("local-kernel derivation disagrees with the extended-kernel transform")
    return reduced


def _valid(k: Sequence[int], planes: Sequence[ForbiddenHyperplane]) -> bool:
    return not any(h.contains(k) for h in planes)


def choose_k(
    code: NecCode,
    strategy: str = "deterministic",
    seed: int | None = None,
    hyperplanes: Sequence[ForbiddenHyperplane] | None = None,
    random_tries: int = 256,
) -> tuple[int, ...]:
    """A reduction vector avoiding every non-degenerate forbidden hyperplane.

    ``deterministic`` scans GF(p)^(ω−1) in lexicographic order.  ``random``
    samples uniformly for ``random_tries`` draws and then falls back to the
    scan, so a valid vector is found whenever one exists.
    """
    if code.rate == 1:
        raise DomainError("a rate-1 code has no lower rate")
    if strategy not in ("deterministic", "random"):
        raise UsageError(f"unknown strategy {strategy!r}")
    planes = forbidden_hyperplanes(code) if hyperplanes is None else list(hyperplanes)
    live = [h for h in planes if not h.degenerate]
    p = code.field.p
    n = code.rate - 1
    if strategy == "random":
        rng = np.random.default_rng(seed)
        for _ in range(random_tries):
            k = tuple(int(x) for x in rng.integers(0, p, size=n))
            if _valid(k, live):
                return k
    for k in product(range(p), repeat=n):
        if _valid(k, live):
            return k
    q_total = sum(len(compute_Q(code, t)) for t in code.network.sinks)
    raise DomainError(
        f"every vector in GF({p})^{n} lies in a forbidden hyperplane "
        f"(sum |Q(t)| = {q_total}, |F| = {p})"
    )


def construct_mds(
    network: Network, rate: int, field: FieldSpec, seed: int | None = 0, max_attempts: int = 64
) -> NecCode:
    """Draw uniform random codes until one verifies as MDS."""
    from .randomized import random_code

    cap = network.min_min_cut
    if not 1 <= rate <= cap:
        raise UsageError(f"rate {rate} must lie in [1, {cap}] (smallest sink min-cut)")
    rng = np.random.default_rng(seed)
    for attempt in range(1, max_attempts + 1):
        code = random_code(network, rate, field, rng)
        if verify_mds(code).is_mds:
            log.debug("MDS code found after %d attempt(s)", attempt)
            return code
    raise ConstructionError(
        f"no rate-{rate} MDS code over GF({field.p}) found in {max_attempts} attempts", max_attempts
    )


@dataclass
class CodeFamily:
    """Codes of rates ω, ω−1, …, 1 sharing every internal local kernel."""

    codes: list[NecCode]
    vectors: list[tuple[int, ...]] = field(default_factory=list)
    reports: list[DistanceReport] = field(default_factory=list)

    @property
    def rates(self) -> list[int]:
        return [c.rate for c in self.codes]

    def __len__(self) -> int:
        return len(self.codes)

    def __getitem__(self, i: int) -> NecCode:
        return self.codes[i]

    def shares_internal_kernels(self) -> bool:
        base = self.codes[0].internal_kernels()
        return all(c.internal_kernels() == base for c in self.codes[1:])

    def all_mds(self) -> bool:
        return all(verify_mds(c).is_mds for c in self.codes)


def build_family(
    network: Network,
    rate: int,
    field: FieldSpec,
    seed: int | None = 0,
    base: NecCode | None = None,
    strategy: str = "deterministic",
    max_attempts: int = 64,
) -> CodeFamily:
    """Construct (or take) a rate-ω MDS code and reduce it down to rate 1.

    Every step re-verifies MDS and kernel sharing from scratch.
    """
    if base is None:
        try:
            base = construct_mds(network, rate, field, seed, max_attempts)
        except ConstructionError as exc:
            raise FamilyError(str(exc), rate) from exc
    elif base.rate != rate or base.network != network or base.field != field:
        raise UsageError("base code does not match the requested network, rate and field")
    report = verify_mds(base)
    if not report.is_mds:
        raise FamilyError(f"rate-{rate} base code is not MDS", rate)
    fam = CodeFamily([base], [], [report])
    code = base
    step = 0
    while code.rate > 1:
        try:
            k = choose_k(code, strategy, None if seed is None else seed + step)
        except DomainError as exc:
            raise FamilyError(str(exc), code.rate - 1) from exc
        nxt = reduce_rate(code, k)
        rep = verify_mds(nxt)
        if not rep.is_mds:
            raise FamilyError(f"reduced rate-{nxt.rate} code is not MDS (k={k})", nxt.rate)
        if nxt.internal_kernels() != base.internal_kernels():
            raise FamilyError("internal kernels changed during reduction", nxt.rate)
        log.info("rate %d -> %d with k=%s", code.rate, nxt.rate, k)
        fam.codes.append(nxt)
        fam.vectors.append(k)
        fam.reports.append(rep)
        code = nxt
        step += 1
    return fam


@dataclass(frozen=True)
class FieldSizeBound:
    """Sufficient field-size thresholds (the field must be strictly larger).

    ``exact_terms[i]`` is Σ_t |R_t(C_t − ω + i)| for i = 0..ω−1 and
    ``binomial_terms[i]`` is Σ_t C(|E|, C_t − i) for i = 1..ω.
    """

    exact: int | None
    binomial: int
    exact_terms: dict[int, int] | None
    binomial_terms: dict[int, int]

    def satisfied_by(self, p: int) -> bool:
        bound = self.exact if self.exact is not None else self.binomial
        return p > bound


def field_size_bound(network: Network, rate: int, max_subsets: int | None = None) -> FieldSizeBound:
    E = network.num_channels
    cuts = {t: network.min_cut(t) for t in network.sinks}
    binom = {i: sum(comb(E, c - i) if c - i >= 0 else 0 for c in cuts.values()) for i in range(1, rate + 1)}
    try:
        exact_terms = {
            i: rt_sum(network, {t: c - rate + i for t, c in cuts.items()}, max_subsets) for i in range(rate)
        }
    except EnumerationLimitError as exc:
        log.warning("exact field-size bound unavailable: %s", exc)
        exact_terms = None
    return FieldSizeBound(
        max(exact_terms.values()) if exact_terms else None,
        max(binom.values()),
        exact_terms,
        binom,
    )
