"""Error spaces, message spaces, minimum distance and MDS verification."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from itertools import combinations

from .code import NecCode, message_label, require_regular_at
from .errors import DomainError
from .ff import FieldMatrix, rank_rows
from .topology import ErrorPattern, pattern_rank


@dataclass(frozen=True)
class SpaceBasis:
    """Spanning rows of an error space Δ(t,ρ) or the message space Φ(t)."""

    matrix: FieldMatrix
    sink: str
    pattern: ErrorPattern | None = None  # None for the message space

    @property
    def dim(self) -> int:
        return self.matrix.rank()


def error_space(code: NecCode, t: str, rho: ErrorPattern) -> SpaceBasis:
    return SpaceBasis(code.decoding_matrix(t).error_rows(rho.channels), t, rho)


def message_space(code: NecCode, t: str) -> SpaceBasis:
    return SpaceBasis(code.decoding_matrix(t).F, t)


def active_channels(code: NecCode, t: str) -> tuple[int, ...]:
    """Channels whose row r̃_t(e) is nonzero; only these can meet the message space."""
    key = ("active", t)
    if key not in code._cache:
        G = code.decoding_matrix(t).G
        code._cache[key] = tuple(e for e, r in enumerate(G.rows) if any(r))
    return code._cache[key]


def intersection_dim(code: NecCode, t: str, rho: ErrorPattern) -> int:
    dm = code.decoding_matrix(t)
    p = code.field.p
    F = dm.F.rows
    Gr = [dm.row(e) for e in rho]
    return rank_rows(F, p) + rank_rows(Gr, p) - rank_rows(list(F) + Gr, p)


def intersects(code: NecCode, t: str, rho: ErrorPattern) -> bool:
    """Whether Δ(t,ρ) ∩ Φ(t) contains a nonzero vector."""
    if not len(rho):
        return False
    return intersection_dim(code, t, rho) > 0


def _search(code: NecCode, t: str) -> tuple[int, ErrorPattern]:
    require_regular_at(code, t)
    key = ("dmin", t)
    if key in code._cache:
        return code._cache[key]
    dm = code.decoding_matrix(t)
    p = code.field.p
    F = list(dm.F.rows)
    w = code.rate
    pool = active_channels(code, t)
    # ρ = In(t) always meets Φ, so the loop terminates by size |In(t)|
    for size in range(1, len(pool) + 1):
        for sub in combinations(pool, size):
            Gr = [dm.row(e) for e in sub]
            if rank_rows(F + Gr, p) < w + rank_rows(Gr, p):
                code._cache[key] = (size, ErrorPattern(sub))
                return code._cache[key]
    raise AssertionError("no intersecting pattern found for a regular code")  # pragma: no cover


def min_distance(code: NecCode, t: str) -> int:
    """d_min at ``t``: the smallest |ρ| whose error space meets the message space."""
    return _search(code, t)[0]


def min_distance_witness(code: NecCode, t: str) -> ErrorPattern:
    """Lexicographically first pattern attaining :func:`min_distance`."""
    return _search(code, t)[1]


@dataclass(frozen=True)
class OracleDistances:
    by_size: int
    by_rank: int
    by_dim: int

    def agree(self) -> bool:
        return self.by_size == self.by_rank == self.by_dim


def min_distance_oracle(code: NecCode, t: str) -> OracleDistances:
    """Recompute d_min three independent ways by exhausting every pattern.

    Scans all subsets of the channels that can reach ``t`` (by graph
    reachability, not by row support) and minimizes |ρ|, rank_t(ρ) and
    dim Δ(t,ρ) over the intersecting ones.
    """
    require_regular_at(code, t)
    net = code.network
    pool = net.upstream_channels(t)
    dm = code.decoding_matrix(t)
    F = dm.F
    best = [None, None, None]
    for size in range(1, len(pool) + 1):
        for sub in combinations(pool, size):
            rho = ErrorPattern(sub)
            D = dm.error_rows(sub)
            dim_inter = F.rank() + D.rank() - F.vstack(D).rank()
            if dim_inter == 0:
                continue
            vals = (size, pattern_rank(net, rho, t), D.rank())
            best = [v if b is None else min(b, v) for b, v in zip(best, vals)]
    return OracleDistances(*best)


@dataclass(frozen=True)
class SinkDistance:
    sink: str
    min_cut: int
    redundancy: int
    regular: bool
    d_min: int | None
    is_mds: bool
    witness: tuple[str, ...] | None

    @property
    def singleton_gap(self) -> int | None:
        """δ_t + 1 − d_min; zero exactly when the sink meets the bound."""
        return None if self.d_min is None else self.redundancy + 1 - self.d_min


@dataclass(frozen=True)
class DistanceReport:
    rate: int
    field: int
    sinks: tuple[SinkDistance, ...]

    @property
    def is_regular(self) -> bool:
        return all(s.regular for s in self.sinks)

    @property
    def is_mds(self) -> bool:
        return all(s.is_mds for s in self.sinks)

    def __getitem__(self, t: str) -> SinkDistance:
        for s in self.sinks:
            if s.sink == t:
                return s
        raise KeyError(t)

    def to_dict(self) -> dict:
        return {
            "rate": self.rate,
            "field": self.field,
            "regular": self.is_regular,
            "mds": self.is_mds,
            "sinks": [
                {**asdict(s), "witness": list(s.witness) if s.witness else None, "singleton_gap": s.singleton_gap}
                for s in self.sinks
            ],
        }


def verify_mds(code: NecCode) -> DistanceReport:
    """Per-sink distances; MDS means regular with d_min = C_t − rate + 1 everywhere."""
    if "report" in code._cache:
        return code._cache["report"]
    net = code.network
    rows = []
    for t in net.sinks:
        C = net.min_cut(t)
        delta = C - code.rate
        regular = code.decoding_matrix(t).F.rank() == code.rate
        if regular:
            d, wit = _search(code, t)
            rows.append(SinkDistance(t, C, delta, True, d, d == delta + 1, tuple(wit.ids(net))))
        else:
            rows.append(SinkDistance(t, C, delta, False, None, False, None))
    report = DistanceReport(code.rate, code.field.p, tuple(rows))
    code._cache["report"] = report
    return report


def is_mds(code: NecCode) -> bool:
    return verify_mds(code).is_mds


def compute_Q(code: NecCode, t: str) -> list[ErrorPattern]:
    """Critical patterns at ``t``: size d_min and a nonzero intersection."""
    if not verify_mds(code).is_mds:
        raise DomainError("Q(t) is only computed for network MDS codes")
    key = ("Q", t)
    if key not in code._cache:
        d = min_distance(code, t)
        code._cache[key] = [
            ErrorPattern(sub) for sub in combinations(active_channels(code, t), d) if intersects(code, t, ErrorPattern(sub))
        ]
    return code._cache[key]


def singleton_bound(code: NecCode, t: str) -> int:
    return code.network.min_cut(t) - code.rate + 1


def message_labels(code: NecCode) -> list[str]:
    return [message_label(i + 1) for i in range(code.rate)]
