"""Acyclic single-source multicast networks with unit-capacity channels.

Channels are kept in the order they were given; that order must already be
upstream-to-downstream and every matrix in the package indexes channels by
it.  Error-pattern ranks are computed by rewiring the pattern's channels to
a fresh super-source and taking a min cut to the sink.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Iterable, Mapping, Sequence

from .errors import EnumerationLimitError, UsageError, VarnecError

# Default enumeration budget: every 4-subset of 40 channels.
DEFAULT_MAX_SUBSETS = comb(40, 4)


class NetworkValidationError(VarnecError):
    def __init__(self, violations: list[str]):
        super().__init__("invalid network: " + "; ".join(violations))
        self.violations = violations


@dataclass(frozen=True)
class Channel:
    id: str
    tail: str
    head: str


@dataclass(frozen=True, order=True)
class ErrorPattern:
    """A set of channels, stored as sorted channel indices."""

    channels: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if len(set(self.channels)) != len(self.channels):
            raise UsageError(f"duplicate channels in error pattern {self.channels}")
        object.__setattr__(self, "channels", tuple(sorted(self.channels)))

    def __len__(self) -> int:
        return len(self.channels)

    def __iter__(self):
        return iter(self.channels)

    def __contains__(self, e: int) -> bool:
        return e in self.channels

    def ids(self, network: "Network") -> list[str]:
        return [network.channels[e].id for e in self.channels]

    def issubset(self, other: "ErrorPattern") -> bool:
        return set(self.channels) <= set(other.channels)


class Network:
    """Finite acyclic directed multigraph with one source and a sink set.

    ``channels`` must be listed upstream-to-downstream.  Structural errors
    (unknown node names, duplicate ids) raise immediately; graph-level
    invariants are checked by :func:`validate`.
    """

    def __init__(
        self,
        nodes: Sequence[str],
        source: str,
        sinks: Sequence[str],
        channels: Sequence[Channel | tuple[str, str, str]],
        name: str = "",
    ):
        self.name = name
        self.nodes = tuple(nodes)
        if len(set(self.nodes)) != len(self.nodes):
            raise UsageError("duplicate node identifiers")
        node_set = set(self.nodes)
        if source not in node_set:
            raise UsageError(f"source {source!r} is not a node")
        if not sinks:
            raise UsageError("a network needs at least one sink")
        for t in sinks:
            if t not in node_set:
                raise UsageError(f"sink {t!r} is not a node")
        if len(set(sinks)) != len(sinks):
            raise UsageError("duplicate sinks")
        if source in sinks:
            raise UsageError("the source cannot be a sink")
        self.source = source
        self.sinks = tuple(sinks)
        chans = []
        for c in channels:
            if not isinstance(c, Channel):
                c = Channel(*c)
            for end in (c.tail, c.head):
                if end not in node_set:
                    raise UsageError(f"channel {c.id!r} references unknown node {end!r}")
            chans.append(c)
        self.channels = tuple(chans)
        self.channel_index = {c.id: i for i, c in enumerate(self.channels)}
        if len(self.channel_index) != len(self.channels):
            raise UsageError("duplicate channel identifiers")
        ins: dict[str, list[int]] = {v: [] for v in self.nodes}
        outs: dict[str, list[int]] = {v: [] for v in self.nodes}
        for i, c in enumerate(self.channels):
            outs[c.tail].append(i)
            ins[c.head].append(i)
        self._in = {v: tuple(x) for v, x in ins.items()}
        self._out = {v: tuple(x) for v, x in outs.items()}

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"<Network{label} |V|={len(self.nodes)} |E|={len(self.channels)} |T|={len(self.sinks)}>"

    def _key(self):
        return (self.nodes, self.source, self.sinks, self.channels)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Network) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    @property
    def num_channels(self) -> int:
        return len(self.channels)

    def in_channels(self, node: str) -> tuple[int, ...]:
        return self._in[node]

    def out_channels(self, node: str) -> tuple[int, ...]:
        return self._out[node]

    def index(self, channel_id: str) -> int:
        try:
            return self.channel_index[channel_id]
        except KeyError:
            raise UsageError(f"unknown channel {channel_id!r}") from None

    def pattern(self, channel_ids: Iterable[str]) -> ErrorPattern:
        return ErrorPattern(tuple(self.index(c) for c in channel_ids))

    @property
    def coding_nodes(self) -> tuple[str, ...]:
        """Nodes that carry a local encoding kernel (everything but sinks)."""
        sinks = set(self.sinks)
        return tuple(v for v in self.nodes if v not in sinks)

    @property
    def internal_nodes(self) -> tuple[str, ...]:
        """Nodes that are neither the source nor a sink."""
        return tuple(v for v in self.coding_nodes if v != self.source)

    def check_sink(self, t: str) -> None:
        if t not in self.sinks:
            raise UsageError(f"{t!r} is not a sink")

    @cached_property
    def _reaches(self) -> dict[str, frozenset[str]]:
        # nodes from which each sink is reachable (including the sink itself)
        rev: dict[str, list[str]] = defaultdict(list)
        for c in self.channels:
            rev[c.head].append(c.tail)
        out = {}
        for t in self.sinks:
            seen = {t}
            todo = [t]
            while todo:
                v = todo.pop()
                for u in rev[v]:
                    if u not in seen:
                        seen.add(u)
                        todo.append(u)
            out[t] = frozenset(seen)
        return out

    def upstream_channels(self, t: str) -> tuple[int, ...]:
        """Channels from which ``t`` is reachable (their head is ``t`` or an ancestor of it)."""
        self.check_sink(t)
        anc = self._reaches[t]
        return tuple(i for i, c in enumerate(self.channels) if c.head in anc)

    @cached_property
    def _min_cuts(self) -> dict[str, int]:
        edges = [(c.tail, c.head) for c in self.channels]
        return {t: max_flow(edges, self.source, t) for t in self.sinks}

    def min_cut(self, t: str) -> int:
        self.check_sink(t)
        return self._min_cuts[t]

    @property
    def min_min_cut(self) -> int:
        return min(self._min_cuts.values())


def max_flow(edges: Iterable[tuple[object, object]], s: object, t: object) -> int:
    """Maximum s-t flow in a unit-capacity multigraph (BFS augmenting paths)."""
    cap: dict[tuple[object, object], int] = defaultdict(int)
    adj: dict[object, set] = defaultdict(set)
    for u, v in edges:
        cap[(u, v)] += 1
        adj[u].add(v)
        adj[v].add(u)
    if s == t:
        raise UsageError("source and sink coincide")
    flow = 0
    while True:
        parent = {s: None}
        q = deque([s])
        while q and t not in parent:
            u = q.popleft()
            for v in adj[u]:
                if v not in parent and cap[(u, v)] > 0:
                    parent[v] = u
                    q.append(v)
        if t not in parent:
            return flow
        v = t
        while parent[v] is not None:
            u = parent[v]
            cap[(u, v)] -= 1
            cap[(v, u)] += 1
            v = u
        flow += 1


def validate(n: Network) -> list[str]:
    """Return the list of violated network invariants (empty when valid)."""
    violations: list[str] = []
    pos = {v: i for i, v in enumerate(n.nodes)}
    # acyclicity via Kahn
    indeg = {v: len(n.in_channels(v)) for v in n.nodes}
    q = deque(v for v in n.nodes if indeg[v] == 0)
    seen = 0
    while q:
        v = q.popleft()
        seen += 1
        for e in n.out_channels(v):
            h = n.channels[e].head
            indeg[h] -= 1
            if indeg[h] == 0:
                q.append(h)
    if seen != len(pos):
        violations.append("acyclic: the graph contains a directed cycle")
    else:
        for e, c in enumerate(n.channels):
            bad = [d for d in n.in_channels(c.tail) if d > e]
            if bad:
                violations.append(
                    f"topological order: channel {c.id!r} precedes incoming channel "
                    f"{n.channels[bad[0]].id!r} of its tail"
                )
                break
    if n.in_channels(n.source):
        violations.append(f"source in-degree: source {n.source!r} has incoming channels")
    for t in n.sinks:
        if n.out_channels(t):
            violations.append(f"sink out-degree: sink {t!r} has outgoing channels")
    reach = {n.source}
    todo = [n.source]
    while todo:
        v = todo.pop()
        for e in n.out_channels(v):
            h = n.channels[e].head
            if h not in reach:
                reach.add(h)
                todo.append(h)
    for t in n.sinks:
        if t not in reach:
            violations.append(f"sink reachability: sink {t!r} is not reachable from the source")
    return violations


def require_valid(n: Network) -> Network:
    problems = validate(n)
    if problems:
        raise NetworkValidationError(problems)
    return n


def min_cut(n: Network, t: str) -> int:
    return n.min_cut(t)


_SUPER_SOURCE = object()


def pattern_rank(n: Network, rho: ErrorPattern, t: str) -> int:
    """rank_t(ρ): min cut from a new node feeding ρ's heads, with ρ deleted."""
    n.check_sink(t)
    if not len(rho):
        return 0
    edges = []
    for e, c in enumerate(n.channels):
        if e in rho:
            edges.append((_SUPER_SOURCE, c.head))
        else:
            edges.append((c.tail, c.head))
    return max_flow(edges, _SUPER_SOURCE, t)


def _check_budget(pool: int, size: int, max_subsets: int | None) -> None:
    limit = DEFAULT_MAX_SUBSETS if max_subsets is None else max_subsets
    needed = comb(pool, size)
    if needed > limit:
        raise EnumerationLimitError(
            f"enumerating {size}-subsets of {pool} channels needs {needed} subsets (limit {limit})",
            needed,
            limit,
        )


def enumerate_Rt(n: Network, t: str, delta: int, max_subsets: int | None = None) -> list[ErrorPattern]:
    """All ρ with |ρ| = rank_t(ρ) = delta.

    Channels that cannot reach ``t`` add nothing to the rewired cut, so any
    pattern containing one has rank below its size; they are skipped.
    """
    n.check_sink(t)
    if not 0 <= delta <= n.num_channels:
        raise UsageError(f"delta must lie in [0, {n.num_channels}], got {delta}")
    if delta == 0:
        return [ErrorPattern()]
    pool = n.upstream_channels(t)
    _check_budget(len(pool), delta, max_subsets)
    return [
        ErrorPattern(sub)
        for sub in combinations(pool, delta)
        if pattern_rank(n, ErrorPattern(sub), t) == delta
    ]


def rt_sum(n: Network, delta: Mapping[str, int] | int, max_subsets: int | None = None) -> int:
    """Σ_t |R_t(δ_t)|; ``delta`` is a per-sink map or one value for every sink."""
    per = {t: delta for t in n.sinks} if isinstance(delta, int) else dict(delta)
    return sum(len(enumerate_Rt(n, t, per[t], max_subsets)) for t in n.sinks)


# -- built-in networks -------------------------------------------------------


def example_network() -> Network:
    """Two-sink example with a single relay: C_t1 = C_t2 = 3."""
    return Network(
        nodes=["s", "i", "t1", "t2"],
        source="s",
        sinks=["t1", "t2"],
        channels=[
            ("e1", "s", "t1"),
            ("e2", "s", "t1"),
            ("e3", "s", "i"),
            ("e4", "s", "t2"),
            ("e5", "s", "t2"),
            ("e6", "i", "t1"),
            ("e7", "i", "t2"),
        ],
        name="example",
    )


def combination_network(N: int, k: int) -> Network:
    """The (N choose k) combination network.

    The source feeds each of N relays by one channel; each of the C(N, k)
    sinks hears one channel from each relay in its k-subset.
    """
    if not 1 <= k <= N:
        raise UsageError(f"need 1 <= k <= N, got N={N}, k={k}")
    relays = [f"r{j}" for j in range(1, N + 1)]
    channels = [(f"s-r{j}", "s", f"r{j}") for j in range(1, N + 1)]
    sinks = []
    for sub in combinations(range(1, N + 1), k):
        t = "t" + "_".join(map(str, sub))
        sinks.append(t)
        channels.extend((f"r{j}-{t}", f"r{j}", t) for j in sub)
    return Network(["s", *relays, *sinks], "s", sinks, channels, name=f"combination({N},{k})")
