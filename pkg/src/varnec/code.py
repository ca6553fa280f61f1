"""Linear network error-correction codes: local kernels and their global description.

Vectors in the extended space have ``rate + |E|`` coordinates: the ``rate``
imaginary message channels first, then every real channel in network order.
Imaginary error channels are not materialized; each channel simply adds its
own indicator coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Sequence

from .errors import DomainError, UsageError
from .ff import FieldMatrix, FieldSpec, Row, vec_mat
from .topology import Network


def message_label(i: int) -> str:
    """Label of the i-th (1-based) imaginary message channel."""
    return f"d'{i}"


def derive_kernels(
    network: Network, field: FieldSpec, rate: int, kernels: Mapping[str, FieldMatrix]
) -> tuple[Row, ...]:
    """Extended global encoding kernels of every channel, in channel order.

    Each kernel is the sum of its tail's incoming kernels weighted by the
    local coefficients, plus the channel's own indicator.
    """
    p = field.p
    width = rate + network.num_channels
    msg = [tuple(int(j == i) for j in range(width)) for i in range(rate)]
    out: list[Row] = []
    for e, c in enumerate(network.channels):
        v = [0] * width
        v[rate + e] = 1
        node = c.tail
        col = network.out_channels(node).index(e)
        K = kernels[node]
        if node == network.source:
            incoming = msg
        else:
            incoming = [out[d] for d in network.in_channels(node)]
        for row, f in zip(K.rows, incoming):
            k = row[col]
            if k:
                for j, x in enumerate(f):
                    if x:
                        v[j] += k * x
        out.append(tuple(x % p for x in v))
    return tuple(out)


@dataclass(frozen=True)
class DecodingMatrix:
    """F̃_t: columns are the extended kernels of the sink's incoming channels."""

    sink: str
    rate: int
    in_channels: tuple[int, ...]
    full: FieldMatrix

    @property
    def F(self) -> FieldMatrix:
        """Message part: rows for the imaginary message channels."""
        return FieldMatrix(self.full.field, self.full.rows[: self.rate], self.full.ncols)

    @property
    def G(self) -> FieldMatrix:
        """Error part: one row per real channel."""
        return FieldMatrix(self.full.field, self.full.rows[self.rate :], self.full.ncols)

    def row(self, d: int | str) -> Row:
        """r̃_t(d) for a message label like ``"d'1"`` or a channel index."""
        if isinstance(d, str):
            if not d.startswith("d'"):
                raise UsageError(f"expected a message-channel label like \"d'1\", got {d!r}")
            return self.full.rows[int(d[2:]) - 1]
        return self.full.rows[self.rate + d]

    def error_rows(self, channels: Sequence[int]) -> FieldMatrix:
        return FieldMatrix(self.full.field, tuple(self.full.rows[self.rate + e] for e in channels), self.full.ncols)


class NecCode:
    """An ``rate``-dimensional linear network error-correction code.

    ``kernels`` maps every non-sink node to its local encoding kernel.  The
    source kernel has ``rate`` rows (one per imaginary message channel);
    every other kernel has one row per real incoming channel.  Nodes whose
    kernel would be empty may be omitted.
    """

    def __init__(
        self,
        network: Network,
        field: FieldSpec,
        rate: int,
        kernels: Mapping[str, FieldMatrix | Sequence[Sequence[int]]],
    ):
        if rate < 1:
            raise UsageError(f"rate must be at least 1, got {rate}")
        self.network = network
        self.field = field
        self.rate = rate
        ks: dict[str, FieldMatrix] = {}
        for node in network.coding_nodes:
            rows = rate if node == network.source else len(network.in_channels(node))
            cols = len(network.out_channels(node))
            K = kernels.get(node)
            if K is None:
                if rows and cols:
                    raise UsageError(f"missing local kernel for node {node!r}")
                K = FieldMatrix.zeros(field, rows, cols)
            elif not isinstance(K, FieldMatrix):
                K = FieldMatrix.from_rows(field, K, cols)
            if K.field != field:
                raise UsageError(f"kernel at {node!r} is over {K.field!r}, expected {field!r}")
            if K.shape != (rows, cols):
                raise UsageError(f"kernel at {node!r} has shape {K.shape}, expected {(rows, cols)}")
            ks[node] = K
        extra = set(kernels) - set(ks)
        if extra:
            raise UsageError(f"kernels given for non-coding nodes: {sorted(extra)}")
        self.kernels = ks
        # memo for derived analyses (distance reports etc.); the code itself never changes
        self._cache: dict = {}

    def __repr__(self) -> str:
        return f"<NecCode rate={self.rate} over {self.field!r} on {self.network!r}>"

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, NecCode)
            and self.network == other.network
            and self.field == other.field
            and self.rate == other.rate
            and self.kernels == other.kernels
        )

    __hash__ = None  # type: ignore[assignment]

    @property
    def source_kernel(self) -> FieldMatrix:
        return self.kernels[self.network.source]

    def internal_kernels(self) -> dict[str, FieldMatrix]:
        return {v: K for v, K in self.kernels.items() if v != self.network.source}

    def coefficient(self, d: int | str, e: int) -> int:
        """k_{d,e}; ``d`` is a channel index or a message label."""
        net = self.network
        tail = net.channels[e].tail
        col = net.out_channels(tail).index(e)
        if isinstance(d, str):
            if tail != net.source:
                raise UsageError(f"{d!r} does not feed channel {net.channels[e].id!r}")
            return self.kernels[tail][int(d[2:]) - 1, col]
        if net.channels[d].head != tail:
            raise UsageError(f"channels {net.channels[d].id!r} and {net.channels[e].id!r} are not adjacent")
        return self.kernels[tail][net.in_channels(tail).index(d), col]

    @cached_property
    def extended_kernels(self) -> tuple[Row, ...]:
        return derive_kernels(self.network, self.field, self.rate, self.kernels)

    def global_kernel(self, e: int) -> Row:
        """f_e: the message part of the extended kernel."""
        return self.extended_kernels[e][: self.rate]

    def error_kernel(self, e: int) -> Row:
        """g_e: the error part of the extended kernel."""
        return self.extended_kernels[e][self.rate :]

    @cached_property
    def _decoding(self) -> dict[str, DecodingMatrix]:
        out = {}
        ext = self.extended_kernels
        width = self.rate + self.network.num_channels
        for t in self.network.sinks:
            ins = self.network.in_channels(t)
            rows = tuple(tuple(ext[e][r] for e in ins) for r in range(width))
            out[t] = DecodingMatrix(t, self.rate, ins, FieldMatrix(self.field, rows, len(ins)))
        return out

    def decoding_matrix(self, t: str) -> DecodingMatrix:
        self.network.check_sink(t)
        return self._decoding[t]

    def is_regular(self) -> bool:
        return all(self.decoding_matrix(t).F.rank() == self.rate for t in self.network.sinks)

    def _check_words(self, X: Sequence[int], Z: Sequence[int] | None) -> tuple[list[int], list[int]]:
        p = self.field.p
        if len(X) != self.rate:
            raise UsageError(f"message has length {len(X)}, expected {self.rate}")
        if Z is None:
            Z = [0] * self.network.num_channels
        if len(Z) != self.network.num_channels:
            raise UsageError(f"error vector has length {len(Z)}, expected {self.network.num_channels}")
        return [x % p for x in X], [z % p for z in Z]

    def transmit(self, X: Sequence[int], Z: Sequence[int] | None = None) -> dict[str, Row]:
        """Received rows Ũ_t = (X Z) F̃_t at every sink."""
        X, Z = self._check_words(X, Z)
        xz = X + Z
        p = self.field.p
        return {
            t: vec_mat(xz, dm.full.rows, p, dm.full.ncols)
            for t, dm in ((t, self.decoding_matrix(t)) for t in self.network.sinks)
        }

    def propagate(self, X: Sequence[int], Z: Sequence[int] | None = None) -> dict[str, Row]:
        """Same result as :meth:`transmit`, computed channel by channel."""
        X, Z = self._check_words(X, Z)
        net = self.network
        p = self.field.p
        sym: list[int] = []
        for e, c in enumerate(net.channels):
            K = self.kernels[c.tail]
            col = net.out_channels(c.tail).index(e)
            inputs = X if c.tail == net.source else [sym[d] for d in net.in_channels(c.tail)]
            u = sum(K[r, col] * x for r, x in enumerate(inputs)) + Z[e]
            sym.append(u % p)
        return {t: tuple(sym[e] for e in net.in_channels(t)) for t in net.sinks}

    def with_source_kernel(self, rate: int, source_kernel: FieldMatrix) -> "NecCode":
        ks = dict(self.kernels)
        ks[self.network.source] = source_kernel
        return NecCode(self.network, self.field, rate, ks)


def decoding_matrix(code: NecCode, t: str) -> DecodingMatrix:
    return code.decoding_matrix(t)


def is_regular(code: NecCode) -> bool:
    return code.is_regular()


def transmit(code: NecCode, X: Sequence[int], Z: Sequence[int] | None = None) -> dict[str, Row]:
    return code.transmit(X, Z)


def zero_code(network: Network, field: FieldSpec, rate: int) -> NecCode:
    """All local coefficients zero."""
    ks = {
        v: FieldMatrix.zeros(field, rate if v == network.source else len(network.in_channels(v)), len(network.out_channels(v)))
        for v in network.coding_nodes
    }
    return NecCode(network, field, rate, ks)


def require_regular_at(code: NecCode, t: str) -> None:
    if code.decoding_matrix(t).F.rank() != code.rate:
        raise DomainError(f"code is not regular at sink {t!r}; minimum distance is defined only for regular codes")


def example_code() -> NecCode:
    """Two-dimensional GF(3) MDS code on :func:`example_network` with the reference coefficients."""
    from .topology import example_network

    net = example_network()
    F3 = FieldSpec(3)
    # columns e1..e5 of the source; rows d'1, d'2
    src = [[1, 1, 0, 1, 1], [1, 0, 1, 1, 0]]
    return NecCode(net, F3, 2, {"s": src, "i": [[1, 1]]})
