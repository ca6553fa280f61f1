"""Minimum-weight decoding at a sink and error-injection simulation.

The decoder is exhaustive: for every candidate message it finds the
smallest error weight explaining the received word, searching supports in
increasing size over the channels whose error actually reaches the sink.
That is exponential and only meant for desk-scale networks, where it is
the ground truth the distance claims are checked against.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Mapping, Sequence

from .code import NecCode
from .errors import UsageError
from .ff import Row, in_row_space, rref_rows, vec_mat
from .metrics import active_channels, min_distance
from .topology import ErrorPattern


@dataclass(frozen=True)
class DecodeResult:
    message: Row | None  # None when ambiguous
    weight: int
    candidates: tuple[Row, ...]  # every message attaining ``weight``

    @property
    def ambiguous(self) -> bool:
        return len(self.candidates) > 1

    def to_dict(self) -> dict:
        return {
            "message": list(self.message) if self.message is not None else None,
            "weight": self.weight,
            "ambiguous": self.ambiguous,
            "candidates": [list(c) for c in self.candidates],
        }


def decode(code: NecCode, t: str, received: Sequence[int]) -> DecodeResult:
    dm = code.decoding_matrix(t)
    n = dm.full.ncols
    if len(received) != n:
        raise UsageError(f"sink {t!r} receives {n} symbols, got {len(received)}")
    p = code.field.p
    F = dm.F.rows
    recv = [x % p for x in received]
    residual = {}
    for X in product(range(p), repeat=code.rate):
        xf = vec_mat(X, F, p, n)
        residual[X] = [(u - v) % p for u, v in zip(recv, xf)]
    pool = active_channels(code, t)

    hits = [X for X, r in residual.items() if not any(r)]
    weight = 0
    while not hits:
        weight += 1
        if weight > len(pool):  # pragma: no cover - In(t) rows span everything
            raise AssertionError("received word not explained by any error")
        found = set()
        for sub in combinations(pool, weight):
            basis, piv = rref_rows([dm.row(e) for e in sub], p, n)
            for X, r in residual.items():
                if X not in found and in_row_space(basis, piv, r, p):
                    found.add(X)
        hits = sorted(found)
    cands = tuple(tuple(X) for X in hits)
    return DecodeResult(cands[0] if len(cands) == 1 else None, weight, cands)


def correction_radius(code: NecCode, t: str) -> int:
    return (min_distance(code, t) - 1) // 2


@dataclass(frozen=True)
class SimulationResult:
    message: Row
    error: Row
    received: dict[str, Row]
    decoded: dict[str, DecodeResult]

    @property
    def all_correct(self) -> bool:
        return all(r.message == self.message for r in self.decoded.values())

    def to_dict(self, code: NecCode) -> dict:
        net = code.network
        return {
            "message": list(self.message),
            "errors": {net.channels[e].id: z for e, z in enumerate(self.error) if z},
            "sinks": {
                t: {"received": list(self.received[t]), **r.to_dict(), "correct": r.message == self.message}
                for t, r in self.decoded.items()
            },
            "all_correct": self.all_correct,
        }


def error_vector(code: NecCode, rho: ErrorPattern, values: Sequence[int] | Mapping[str, int]) -> list[int]:
    """Z supported exactly on ρ.  ``values`` follow ρ's channel order or are keyed by channel id."""
    p = code.field.p
    net = code.network
    if isinstance(values, Mapping):
        keys = {net.index(c) for c in values}
        if keys != set(rho.channels):
            raise UsageError("error values are not keyed exactly by the pattern's channels")
        vals = [values[net.channels[e].id] for e in rho.channels]
    else:
        vals = list(values)
        if len(vals) != len(rho):
            raise UsageError(f"{len(vals)} error values for a pattern of {len(rho)} channels")
    Z = [0] * net.num_channels
    for e, z in zip(rho.channels, vals):
        if z % p == 0:
            raise UsageError(f"zero error value on channel {net.channels[e].id!r}; support must equal the pattern")
        Z[e] = z % p
    return Z


def simulate(
    code: NecCode, X: Sequence[int], rho: ErrorPattern, values: Sequence[int] | Mapping[str, int] = ()
) -> SimulationResult:
    """Inject errors on ρ, transmit, and decode at every sink."""
    Z = error_vector(code, rho, values)
    received = code.transmit(X, Z)
    decoded = {t: decode(code, t, u) for t, u in received.items()}
    p = code.field.p
    return SimulationResult(tuple(x % p for x in X), tuple(Z), received, decoded)
