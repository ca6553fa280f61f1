"""JSON file formats for networks, codes, family archives and scenarios.

Network file::

    {"name": "example", "nodes": ["s", "i", "t1", "t2"], "source": "s",
     "sinks": ["t1", "t2"],
     "channels": [{"id": "e1", "tail": "s", "head": "t1"}, ...]}

The channel array order is the upstream-to-downstream order.

Code file::

    {"field": 3, "rate": 2,
     "kernels": {"i": {"in": ["e3"], "out": ["e6", "e7"], "matrix": [[1, 1]]},
                 "s": {"in": ["d'1", "d'2"], "out": ["e1", ...], "matrix": [...]}}}

Kernels are written with nodes sorted by id and channels in network order;
on input the ``in``/``out`` labels may come in any order.
"""

from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Any

from .code import NecCode, message_label
from .errors import UsageError
from .ff import FieldMatrix, FieldSpec
from .topology import Channel, Network
from .variable_rate import CodeFamily


class ParseError(UsageError):
    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where


_FLAT_LIST = re.compile(r"\[\s*([^\[\]{}]*?)\s*\]", re.S)
_FLAT_DICT = re.compile(r"\{\s*([^\[\]{}]*?)\s*\}", re.S)


def dumps(obj: Any) -> str:
    """Indented JSON with scalar-only arrays and objects kept on one line."""
    text = json.dumps(obj, indent=2, ensure_ascii=False)
    for pat, o, c in ((_FLAT_LIST, "[", "]"), (_FLAT_DICT, "{", "}")):
        text = pat.sub(lambda m: o + ", ".join(x.strip() for x in m.group(1).split(",\n")) + c, text)
    return text + "\n"


def _load(path: str | Path) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(str(path), exc.strerror or str(exc)) from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}", exc.msg) from exc


def _int(x: Any, where: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise ParseError(where, f"expected an integer, got {x!r}")
    return x


def _need(doc: dict, key: str, where: str) -> Any:
    if not isinstance(doc, dict) or key not in doc:
        raise ParseError(where, f"missing key {key!r}")
    return doc[key]


# -- networks ---------------------------------------------------------------


def network_to_dict(n: Network) -> dict:
    out: dict[str, Any] = {}
    if n.name:
        out["name"] = n.name
    out.update(
        nodes=list(n.nodes),
        source=n.source,
        sinks=list(n.sinks),
        channels=[{"id": c.id, "tail": c.tail, "head": c.head} for c in n.channels],
    )
    return out


def network_from_dict(doc: dict, where: str = "<network>") -> Network:
    chans = []
    for i, c in enumerate(_need(doc, "channels", where)):
        loc = f"{where}: channels[{i}]"
        chans.append(Channel(str(_need(c, "id", loc)), str(_need(c, "tail", loc)), str(_need(c, "head", loc))))
    try:
        return Network(
            [str(v) for v in _need(doc, "nodes", where)],
            str(_need(doc, "source", where)),
            [str(t) for t in _need(doc, "sinks", where)],
            chans,
            name=str(doc.get("name", "")),
        )
    except UsageError as exc:
        raise ParseError(where, str(exc)) from exc


def load_network(path: str | Path) -> Network:
    return network_from_dict(_load(path), str(path))


def save_network(n: Network, path: str | Path) -> None:
    Path(path).write_text(dumps(network_to_dict(n)), encoding="utf-8")


# -- codes ------------------------------------------------------------------


def code_to_dict(code: NecCode) -> dict:
    net = code.network
    kernels = {}
    for v in sorted(code.kernels):
        K = code.kernels[v]
        if v == net.source:
            ins = [message_label(i + 1) for i in range(code.rate)]
        else:
            ins = [net.channels[d].id for d in net.in_channels(v)]
        kernels[v] = {
            "in": ins,
            "out": [net.channels[e].id for e in net.out_channels(v)],
            "matrix": K.tolist(),
        }
    return {"field": code.field.p, "rate": code.rate, "kernels": kernels}


def code_from_dict(doc: dict, network: Network, where: str = "<code>") -> NecCode:
    try:
        field = FieldSpec(_int(_need(doc, "field", where), where))
    except UsageError as exc:
        raise ParseError(where, str(exc)) from exc
    rate = _int(_need(doc, "rate", where), where)
    kernels = {}
    for v, spec in _need(doc, "kernels", where).items():
        loc = f"{where}: kernels[{v!r}]"
        if v not in network.coding_nodes:
            raise ParseError(loc, "not a non-sink node of the network")
        if v == network.source:
            want_in = [message_label(i + 1) for i in range(rate)]
        else:
            want_in = [network.channels[d].id for d in network.in_channels(v)]
        want_out = [network.channels[e].id for e in network.out_channels(v)]
        ins, outs = list(_need(spec, "in", loc)), list(_need(spec, "out", loc))
        mat = _need(spec, "matrix", loc)
        if sorted(ins) != sorted(want_in) or len(ins) != len(want_in):
            raise ParseError(loc, f"incoming labels {ins} do not match {want_in}")
        if sorted(outs) != sorted(want_out) or len(outs) != len(want_out):
            raise ParseError(loc, f"outgoing labels {outs} do not match {want_out}")
        if not isinstance(mat, list) or len(mat) != len(ins) or any(not isinstance(r, list) or len(r) != len(outs) for r in mat):
            raise ParseError(loc, f"matrix shape does not match {len(ins)}x{len(outs)}")
        ri = [ins.index(x) for x in want_in]
        ci = [outs.index(x) for x in want_out]
        rows = [[_int(mat[r][c], loc) for c in ci] for r in ri]
        kernels[v] = FieldMatrix.from_rows(field, rows, len(want_out))
    try:
        return NecCode(network, field, rate, kernels)
    except UsageError as exc:
        raise ParseError(where, str(exc)) from exc


def load_code(path: str | Path, network: Network) -> NecCode:
    return code_from_dict(_load(path), network, str(path))


def save_code(code: NecCode, path: str | Path) -> None:
    Path(path).write_text(dumps(code_to_dict(code)), encoding="utf-8")


# -- family archives ----------------------------------------------------------


def family_manifest(fam: CodeFamily) -> dict:
    base = fam.codes[0]
    return {
        "network": base.network.name or None,
        "field": base.field.p,
        "rates": fam.rates,
        "codes": [f"code_rate{c.rate}.json" for c in fam.codes],
        "steps": [
            {"from": a.rate, "to": b.rate, "k": list(k)} for a, b, k in zip(fam.codes, fam.codes[1:], fam.vectors)
        ],
        "shared_internal_kernels": fam.shares_internal_kernels(),
        "verification": [r.to_dict() for r in fam.reports],
    }


def save_family(fam: CodeFamily, directory: str | Path) -> Path:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    man = family_manifest(fam)
    for code, name in zip(fam.codes, man["codes"]):
        save_code(code, d / name)
    (d / "manifest.json").write_text(dumps(man), encoding="utf-8")
    return d


def load_family(directory: str | Path, network: Network) -> CodeFamily:
    from .metrics import verify_mds

    d = Path(directory)
    man = _load(d / "manifest.json")
    codes = [load_code(d / name, network) for name in _need(man, "codes", str(d / "manifest.json"))]
    vectors = [tuple(s["k"]) for s in man.get("steps", [])]
    return CodeFamily(codes, vectors, [verify_mds(c) for c in codes])


# -- simulation scenarios -------------------------------------------------------


def load_scenario(path: str | Path) -> tuple[list[int], dict[str, int]]:
    """``{"message": [..], "errors": {"e4": 1}}`` -> (message, errors)."""
    doc = _load(path)
    where = str(path)
    msg = [_int(x, where) for x in _need(doc, "message", where)]
    errs = {str(k): _int(v, where) for k, v in doc.get("errors", {}).items()}
    return msg, errs


# -- bundled fixtures -----------------------------------------------------------

DATA = Path(__file__).parent / "data"


def fixture_path(name: str) -> Path:
    return DATA / name
