"""Command-line front end.

Exit codes: 0 ok, 2 usage or parse error, 3 invalid network,
4 verification failed, 5 construction failed.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Sequence

from . import io
from .decoder import simulate
from .errors import ConstructionError, DomainError, FamilyError, UsageError
from .ff import FieldSpec
from .metrics import DistanceReport, verify_mds
from .randomized import TARGETS, TrialConfig, estimate_success
from .topology import NetworkValidationError, combination_network, example_network, validate
from .variable_rate import build_family, choose_k, construct_mds, field_size_bound, reduce_rate

EXIT_OK, EXIT_USAGE, EXIT_NETWORK, EXIT_VERIFY, EXIT_CONSTRUCT = 0, 2, 3, 4, 5

log = logging.getLogger("varnec")


def _load_network(path: str):
    net = io.load_network(path)
    problems = validate(net)
    if problems:
        raise NetworkValidationError(problems)
    return net


def _emit(args, text: str, payload: dict) -> None:
    """Human report on stdout; with ``--format json`` the machine report goes to --out."""
    if args.format == "json":
        blob = io.dumps(payload)
        if args.out:
            Path(args.out).write_text(blob, encoding="utf-8")
        else:
            sys.stdout.write(blob)
            return
    print(text)


def _distance_text(rep: DistanceReport) -> str:
    lines = [f"rate {rep.rate} over GF({rep.field}): regular={rep.is_regular} MDS={rep.is_mds}"]
    lines.append(f"{'sink':>10} {'C_t':>4} {'δ_t':>4} {'d_min':>6} {'gap':>4}  MDS    witness")
    for s in rep.sinks:
        d = "-" if s.d_min is None else str(s.d_min)
        gap = "-" if s.singleton_gap is None else str(s.singleton_gap)
        wit = ",".join(s.witness) if s.witness else "-"
        lines.append(f"{s.sink:>10} {s.min_cut:>4} {s.redundancy:>4} {d:>6} {gap:>4}  {str(s.is_mds):<6} {wit}")
    return "\n".join(lines)


def _parse_ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


# -- subcommands ----------------------------------------------------------------


def cmd_net_info(args) -> int:
    net = io.load_network(args.network)
    problems = validate(net)
    head = f"network {net.name or args.network}: |V|={len(net.nodes)}, |E|={net.num_channels}, |T|={len(net.sinks)}"
    if problems:
        print(head)
        for v in problems:
            name, _, detail = v.partition(": ")
            print(f"{name} violated: {detail}")
        return EXIT_NETWORK
    cuts = {t: net.min_cut(t) for t in net.sinks}
    values = set(cuts.values())
    if len(values) == 1:
        summary = f"|E|={net.num_channels}, C_t={values.pop()} for {len(cuts)} sinks"
    else:
        summary = ", ".join(f"C_{t}={c}" for t, c in cuts.items())
    lines = [head, "validation: ok", summary]
    if len(cuts) <= 8:
        lines.append(", ".join(f"C_{t}={c}" for t, c in cuts.items()))
    payload = {
        "network": net.name,
        "nodes": len(net.nodes),
        "channels": net.num_channels,
        "sinks": len(net.sinks),
        "valid": True,
        "min_cut": cuts,
    }
    if args.rate:
        b = field_size_bound(net, args.rate)
        lines.append(f"field-size bound for rate {args.rate}: exact |F| > {b.exact}, binomial |F| > {b.binomial}")
        payload["field_size_bound"] = {
            "rate": args.rate,
            "exact": b.exact,
            "binomial": b.binomial,
            "exact_terms": b.exact_terms,
            "binomial_terms": b.binomial_terms,
        }
    _emit(args, "\n".join(lines), payload)
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.kind == "combination":
        if args.n is None or args.k is None:
            raise UsageError("gen combination needs --n and --k")
        net = combination_network(args.n, args.k)
    else:
        net = example_network()
    if args.out:
        io.save_network(net, args.out)
        print(f"wrote {net.name} (|E|={net.num_channels}, |T|={len(net.sinks)}) to {args.out}")
    else:
        sys.stdout.write(io.dumps(io.network_to_dict(net)))
    return EXIT_OK


def _need_field(args) -> FieldSpec:
    if args.field is None:
        raise UsageError("--field is required")
    return FieldSpec(args.field)


def cmd_construct(args) -> int:
    net = _load_network(args.network)
    if args.rate is None:
        raise UsageError("--rate is required")
    code = construct_mds(net, args.rate, _need_field(args), args.seed, args.max_attempts)
    io.save_code(code, args.out)
    print(f"wrote rate-{code.rate} MDS code over GF({code.field.p}) to {args.out}")
    print(_distance_text(verify_mds(code)))
    return EXIT_OK


def cmd_verify(args) -> int:
    net = _load_network(args.network)
    code = io.load_code(args.code, net)
    rep = verify_mds(code)
    _emit(args, _distance_text(rep), rep.to_dict())
    if args.figure:
        from .plotting import plot_distance_report

        plot_distance_report(rep, args.figure)
    return EXIT_OK if rep.is_mds else EXIT_VERIFY


def cmd_reduce(args) -> int:
    net = _load_network(args.network)
    code = io.load_code(args.code, net)
    if code.rate == 1:
        raise UsageError("a rate-1 code cannot be reduced further")
    if not code.is_regular():
        print("input code is not regular", file=sys.stderr)
        return EXIT_VERIFY
    if args.k is not None:
        k = _parse_ints(args.k)
    else:
        if not verify_mds(code).is_mds:
            print("automatic k selection needs an MDS input code", file=sys.stderr)
            return EXIT_VERIFY
        try:
            k = list(choose_k(code, args.strategy, args.seed))
        except DomainError as exc:
            print(f"construction failed: {exc}", file=sys.stderr)
            return EXIT_CONSTRUCT
    low = reduce_rate(code, k)
    io.save_code(low, args.out)
    rep = verify_mds(low)
    print(f"k = {k}; wrote rate-{low.rate} code to {args.out}")
    print(_distance_text(rep))
    return EXIT_OK if rep.is_mds else EXIT_VERIFY


def cmd_family(args) -> int:
    net = _load_network(args.network)
    if args.code:
        base = io.load_code(args.code, net)
        field, rate = base.field, base.rate
    else:
        base = None
        field = _need_field(args)
        if args.rate is None:
            raise UsageError("--rate is required without --code")
        rate = args.rate
    if not 1 <= rate <= net.min_min_cut:
        raise UsageError(f"rate {rate} exceeds the smallest sink min-cut {net.min_min_cut}")
    fam = build_family(net, rate, field, args.seed, base=base, strategy=args.strategy, max_attempts=args.max_attempts)
    io.save_family(fam, args.out)
    lines = [f"family of rates {fam.rates} over GF({field.p}) written to {args.out}"]
    for a, b, k in zip(fam.codes, fam.codes[1:], fam.vectors):
        lines.append(f"  rate {a.rate} -> {b.rate}: k = {list(k)}")
    lines.append(f"internal kernels shared: {fam.shares_internal_kernels()}")
    for rep in fam.reports:
        lines.append(_distance_text(rep))
    print("\n".join(lines))
    if args.figure:
        from .plotting import plot_family

        plot_family(fam.reports, args.figure)
    return EXIT_OK


def cmd_prob(args) -> int:
    net = _load_network(args.network)
    if args.rate is None:
        raise UsageError("--rate is required")
    cfg = TrialConfig(net, _need_field(args), args.rate, args.trials, args.seed)
    rep = estimate_success(cfg, args.target, workers=args.workers)
    lines = [
        f"target {rep.target}: {rep.successes}/{rep.trials} successes, p_hat = {rep.p_hat:.4f}",
        f"Wilson 95% interval: [{rep.ci_low:.4f}, {rep.ci_high:.4f}]",
    ]
    for name, val in rep.bounds.items():
        lines.append(f"lower bound {name}: {'unavailable' if val is None else f'{val:.4f}'}")
    _emit(args, "\n".join(lines), rep.to_dict())
    if args.figure:
        from .plotting import plot_probability

        plot_probability(rep, args.figure)
    return EXIT_OK


def cmd_simulate(args) -> int:
    net = _load_network(args.network)
    code = io.load_code(args.code, net)
    if args.scenario:
        X, errs = io.load_scenario(args.scenario)
    else:
        if args.message is None:
            raise UsageError("--message or --scenario is required")
        X = _parse_ints(args.message)
        pat = [c for c in (args.pattern or "").replace(",", " ").split()]
        vals = _parse_ints(args.values) if args.values else [1] * len(pat)
        if len(vals) != len(pat):
            raise UsageError("--pattern and --values differ in length")
        errs = dict(zip(pat, vals))
    rho = net.pattern(errs)
    res = simulate(code, X, rho, errs)
    lines = [f"message {list(res.message)}, errors {errs or 'none'}"]
    for t, r in res.decoded.items():
        got = "ambiguous " + str([list(c) for c in r.candidates]) if r.ambiguous else str(list(r.message))
        lines.append(f"  {t}: received {list(res.received[t])} -> {got} (weight {r.weight})")
    lines.append(f"all sinks correct: {res.all_correct}")
    _emit(args, "\n".join(lines), res.to_dict(code))
    return EXIT_OK


# -- parser -------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse already exits 2; keep that
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", type=int, help="prime field modulus p")
    common.add_argument("--rate", type=int, help="information rate ω")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--out", help="output path")
    common.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="varnec", description="Variable-rate network error-correction MDS codes.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("net-info", parents=[common], help="validate a network and report min-cuts")
    s.add_argument("network")
    s.set_defaults(func=cmd_net_info)

    s = sub.add_parser("gen", parents=[common], help="write a built-in network file")
    s.add_argument("kind", choices=("combination", "example"))
    s.add_argument("--n", type=int)
    s.add_argument("--k", type=int)
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("construct", parents=[common], help="random-plus-verify MDS construction")
    s.add_argument("network")
    s.add_argument("--max-attempts", type=int, default=64)
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("verify", parents=[common], help="minimum distance and MDS check")
    s.add_argument("network")
    s.add_argument("code")
    s.add_argument("--figure", help="write a PNG of d_min against the Singleton bound")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("reduce", parents=[common], help="derive the rate ω−1 code")
    s.add_argument("network")
    s.add_argument("code")
    s.add_argument("--k", help="explicit reduction vector, e.g. 1 or 1,2")
    s.add_argument("--strategy", choices=("deterministic", "random"), default="deterministic")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("family", parents=[common], help="build the whole variable-rate family")
    s.add_argument("network")
    s.add_argument("--code", help="start from this MDS code instead of constructing one")
    s.add_argument("--strategy", choices=("deterministic", "random"), default="deterministic")
    s.add_argument("--max-attempts", type=int, default=64)
    s.add_argument("--figure", help="write a PNG of d_min per rate")
    s.set_defaults(func=cmd_family)

    s = sub.add_parser("prob", parents=[common], help="Monte-Carlo success probability against the bounds")
    s.add_argument("network")
    s.add_argument("--trials", type=int, default=1000)
    s.add_argument("--target", choices=TARGETS, default="mds")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--figure", help="write a PNG of the estimate and bounds")
    s.set_defaults(func=cmd_prob)

    s = sub.add_parser("simulate", parents=[common], help="inject errors, transmit and decode")
    s.add_argument("network")
    s.add_argument("code")
    s.add_argument("--message", help="source symbols, e.g. 1,2")
    s.add_argument("--pattern", help="channel ids carrying errors, e.g. e4,e6")
    s.add_argument("--values", help="nonzero error values aligned with --pattern (default all 1)")
    s.add_argument("--scenario", help='JSON file {"message": [...], "errors": {"e4": 1}}')
    s.set_defaults(func=cmd_simulate)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if args.command in ("family", "construct", "reduce") and not args.out:
        print(f"varnec {args.command}: --out is required", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except NetworkValidationError as exc:
        for v in exc.violations:
            name, _, detail = v.partition(": ")
            print(f"{name} violated: {detail}", file=sys.stderr)
        return EXIT_NETWORK
    except (ConstructionError, FamilyError) as exc:
        print(f"construction failed: {exc}", file=sys.stderr)
        return EXIT_CONSTRUCT
    except UsageError as exc:
        print(f"varnec {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"varnec {args.command}: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
