"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` (the lines are repeated in the
terminal summary) or directly with ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import sys
import time
from itertools import combinations
from math import comb
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))
from conftest import butterfly_network, random_regular_codes, relay_network  # noqa: E402

from varnec.code import example_code  # noqa: E402
from varnec.decoder import simulate  # noqa: E402
from varnec.ff import FieldSpec, mat_rank  # noqa: E402
from varnec.io import fixture_path, load_code, load_network  # noqa: E402
from varnec.metrics import compute_Q, intersection_dim, min_distance_oracle, verify_mds  # noqa: E402
from varnec.randomized import TrialConfig, estimate_success, joint_lower_bound, mds_lower_bound  # noqa: E402
from varnec.topology import ErrorPattern, combination_network, enumerate_Rt, example_network, rt_sum  # noqa: E402
from varnec.variable_rate import build_family, field_size_bound, reduce_rate  # noqa: E402

RESULTS: list[str] = []

KERNELS = {
    "d'1": [1, 0, 0, 0, 0, 0, 0, 0, 0],
    "d'2": [0, 1, 0, 0, 0, 0, 0, 0, 0],
    "e1": [1, 1, 1, 0, 0, 0, 0, 0, 0],
    "e2": [1, 0, 0, 1, 0, 0, 0, 0, 0],
    "e3": [0, 1, 0, 0, 1, 0, 0, 0, 0],
    "e4": [1, 1, 0, 0, 0, 1, 0, 0, 0],
    "e5": [1, 0, 0, 0, 0, 0, 1, 0, 0],
    "e6": [0, 1, 0, 0, 1, 0, 0, 1, 0],
    "e7": [0, 1, 0, 0, 1, 0, 0, 0, 1],
}
F_T1 = [[1, 1, 0], [1, 0, 1], [1, 0, 0], [0, 1, 0], [0, 0, 1], [0, 0, 0], [0, 0, 0], [0, 0, 1], [0, 0, 0]]
F_T2 = [[1, 1, 0], [1, 0, 1], [0, 0, 0], [0, 0, 0], [0, 0, 1], [1, 0, 0], [0, 1, 0], [0, 0, 0], [0, 0, 1]]
F1_T1 = [[2, 1, 1], [1, 0, 0], [0, 1, 0], [0, 0, 1], [0, 0, 0], [0, 0, 0], [0, 0, 1], [0, 0, 0]]
F1_T2 = [[2, 1, 1], [0, 0, 0], [0, 0, 0], [0, 0, 1], [1, 0, 0], [0, 1, 0], [0, 0, 0], [0, 0, 1]]


def record(num: int, title: str, ok: bool, detail: str, elapsed: float) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {num:>2}: {title} ({detail}; {elapsed:.2f}s)"
    RESULTS.append(line)
    print(line)


def load_fixture():
    net = load_network(fixture_path("example_network.json"))
    return net, load_code(fixture_path("example_code_rate2.json"), net)


# -- criteria -------------------------------------------------------------------


def crit_1():
    t0 = time.perf_counter()
    net, code = load_fixture()
    kernel_ok = [
        (list(code.extended_kernels[net.index(c)]) if c.startswith("e") else [int(i == int(c[2]) - 1) for i in range(9)])
        == want
        for c, want in KERNELS.items()
    ]
    mats_ok = code.decoding_matrix("t1").full.tolist() == F_T1 and code.decoding_matrix("t2").full.tolist() == F_T2
    dt = time.perf_counter() - t0
    ok = all(kernel_ok) and mats_ok and dt < 1
    return ok, f"{sum(kernel_ok)}/9 kernels, decoding matrices {'match' if mats_ok else 'differ'}", dt


def crit_2():
    t0 = time.perf_counter()
    _, code = load_fixture()
    rep = verify_mds(code)
    dt = time.perf_counter() - t0
    d = [s.d_min for s in rep.sinks]
    return d == [2, 2] and rep.is_mds and dt < 1, f"d_min={d}, MDS={rep.is_mds}", dt


def crit_3():
    t0 = time.perf_counter()
    _, code = load_fixture()
    low = reduce_rate(code, [1])
    rep = verify_mds(low)
    dt = time.perf_counter() - t0
    src = low.source_kernel.tolist()
    mats = low.decoding_matrix("t1").full.tolist() == F1_T1 and low.decoding_matrix("t2").full.tolist() == F1_T2
    internal = low.kernels["i"].tolist() == [[1, 1]] == code.kernels["i"].tolist()
    d = [s.d_min for s in rep.sinks]
    ok = src == [[2, 1, 1, 2, 1]] and mats and internal and d == [3, 3] and rep.is_mds and dt < 1
    return ok, f"source={src}, matrices {'match' if mats else 'differ'}, d_min={d}, k_i unchanged={internal}", dt


def crit_4():
    t0 = time.perf_counter()
    net = combination_network(6, 4)
    r2 = {t: len(enumerate_Rt(net, t, 2)) for t in net.sinks}
    r3 = {t: len(enumerate_Rt(net, t, 3)) for t in net.sinks}
    s2, s3 = rt_sum(net, 2), rt_sum(net, 3)
    b = field_size_bound(net, 2)
    dt = time.perf_counter() - t0
    per_sink_c3 = comb(net.num_channels, net.min_cut("t1_2_3_4") - 1)
    ok = (
        net.num_channels == 66
        and set(r2.values()) == {24}
        and set(r3.values()) == {32}
        and (s2, s3) == (360, 480)
        and b.exact == 480
        and b.binomial_terms[2] == 32175
        and per_sink_c3 == 45760
        and b.binomial_terms[1] == 15 * 45760
        and dt < 60
    )
    detail = (
        f"|R_t(2)|=24, |R_t(3)|=32 at all 15 sinks, sums {s2}/{s3}, "
        f"binomial 15*C(66,2)={b.binomial_terms[2]}, C(66,3)={per_sink_c3} per sink "
        f"(summed over sinks: {b.binomial_terms[1]})"
    )
    return ok, detail, dt


def crit_5():
    t0 = time.perf_counter()
    n = 0
    bad = 0
    for i, net in enumerate((example_network(), butterfly_network(), relay_network())):
        for p in (3, 5):
            for rate in range(1, net.min_min_cut + 1):
                for code in random_regular_codes(net, rate, p, 8, seed=1000 + 10 * i + p + rate):
                    for t in net.sinks:
                        bad += not min_distance_oracle(code, t).agree()
                    n += 1
    dt = time.perf_counter() - t0
    return n >= 100 and bad == 0, f"{n} codes on 3 networks, {bad} disagreements", dt


def crit_6():
    t0 = time.perf_counter()
    n = 0
    violations = 0
    for i, net in enumerate((example_network(), butterfly_network(), relay_network())):
        for p in (3, 5):
            for rate in range(1, net.min_min_cut + 1):
                for code in random_regular_codes(net, rate, p, 40, seed=2000 + 10 * i + p + rate):
                    for s in verify_mds(code).sinks:
                        violations += s.d_min > s.redundancy + 1
                    n += 1
    dt = time.perf_counter() - t0
    return n >= 500 and violations == 0, f"{n} regular codes, {violations} violations", dt


def crit_7():
    t0 = time.perf_counter()
    net, code = load_fixture()
    fams = [build_family(net, 2, FieldSpec(3), base=code)]
    fams += [build_family(example_network(), 3, FieldSpec(31), seed=s) for s in range(3)]
    fams += [build_family(relay_network(), 3, FieldSpec(31), seed=s) for s in range(3)]
    not_mds = sum(not r.is_mds for f in fams for r in (verify_mds(c) for c in f.codes))
    not_shared = sum(not f.shares_internal_kernels() for f in fams)
    dt = time.perf_counter() - t0
    rates = fams[0].rates
    return (
        not_mds == 0 and not_shared == 0 and rates == [2, 1],
        f"{len(fams)} families (fixture rates {rates}), {not_mds} non-MDS members, {not_shared} kernel mismatches",
        dt,
    )


def crit_8():
    t0 = time.perf_counter()
    net = example_network()
    code = random_regular_codes(net, 3, 5, 1, seed=8)[0]
    rng = np.random.default_rng(8)
    bad = 0
    trials = 150
    for _ in range(trials):
        low = reduce_rate(code, rng.integers(0, 5, size=2).tolist())
        bad += sum(mat_rank(low.decoding_matrix(t).F) != 2 for t in net.sinks)
    dt = time.perf_counter() - t0
    return bad == 0, f"{trials} random k over GF(5), {bad} rank drops", dt


def crit_9():
    t0 = time.perf_counter()
    net, code = load_fixture()
    checked = wrong = 0
    for t in net.sinks:
        Q = set(compute_Q(code, t))
        for s in combinations(range(net.num_channels), 2):
            rho = ErrorPattern(s)
            d = intersection_dim(code, t, rho)
            wrong += d != (1 if rho in Q else 0)
            checked += 1
    dt = time.perf_counter() - t0
    return wrong == 0, f"{checked} (sink, pair) checks, {wrong} with dim != 1 inside Q or != 0 outside", dt


def crit_10():
    t0 = time.perf_counter()
    net = example_network()
    F = FieldSpec(31)
    mds = estimate_success(TrialConfig(net, F, 2, 2000, seed=2024), "mds")
    joint = estimate_success(TrialConfig(net, F, 2, 2000, seed=2025), "joint_family")
    mb = mds_lower_bound(net, 2, F)
    jb = joint_lower_bound(net, 2, F)
    dt = time.perf_counter() - t0
    ok = mds.ci_low >= mb and joint.ci_low >= jb.exact and joint.ci_low >= jb.binomial and dt < 300
    detail = (
        f"mds p_hat={mds.p_hat:.3f} Wilson low {mds.ci_low:.3f} >= bound {mb:.3f}; "
        f"joint p_hat={joint.p_hat:.3f} Wilson low {joint.ci_low:.3f} >= bound {jb.exact:.3f}"
    )
    return ok, detail, dt


def crit_11():
    t0 = time.perf_counter()
    net = load_network(fixture_path("example_network.json"))
    fam = build_family(net, 2, FieldSpec(3), base=example_code())
    code = fam.codes[-1]
    scenarios = failures = 0
    for X in range(3):
        for e in range(net.num_channels):
            for z in (1, 2):
                res = simulate(code, [X], ErrorPattern((e,)), [z])
                failures += not res.all_correct
                scenarios += 1
    dt = time.perf_counter() - t0
    return failures == 0 and scenarios == 42 and dt < 10, f"{scenarios} scenarios, {failures} failures", dt


CRITERIA = [
    (1, "reference code, extended kernels and decoding matrices", crit_1),
    (2, "reference code, minimum distance and MDS", crit_2),
    (3, "reference code, rate reduction with k=1", crit_3),
    (4, "combination network counts and field-size terms", crit_4),
    (5, "three minimum-distance forms agree", crit_5),
    (6, "refined Singleton bound on random regular codes", crit_6),
    (7, "family members MDS with shared internal kernels", crit_7),
    (8, "rank preserved under any reduction vector", crit_8),
    (9, "critical patterns meet the message space in dimension one", crit_9),
    (10, "Monte-Carlo success against the lower bounds", crit_10),
    (11, "rate-1 member corrects every single error", crit_11),
]


@pytest.mark.parametrize("num,title,fn", CRITERIA, ids=[f"criterion_{n}" for n, _, _ in CRITERIA])
def test_criterion(num, title, fn):
    ok, detail, dt = fn()
    record(num, title, ok, detail, dt)
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for num, title, fn in CRITERIA:
        try:
            ok, detail, dt = fn()
        except Exception as exc:  # report and keep going
            ok, detail, dt = False, f"{type(exc).__name__}: {exc}", 0.0
        record(num, title, ok, detail, dt)
        failed += not ok
    sys.exit(1 if failed else 0)
