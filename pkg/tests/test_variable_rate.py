from itertools import product
from math import comb

import numpy as np
import pytest
from conftest import random_regular_codes, relay_network

from varnec.code import NecCode
from varnec.errors import ConstructionError, DomainError, FamilyError, UsageError
from varnec.ff import FieldSpec, mat_rank
from varnec.metrics import compute_Q, intersects, min_distance, verify_mds
from varnec.topology import Network, combination_network, example_network
from varnec.variable_rate import (
    ForbiddenHyperplane,
    build_family,
    choose_k,
    construct_mds,
    extended_transform,
    field_size_bound,
    forbidden_hyperplanes,
    reduce_rate,
)


def mds_codes(net, rate, p, count, seed=0):
    return [construct_mds(net, rate, FieldSpec(p), seed=seed + i) for i in range(count)]


def test_fixture_hyperplanes(code2):
    planes = forbidden_hyperplanes(code2)
    assert len(planes) == sum(len(compute_Q(code2, t)) for t in code2.network.sinks) == 10
    for h in planes:
        assert any(h.coeffs)
    forbidden = {k for k in range(3) if any(h.contains((k,)) for h in planes if not h.degenerate)}
    assert forbidden == {0, 2}
    assert choose_k(code2) == (1,)
    assert choose_k(code2, "random", seed=3) == (1,)


def test_rate_two_hyperplanes_hold_at_most_one_point(code2):
    for h in forbidden_hyperplanes(code2):
        assert sum(h.contains((k,)) for k in range(3)) <= 1


def test_hyperplane_scale_invariance():
    h = ForbiddenHyperplane("t", None, (1, 3, 2), 5)
    for c in range(1, 5):
        g = ForbiddenHyperplane("t", None, tuple(c * a % 5 for a in h.coeffs), 5)
        for k in product(range(5), repeat=2):
            assert h.contains(k) == g.contains(k)


def check_hyperplanes_by_brute_force(code):
    """k ∈ K(t,ρ) exactly when the reduced code still meets Δ(t,ρ)."""
    p = code.field.p
    planes = forbidden_hyperplanes(code)
    for k in product(range(p), repeat=code.rate - 1):
        low = reduce_rate(code, k)
        for h in planes:
            hit = not h.degenerate and h.contains(k)
            assert intersects(low, h.sink, h.pattern) == hit


def test_hyperplanes_brute_force_fixture(code2):
    check_hyperplanes_by_brute_force(code2)


@pytest.mark.parametrize("net,rate,p", [(relay_network(), 2, 5), (example_network(), 3, 5), (relay_network(), 3, 7)])
def test_hyperplanes_brute_force_random(net, rate, p):
    for code in mds_codes(net, rate, p, 3, seed=rate * 10):
        check_hyperplanes_by_brute_force(code)


def test_reduction_matches_reference(code2, code1):
    low = reduce_rate(code2, [1])
    assert low.source_kernel.tolist() == [[2, 1, 1, 2, 1]]
    assert low.kernels["i"] == code2.kernels["i"]
    assert low.decoding_matrix("t1").full.rows[0] == (2, 1, 1)
    assert low == code1


def test_zero_vector_drops_last_row(code2):
    low = reduce_rate(code2, [0])
    assert low.source_kernel.tolist() == code2.source_kernel.tolist()[:1]


def test_reduce_rejections(code2, code1, example):
    with pytest.raises(DomainError):
        reduce_rate(code1, [])
    with pytest.raises(UsageError):
        reduce_rate(code2, [1, 1])
    from varnec.code import zero_code

    with pytest.raises(DomainError):
        reduce_rate(zero_code(example, FieldSpec(3), 2), [1])


def test_rank_preserved_for_any_k():
    net = example_network()
    code = random_regular_codes(net, 3, 5, 1, seed=9)[0]
    rng = np.random.default_rng(0)
    for _ in range(120):
        k = rng.integers(0, 5, size=2).tolist()
        low = reduce_rate(code, k)
        for t in net.sinks:
            assert mat_rank(low.decoding_matrix(t).F) == 2


def test_transform_consistency_and_subspace(code2):
    p = code2.field.p
    for k in range(p):
        low = reduce_rate(code2, [k])
        assert low.extended_kernels == extended_transform(code2.extended_kernels, 2, [k], p)
        for t in code2.network.sinks:
            big = code2.decoding_matrix(t).F
            for row in low.decoding_matrix(t).F.rows:
                assert big.row_space_contains(row)


@pytest.mark.parametrize("net,rate,p", [(example_network(), 2, 7), (relay_network(), 2, 7), (relay_network(), 3, 11)])
def test_chosen_k_lifts_distance(net, rate, p):
    for code in mds_codes(net, rate, p, 4, seed=1):
        low = reduce_rate(code, choose_k(code))
        for t in net.sinks:
            assert min_distance(low, t) == net.min_cut(t) - rate + 2


def test_choose_k_without_constraints(code2):
    assert choose_k(code2, hyperplanes=[]) == (0,)


def test_choose_k_exhausted_by_synthetic_planes(code2):
    planes = [ForbiddenHyperplane("t1", None, (1, k), 3) for k in range(3)]
    with pytest.raises(DomainError, match="sum"):
        choose_k(code2, hyperplanes=planes)


def test_choose_k_fails_on_binary_field():
    # over GF(2) the reference coefficients are still MDS, but both k values are forbidden
    net = example_network()
    code = NecCode(net, FieldSpec(2), 2, {"s": [[1, 1, 0, 1, 1], [1, 0, 1, 1, 0]], "i": [[1, 1]]})
    assert verify_mds(code).is_mds
    with pytest.raises(DomainError):
        choose_k(code)
    with pytest.raises(FamilyError) as info:
        build_family(net, 2, FieldSpec(2), base=code)
    assert info.value.rate == 1


def test_construct_mds_examples(example):
    code = construct_mds(example, 3, FieldSpec(5), seed=0)
    assert [s.d_min for s in verify_mds(code).sinks] == [1, 1]
    assert construct_mds(example, 2, FieldSpec(7), seed=4) == construct_mds(example, 2, FieldSpec(7), seed=4)
    with pytest.raises(UsageError):
        construct_mds(example, 4, FieldSpec(5))


def test_construct_mds_gives_up():
    # a [4,2,3] MDS code does not exist over GF(2)
    net = Network(["s", "t"], "s", ["t"], [(f"e{i}", "s", "t") for i in range(1, 5)])
    with pytest.raises(ConstructionError) as info:
        construct_mds(net, 2, FieldSpec(2), max_attempts=20)
    assert info.value.attempts == 20


def test_family_from_fixture(code2, code1, example):
    fam = build_family(example, 2, FieldSpec(3), base=code2)
    assert fam.rates == [2, 1] and fam.vectors == [(1,)]
    assert fam.shares_internal_kernels() and fam.all_mds()
    assert fam[1] == code1


def test_family_of_rate_one(code1, example):
    fam = build_family(example, 1, FieldSpec(3), base=code1)
    assert len(fam) == 1


@pytest.mark.parametrize("net,rate,p", [(example_network(), 2, 31), (example_network(), 3, 31), (relay_network(), 3, 31)])
def test_random_families(net, rate, p):
    for seed in range(3):
        fam = build_family(net, rate, FieldSpec(p), seed=seed)
        assert fam.rates == list(range(rate, 0, -1))
        assert fam.all_mds() and fam.shares_internal_kernels()
        for code in fam.codes:
            assert code.kernels["s"].nrows == code.rate


def test_family_random_strategy(example):
    fam = build_family(example, 3, FieldSpec(31), seed=2, strategy="random")
    assert fam.all_mds() and fam.shares_internal_kernels()


def test_family_on_combination_network():
    net = combination_network(6, 4)
    fam = build_family(net, 2, FieldSpec(487), seed=0)
    assert fam.rates == [2, 1] and fam.all_mds() and fam.shares_internal_kernels()


def test_family_rejects_mismatched_base(code2, example):
    with pytest.raises(UsageError):
        build_family(example, 2, FieldSpec(5), base=code2)


def test_field_size_bound_combination():
    b = field_size_bound(combination_network(6, 4), 2)
    assert b.exact_terms == {0: 360, 1: 480} and b.exact == 480
    assert b.binomial_terms == {1: 15 * comb(66, 3), 2: 15 * comb(66, 2)}
    assert b.binomial_terms[2] == 32175 and comb(66, 3) == 45760
    assert b.exact <= b.binomial
    assert b.satisfied_by(487) and not b.satisfied_by(479)


def test_field_size_bound_small_networks(example):
    for net in (example, relay_network()):
        for rate in range(1, net.min_min_cut + 1):
            b = field_size_bound(net, rate)
            assert b.exact <= b.binomial


def test_field_size_bound_cap():
    b = field_size_bound(combination_network(6, 4), 2, max_subsets=5)
    assert b.exact is None and b.binomial == 15 * comb(66, 3)
