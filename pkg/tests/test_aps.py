import numpy as np
import pytest

import oracles
from polywidth import poly
from polywidth.aps import (
    ApParams,
    ap_hypergraph,
    ap_hypergraph_loose,
    fixed_difference_hypergraph,
    gradient_hypergraphs,
    ordered_ap_count,
    pair_incidence_profile,
    two_transitivity_check,
)
from polywidth.hypergraph import Hypergraph


def test_z5_edge_list():
    h = ap_hypergraph(ApParams(5, 3))
    expected = [
        (0, 1, 2), (1, 2, 3), (2, 3, 4), (0, 3, 4), (0, 1, 4),
        (0, 2, 4), (0, 1, 3), (1, 2, 4), (0, 2, 3), (1, 3, 4),
    ]
    assert sorted(h.edges) == sorted(expected)
    assert h.num_edges == 10


@pytest.mark.parametrize("N", [5, 7, 11, 13])
@pytest.mark.parametrize("k", [3, 4])
def test_edge_count_and_oracle(N, k):
    if k > N:
        pytest.skip("k exceeds N")
    h = ap_hypergraph(ApParams(N, k))
    assert h.num_edges == N * (N - 1) // 2
    assert sorted(h.edges) == sorted(oracles.ap_edges_direct(N, k))


def test_edges_have_k_distinct_vertices():
    for N, k in [(5, 3), (7, 5), (11, 4), (13, 13)]:
        h = ap_hypergraph(ApParams(N, k))
        assert h.is_uniform(k)


def test_rejects_composite_or_oversized():
    with pytest.raises(ValueError):
        ap_hypergraph(ApParams(9, 3))
    with pytest.raises(ValueError):
        ap_hypergraph(ApParams(5, 7))
    # the loose constructor accepts composite N and keeps terms distinct
    h = ap_hypergraph_loose(ApParams(9, 3))
    assert all(len(set(e)) == 3 for e in h.edges)


def test_fixed_difference_degree():
    h = fixed_difference_hypergraph(ApParams(7, 3), 1)
    assert h.num_edges == 7
    incident = [e for e in h.edges if 0 in e]
    assert sorted(incident) == [(0, 1, 2), (0, 1, 6), (0, 5, 6)]
    assert h.max_degree == 3
    assert h.degrees() == [3] * 7


def test_fixed_difference_lambda_consistency():
    # summing the per-difference polynomials recovers the ordered count
    rng = np.random.default_rng(5)
    for _ in range(20):
        bits = rng.integers(0, 2, size=7)
        total = sum(
            poly.evaluate(fixed_difference_hypergraph(ApParams(7, 3), y), bits)
            for y in range(1, 7)
        )
        assert total == ordered_ap_count(bits, 3)


def test_fixed_difference_reversal_symmetry():
    params = ApParams(11, 4)
    for y in range(1, 6):
        a = fixed_difference_hypergraph(params, y)
        b = fixed_difference_hypergraph(params, 11 - y)
        assert sorted(a.edges) == sorted(b.edges)


@pytest.mark.parametrize("N,k", [(5, 3), (7, 3), (11, 4), (13, 5), (17, 3)])
def test_fixed_difference_partition(N, k):
    # differences 1..(N-1)/2 partition the unordered progression multiset
    combined = []
    for y in range(1, (N - 1) // 2 + 1):
        combined.extend(fixed_difference_hypergraph(ApParams(N, k), y).edges)
    assert sorted(combined) == sorted(ap_hypergraph(ApParams(N, k)).edges)


def test_pair_incidence_z5_and_z7():
    for N in (5, 7):
        h = ap_hypergraph(ApParams(N, 3))
        max_pair, table = pair_incidence_profile(h)
        assert max_pair == 3
        assert set(table.values()) == {3}
        assert len(table) == N * (N - 1) // 2


def test_pair_incidence_matching():
    h = Hypergraph(4, [(0, 1), (2, 3)])
    max_pair, table = pair_incidence_profile(h)
    assert max_pair == 1
    assert table == {(0, 1): 1, (2, 3): 1}


@pytest.mark.parametrize("N,k", [(5, 3), (7, 4), (11, 3), (13, 4), (17, 5), (31, 3)])
def test_structural_counts_double_counting(N, k):
    h = ap_hypergraph(ApParams(N, k))
    assert h.num_edges == N * (N - 1) // 2
    assert all(2 * d == k * (N - 1) for d in h.degrees())
    max_pair, table = pair_incidence_profile(h)
    assert all(2 * c == k * (k - 1) for c in table.values())
    assert max_pair * 2 == k * (k - 1)


@pytest.mark.parametrize("N,k", [(5, 3), (7, 3), (11, 3), (13, 4), (17, 5)])
def test_doubled_polynomial_equals_ordered_count(N, k):
    h = ap_hypergraph(ApParams(N, k))
    rng = np.random.default_rng(N * 100 + k)
    for _ in range(25):
        bits = rng.integers(0, 2, size=N)
        assert 2 * poly.evaluate(h, bits) == ordered_ap_count(bits, k)


def test_two_transitivity():
    assert two_transitivity_check(ApParams(7, 3), 100, seed=1)
    assert two_transitivity_check(ApParams(11, 4), 50, seed=2)


def test_squaring_map_is_not_edge_preserving():
    h = ap_hypergraph(ApParams(7, 3))
    edge_sets = set(h.edges)
    violations = 0
    for e in h.edges:
        image = tuple(sorted((v * v) % 7 for v in e))
        if len(set(image)) < 3 or image not in edge_sets:
            violations += 1
    assert violations > 0


def test_gradient_hypergraphs_of_ap_graph():
    h = ap_hypergraph(ApParams(5, 3))
    derived = gradient_hypergraphs(h)
    assert len(derived) == 5
    max_pair, _ = pair_incidence_profile(h)
    for hi in derived:
        assert hi.is_uniform(2)
        assert hi.max_degree == 3
        assert hi.max_degree <= max_pair
    assert sum(hi.num_edges for hi in derived) == 3 * h.num_edges


def test_gradient_hypergraphs_evaluate_to_partials():
    h = ap_hypergraph(ApParams(5, 3))
    derived = gradient_hypergraphs(h)
    for mask in range(32):
        x = [(mask >> j) & 1 for j in range(5)]
        grad = poly.gradient(h, x)
        for i in range(5):
            assert grad[i] == poly.evaluate(derived[i], x)
