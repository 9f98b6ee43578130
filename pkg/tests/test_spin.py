import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from indhard import (
    AssignmentSizeMismatch,
    ConfigStats,
    Graph,
    InstanceTooLarge,
    InvalidParameters,
    SpinParams,
    config_stats,
    count_independent_sets,
    gen_complete,
    gen_cycle,
    hypergraph_spin_params,
    partition_function,
    weight,
)

from test_hypergraph import graphs

F = Fraction


@pytest.mark.parametrize(
    "k,b,expected",
    [(2, 1, (1, 0, 1)), (3, 1, (1, F(1, 2), 1)), (4, 2, (1, 0, 3)), (7, 3, (1, F(1, 2), 7))],
)
def test_gadget_params(k, b, expected):
    p = hypergraph_spin_params(k, b)
    assert (p.beta, p.gamma, p.lam) == expected
    assert p.antiferromagnetic


@pytest.mark.parametrize("k,b", [(1, 1), (3, 2), (4, 0), (5, 3)])
def test_gadget_params_invalid(k, b):
    with pytest.raises(InvalidParameters):
        hypergraph_spin_params(k, b)


def test_interaction_and_field():
    p = SpinParams(F(2), F(1, 3), F(5))
    assert p.interaction == ((2, 1), (1, F(1, 3)))
    assert p.field == (5, 1)


def test_negative_param_rejected():
    with pytest.raises(InvalidParameters):
        SpinParams(-1, 0, 1)


def test_config_stats(k2, c3):
    assert config_stats(k2, (1, 1)) == ConfigStats(0, 0, 1)
    assert config_stats(k2, (0, 0)) == ConfigStats(2, 1, 0)
    assert config_stats(c3, (0, 1, 0)) == ConfigStats(2, 1, 0)
    with pytest.raises(AssignmentSizeMismatch):
        config_stats(c3, (0, 1))


def test_weight():
    p = SpinParams(1, 0, 1)
    assert weight(p, ConfigStats(2, 1, 0)) == 1
    assert weight(p, ConfigStats(0, 0, 1)) == 0
    assert weight(SpinParams(1, F(1, 2), 1), ConfigStats(1, 0, 1)) == F(1, 2)


def test_partition_function_examples(k2, c3):
    p = SpinParams(F(3), F(2, 5), F(7, 4))
    assert partition_function(Graph(1), p) == F(7, 4) + 1
    assert partition_function(k2, hypergraph_spin_params(3, 1)) == F(7, 2)
    assert partition_function(c3, hypergraph_spin_params(2, 1)) == 4


def test_partition_function_cap():
    with pytest.raises(InstanceTooLarge):
        partition_function(Graph(25), SpinParams(1, 1, 1))


def test_workers_agree():
    g = gen_cycle(9)
    p = hypergraph_spin_params(5, 1)
    assert partition_function(g, p, workers=3) == partition_function(g, p)


params_st = st.builds(
    SpinParams,
    st.fractions(0, 3, max_denominator=5),
    st.fractions(0, 3, max_denominator=5),
    st.fractions(0, 3, max_denominator=5),
)


@given(graphs(max_n=5), graphs(max_n=5), params_st)
@settings(max_examples=40)
def test_multiplicative_over_disjoint_union(g1, g2, p):
    assert partition_function(g1.disjoint_union(g2), p) == partition_function(g1, p) * partition_function(g2, p)


@given(graphs(max_n=7))
@settings(max_examples=40)
def test_hardcore_point_counts_independent_sets(g):
    # gamma = 0 kills every 11-edge, so the 1-spins form an independent set
    assert partition_function(g, SpinParams(1, 0, 1)) == count_independent_sets(g.as_hypergraph())


@given(graphs(max_n=6), params_st, st.randoms(use_true_random=False))
@settings(max_examples=40)
def test_relabel_invariance(g, p, rnd):
    perm = list(range(g.vertex_count))
    rnd.shuffle(perm)
    assert partition_function(g.relabel(perm), p) == partition_function(g, p)


@given(graphs(max_n=7), st.sampled_from([(2, 1), (3, 1), (4, 1), (5, 2), (6, 2), (7, 3)]))
@settings(max_examples=40)
def test_scaled_z_is_integer(g, kb):
    k, b = kb
    scaled = 2 ** (len(g.edges) * (k - 2 * b)) * partition_function(g, hypergraph_spin_params(k, b))
    assert scaled.denominator == 1


def test_matches_explicit_sum():
    g = gen_complete(3)
    p = SpinParams(F(2), F(1, 3), F(5, 2))
    total = F(0)
    for sigma in itertools.product((0, 1), repeat=3):
        term = F(1)
        for v in sigma:
            term *= p.lam if v == 0 else 1
        for u, v in g.edges:
            if sigma[u] == sigma[v]:
                term *= p.beta if sigma[u] == 0 else p.gamma
        total += term
    assert partition_function(g, p) == total
