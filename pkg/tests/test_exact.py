import random

import pytest
from hypothesis import given, settings

from conftest import tournaments
from fastkernel.core import Tournament, UnknownArcError, is_acyclic
from fastkernel.exact import InstanceTooLarge, fas_at_most, fas_digraph, fas_exact, verify_reversal_acyclic
from oracles import fas_by_permutations, fas_digraph_by_permutations, planted, random_tournament


def test_small_cases(three_cycle):
    assert fas_exact(Tournament.transitive(5)).fas_size == 0
    res = fas_exact(three_cycle)
    assert res.fas_size == 1 and len(res.minimal_fas) == 1


def test_matches_permutation_enumeration(rng):
    for _ in range(15):
        t = random_tournament(8, rng)
        assert fas_exact(t).fas_size == fas_by_permutations(t)


def test_result_is_consistent(rng):
    for _ in range(10):
        t = random_tournament(10, rng)
        res = fas_exact(t)
        assert sorted(res.optimal_ordering) == list(range(10))
        assert len(res.minimal_fas) == res.fas_size
        assert verify_reversal_acyclic(t, res.minimal_fas)


def test_tie_break_is_deterministic(three_cycle):
    # lowest id placed last wins at every step
    assert fas_exact(three_cycle).optimal_ordering == (1, 2, 0)
    assert fas_exact(three_cycle) == fas_exact(three_cycle.copy())


def test_size_limit():
    with pytest.raises(InstanceTooLarge):
        fas_exact(Tournament.transitive(21))
    assert fas_exact(Tournament.transitive(21), limit=21).fas_size == 0


def test_verify_reversal_acyclic(three_cycle):
    assert verify_reversal_acyclic(three_cycle, [(0, 1)])
    assert not verify_reversal_acyclic(three_cycle, [])
    with pytest.raises(UnknownArcError):
        verify_reversal_acyclic(three_cycle, [(1, 0)])


def test_fas_at_most(three_cycle, rng):
    assert fas_at_most(three_cycle, 1)
    assert not fas_at_most(three_cycle, 0)
    for j in range(4):
        assert fas_at_most(planted(9, j, rng), j)


def test_fas_digraph(rng):
    for _ in range(10):
        n = 6
        arcs = {(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < 0.3}
        assert fas_digraph(n, arcs) == fas_digraph_by_permutations(n, arcs)


@settings(max_examples=40, deadline=None)
@given(tournaments(max_n=8))
def test_zero_iff_acyclic(t):
    assert (fas_exact(t).fas_size == 0) == is_acyclic(t)


@settings(max_examples=40, deadline=None)
@given(tournaments(min_n=1, max_n=8))
def test_monotone_under_vertex_deletion(t):
    full = fas_exact(t).fas_size
    for v in range(t.n):
        assert fas_exact(t.delete_vertices([v])).fas_size <= full


@settings(max_examples=25, deadline=None)
@given(tournaments(max_n=7))
def test_dp_equals_enumeration(t):
    assert fas_exact(t).fas_size == fas_by_permutations(t)
