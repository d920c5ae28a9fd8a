import random
from fractions import Fraction

import pytest

from fastkernel.certify import BackwardWeightedTournament, OmegaCertificate, validate_family
from fastkernel.core import IntervalPartition, OrderedTournament, Tournament, is_acyclic
from fastkernel.exact import fas_digraph, fas_exact
from fastkernel.safepart import (
    SafePartition,
    SafePartitionError,
    apply_rule3,
    find_safe_partition,
    search_safe_partition,
)
from oracles import planted


def decomposition_sides(t: Tournament, ordering, partition: IntervalPartition):
    pos = {v: i for i, v in enumerate(ordering)}
    where = partition.interval_index()
    inside = [(u, v) for u, v in t.arcs() if where[pos[u]] == where[pos[v]]]
    between = [(u, v) for u, v in t.arcs() if where[pos[u]] != where[pos[v]]]
    return fas_digraph(t.n, inside), fas_digraph(t.n, between)


def check(tw, sp):
    where = sp.partition.interval_index()
    pos = {lab: i for i, lab in enumerate(tw.labels)}
    assert sp.between_backward
    assert all(where[pos[t]] != where[pos[h]] for t, h in sp.between_backward)
    assert validate_family(tw, sp.family, required=sp.between_backward, interval_of=where)


def test_three_vertices():
    tw = BackwardWeightedTournament.from_backward(3, {(2, 0): 1})
    sp = find_safe_partition(tw, 1)
    assert sp.partition == IntervalPartition.singletons(3)
    assert sp.between_backward == ((2, 0),)
    assert sp.family.certificates == (OmegaCertificate((2, 0), ((0, 1, 2),)),)


def test_dense_pair_is_grouped():
    tw = BackwardWeightedTournament.from_backward(7, {(3, 2): 1, (6, 0): 1})
    sp = find_safe_partition(tw, 2)
    assert [list(r) for r in sp.partition.intervals()] == [[0], [1], [2, 3], [4], [5], [6]]
    assert sp.between_backward == ((6, 0),)
    check(tw, sp)


def test_preconditions():
    tw = BackwardWeightedTournament.from_backward(3, {(2, 0): 1})
    with pytest.raises(SafePartitionError):
        find_safe_partition(tw, 2)  # needs 5 vertices
    with pytest.raises(SafePartitionError):
        find_safe_partition(BackwardWeightedTournament.from_backward(5, {(2, 0): 3}), 2)
    with pytest.raises(SafePartitionError):
        find_safe_partition(BackwardWeightedTournament.from_backward(5, {}), 1)
    with pytest.raises(ValueError):
        find_safe_partition(tw, Fraction(1, 3))


def test_no_safe_partition_exists_for_adjacent_backward_arc():
    # the lone backward arc has no forward path inside its span at all
    tw = BackwardWeightedTournament.from_backward(3, {(1, 0): 1})
    assert search_safe_partition(tw) is None
    with pytest.raises(SafePartitionError):
        find_safe_partition(tw, 1)


def test_fallback_finds_partition_recursion_misses():
    # the only dense interval swallows every backward arc
    tw = BackwardWeightedTournament.from_backward(8, {(5, 2): 1, (6, 2): 1, (7, 5): 1})
    with pytest.raises(SafePartitionError):
        find_safe_partition(tw, 3, fallback=False)
    sp = find_safe_partition(tw, 3)
    check(tw, sp)


def test_optimal_orderings_admit_safe_partitions():
    rng = random.Random(3)
    done = 0
    while done < 60:
        n = rng.randint(5, 11)
        t = planted(n, rng.randint(1, n // 2), rng)
        res = fas_exact(t)
        if res.fas_size == 0 or n < 2 * res.fas_size + 1:
            continue
        ot = OrderedTournament(t, res.optimal_ordering)
        tw = BackwardWeightedTournament.from_ordered(ot)
        sp = find_safe_partition(tw, res.fas_size)
        check(tw, sp)
        inside, between = decomposition_sides(t, res.optimal_ordering, sp.partition)
        assert res.fas_size == inside + between
        done += 1


def test_apply_rule3(three_cycle):
    ordering = [0, 1, 2]
    tw = BackwardWeightedTournament.from_ordered(OrderedTournament(three_cycle, ordering))
    sp = find_safe_partition(tw, 1)
    after, k, rev = apply_rule3(three_cycle, ordering, sp, 1)
    assert is_acyclic(after) and k == 0 and rev == [(2, 0)]


def test_empty_f_is_rejected():
    with pytest.raises(SafePartitionError):
        SafePartition(IntervalPartition.singletons(3), (), None, 0)


def test_rule3_is_exact():
    rng = random.Random(8)
    fired = 0
    for _ in range(80):
        n = rng.randint(5, 12)
        t = planted(n, rng.randint(1, n // 2), rng)
        res = fas_exact(t)
        if res.fas_size == 0 or n < 2 * res.fas_size + 1:
            continue
        tw = BackwardWeightedTournament.from_ordered(OrderedTournament(t, res.optimal_ordering))
        sp = find_safe_partition(tw, res.fas_size)
        after, k, _ = apply_rule3(t, res.optimal_ordering, sp, res.fas_size)
        assert fas_exact(after).fas_size == res.fas_size - sp.weight == k
        fired += 1
    assert fired > 30


def test_rule3_rejects_mismatched_ordering(three_cycle):
    tw = BackwardWeightedTournament.from_ordered(OrderedTournament(three_cycle, [0, 1, 2]))
    sp = find_safe_partition(tw, 1)
    with pytest.raises(SafePartitionError):
        apply_rule3(three_cycle, [2, 0, 1], sp, 1)
