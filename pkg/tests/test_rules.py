import itertools
import random

from hypothesis import given, settings

from conftest import tournaments
from fastkernel.core import Tournament
from fastkernel.exact import fas_exact
from fastkernel.rules import (
    apply_rule1,
    apply_rule2,
    apply_rule4,
    find_maximal_transitive_modules,
    is_module,
    rule4_candidate,
)
from oracles import module_by_definition, planted, random_tournament


def fas(t):
    return fas_exact(t).fas_size


def blocks_tournament(sizes):
    """Cycle of transitive blocks: block i beats block i+1 (mod 3)."""
    block = [b for b, s in enumerate(sizes) for _ in range(s)]
    n = len(block)
    arcs = []
    for u, v in itertools.combinations(range(n), 2):
        if block[u] == block[v] or (block[v] - block[u]) % 3 == 1:
            arcs.append((u, v))
        else:
            arcs.append((v, u))
    return Tournament.from_arcs(n, arcs)


def test_rule1_examples(three_cycle, rng):
    t, deleted = apply_rule1(Tournament.transitive(6))
    assert t.n == 0 and sorted(deleted) == list(range(6))
    t, deleted = apply_rule1(three_cycle)
    assert t == three_cycle and deleted == []
    for _ in range(10):
        t = random_tournament(10, rng)
        assert fas(apply_rule1(t)[0]) == fas(t)


def long_arc_instance():
    # u=0 ... v=4 with three internal vertices; e = 4 -> 0 lies in 3 triangles
    return Tournament.transitive(5).reverse_arc(0, 4)


def test_rule2_examples(three_cycle):
    assert apply_rule2(three_cycle, 1) == (three_cycle, 1, [])
    t = long_arc_instance()
    after, k, rev = apply_rule2(t, 2)
    assert rev == [(4, 0)] and k == 1
    assert fas(t) - fas(after) == 1
    transitive = Tournament.transitive(6)
    assert apply_rule2(transitive, 0) == (transitive, 0, [])


def test_rule2_signals_no(three_cycle):
    _, k, rev = apply_rule2(three_cycle, 0)
    assert k < 0 and len(rev) == 1


def test_maximal_transitive_modules(three_cycle):
    assert find_maximal_transitive_modules(Tournament.transitive(5)) == [[0, 1, 2, 3, 4]]
    assert find_maximal_transitive_modules(three_cycle) == [[0], [1], [2]]
    t = blocks_tournament((2, 2, 2))
    modules = find_maximal_transitive_modules(t)
    assert modules == [[0, 1], [2, 3], [4, 5]]
    assert all(module_by_definition(t, m) for m in modules)


def test_modules_partition_and_are_maximal(rng):
    for _ in range(15):
        t = planted(8, rng.randint(1, 5), rng)
        modules = find_maximal_transitive_modules(t)
        assert sorted(v for m in modules for v in m) == list(range(8))
        for m in modules:
            assert module_by_definition(t, m)
            assert fas(t.induced(m)) == 0
        # no transitive module strictly contains one of them
        for size in range(2, 9):
            for cand in itertools.combinations(range(8), size):
                if module_by_definition(t, cand) and fas(t.induced(list(cand))) == 0:
                    assert any(set(cand) <= set(m) for m in modules)


def rule4_instance():
    # I = {0}, module {1, 2}, O = {3}; the only O -> I arc is 3 -> 0
    return Tournament.from_arcs(4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (3, 0)])


def test_rule4_examples(three_cycle):
    t = rule4_instance()
    module, z = rule4_candidate(t)
    assert module == [1, 2] and z == [(3, 0)]
    after, k, rev = apply_rule4(t, 3)
    assert rev == [(3, 0)] and k == 2
    assert fas(t) - fas(after) == 1
    assert apply_rule4(three_cycle, 1) == (three_cycle, 1, [])
    top = Tournament.transitive(4)
    assert apply_rule4(top, 2) == (top, 2, [])


def test_is_module():
    t = blocks_tournament((2, 2, 2))
    assert is_module(t, 0b11) and not is_module(t, 0b110)


def test_rule_soundness_against_oracle():
    rng = random.Random(11)
    for _ in range(60):
        n = rng.randint(4, 10)
        t = planted(n, rng.randint(1, n), rng) if rng.random() < 0.7 else random_tournament(n, rng)
        before = fas(t)
        for k in {max(0, before - 1), before, before + 1}:
            after, k2, rev = apply_rule2(t, k)
            if before <= k:
                assert fas(after) == before - len(rev) and k2 >= 0
            else:
                assert k2 < 0 or fas(after) > k2
        after, k2, rev = apply_rule4(t, before)
        assert fas(after) == before - len(rev)


@settings(max_examples=40, deadline=None)
@given(tournaments(max_n=9))
def test_rule1_preserves_fas(t):
    assert fas(apply_rule1(t)[0]) == fas(t)
