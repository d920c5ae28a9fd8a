"""Exact minimum feedback arc set by dynamic programming over vertex subsets.

``dp[S]`` is the fewest backward arcs of any ordering of ``S``; the last
vertex ``v`` of that ordering contributes its arcs into ``S - v``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .core import Arc, FastKernelError, Tournament, UnknownArcError, is_acyclic

DEFAULT_LIMIT = 20

_POP16 = np.array([bin(i).count("1") for i in range(1 << 16)], dtype=np.int32)


class InstanceTooLarge(FastKernelError, ValueError):
    pass


@dataclass(frozen=True)
class ExactResult:
    fas_size: int
    optimal_ordering: tuple[int, ...]
    minimal_fas: tuple[Arc, ...]


def _popcount(x: np.ndarray) -> np.ndarray:
    return _POP16[x & 0xFFFF] + _POP16[(x >> 16) & 0xFFFF]


def min_backward_ordering(out_masks: Sequence[int], limit: int = DEFAULT_LIMIT) -> tuple[int, list[int]]:
    """Minimum number of backward arcs over all orderings of a digraph.

    ``out_masks[v]`` is the out-neighbourhood bitmask of ``v``; the digraph
    need not be a tournament.  Returns ``(count, ordering)``.
    """
    n = len(out_masks)
    if n > limit:
        raise InstanceTooLarge(f"n={n} exceeds the exact-solver limit {limit}")
    if n > 32:
        raise InstanceTooLarge("subset DP supports at most 32 vertices")
    if n == 0:
        return 0, []
    size = 1 << n
    masks = np.arange(size, dtype=np.int64)
    pop = _popcount(masks)
    dp = np.zeros(size, dtype=np.int32)
    parent = np.full(size, -1, dtype=np.int8)
    layers = np.argsort(pop, kind="stable")
    starts = np.searchsorted(pop[layers], np.arange(n + 2))
    inf = np.int32(np.iinfo(np.int32).max // 2)
    for k in range(1, n + 1):
        layer = layers[starts[k]:starts[k + 1]]
        best = np.full(layer.shape, inf, dtype=np.int32)
        arg = np.full(layer.shape, -1, dtype=np.int8)
        for v in range(n):
            bit = 1 << v
            has = (layer & bit) != 0
            cand = np.where(has, dp[layer ^ bit] + _popcount(layer & out_masks[v]), inf)
            better = cand < best
            best[better] = cand[better]
            arg[better] = v
        dp[layer] = best
        parent[layer] = arg
    order = []
    s = size - 1
    while s:
        v = int(parent[s])
        order.append(v)
        s ^= 1 << v
    order.reverse()
    return int(dp[size - 1]), order


def fas_exact(t: Tournament, limit: int = DEFAULT_LIMIT) -> ExactResult:
    count, order = min_backward_ordering([t.out_mask(v) for v in range(t.n)], limit)
    pos = {v: i for i, v in enumerate(order)}
    fas = tuple(sorted(((u, v) for u, v in t.arcs() if pos[u] > pos[v]),
                       key=lambda a: (pos[a[1]], pos[a[0]])))
    assert len(fas) == count
    return ExactResult(count, tuple(order), fas)


def fas_digraph(n: int, arcs: Iterable[Arc], limit: int = DEFAULT_LIMIT) -> int:
    """Minimum feedback arc set size of an arbitrary simple digraph on ``0..n-1``."""
    out = [0] * n
    for u, v in arcs:
        out[u] |= 1 << v
    return min_backward_ordering(out, limit)[0]


def verify_reversal_acyclic(t: Tournament, arcs: Iterable[Arc]) -> bool:
    arcs = list(arcs)
    for a in arcs:
        if not t.has_arc(*a):
            raise UnknownArcError(a)
    if len(set(arcs)) != len(arcs):
        return False
    return is_acyclic(t.reverse_arcs(arcs))


def fas_at_most(t: Tournament, k: int, limit: int = DEFAULT_LIMIT) -> bool:
    return fas_exact(t, limit).fas_size <= k
