"""Heuristic orderings used to find a small feedback arc set S."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .core import OrderedTournament, Tournament
from .exact import DEFAULT_LIMIT, fas_exact

HEURISTICS = ("indegree", "kwiksort", "exact")


@dataclass(frozen=True)
class HeuristicOrdering:
    ordering: tuple[int, ...]
    backward_count: int
    method: str

    def backward_arcs(self, t: Tournament):
        return OrderedTournament(t, self.ordering).backward_arcs()


def _count(t: Tournament, ordering) -> int:
    return OrderedTournament(t, ordering).backward_count()


def order_by_indegree(t: Tournament) -> HeuristicOrdering:
    ordering = tuple(sorted(range(t.n), key=lambda v: (t.in_degree(v), v)))
    return HeuristicOrdering(ordering, _count(t, ordering), "indegree")


def kwiksort(t: Tournament, seed: int = 0) -> HeuristicOrdering:
    rng = random.Random(seed)

    def sort(vertices: list[int]) -> list[int]:
        if len(vertices) <= 1:
            return vertices
        pivot = rng.choice(vertices)
        before = [u for u in vertices if t.has_arc(u, pivot)]
        after = [u for u in vertices if t.has_arc(pivot, u)]
        return sort(before) + [pivot] + sort(after)

    ordering = tuple(sort(list(range(t.n))))
    return HeuristicOrdering(ordering, _count(t, ordering), f"kwiksort:{seed}")


def local_search_improve(ho: HeuristicOrdering, t: Tournament) -> HeuristicOrdering:
    """Move single vertices to their best position until no move helps."""
    order = list(ho.ordering)
    count = _count(t, order)
    improved = True
    while improved:
        improved = False
        for v in list(order):
            i = order.index(v)
            rest = order[:i] + order[i + 1:]
            out_v, in_v = t.out_mask(v), t.in_mask(v)
            # cost of inserting v before rest[0]: every in-neighbour is backward
            cost = sum(1 for w in rest if in_v >> w & 1)
            current = None
            best, best_at = cost, 0
            for p, w in enumerate(rest):
                if p == i:
                    current = cost
                if out_v >> w & 1:
                    cost += 1
                else:
                    cost -= 1
                if cost < best:
                    best, best_at = cost, p + 1
            if current is None:
                current = cost
            if best < current:
                rest.insert(best_at, v)
                order = rest
                count -= current - best
                improved = True
    return HeuristicOrdering(tuple(order), count, ho.method + "+ls")


def best_ordering(t: Tournament, heuristic: str = "kwiksort", restarts: int = 32,
                  seed: int = 0, local_search: bool = True,
                  exact_limit: int = DEFAULT_LIMIT) -> HeuristicOrdering:
    """Ordering with few backward arcs; its backward arcs form S."""
    if heuristic not in HEURISTICS:
        raise ValueError(f"unknown heuristic {heuristic!r}")
    if heuristic == "exact" and t.n <= exact_limit:
        res = fas_exact(t, exact_limit)
        return HeuristicOrdering(res.optimal_ordering, res.fas_size, "exact")
    if heuristic == "indegree":
        ho = order_by_indegree(t)
        return local_search_improve(ho, t) if local_search else ho
    best = None
    for run in range(max(1, restarts)):
        # per-run seeds derive from the master seed by counter
        ho = kwiksort(t, random.Random(f"{seed}:{run}").getrandbits(64))
        if local_search:
            ho = local_search_improve(ho, t)
        if best is None or ho.backward_count < best.backward_count:
            best = ho
    return best
