"""Reduction rules on plain tournaments.

* Rule 1 deletes vertices that lie in no triangle.
* Rule 2 reverses an arc lying in more than ``k`` triangles.
* Rule 4 reverses the arcs running from the out-side to the in-side of a
  maximal transitive module when there are fewer of them than module vertices.

Every rule reports the arcs it touched by original vertex id.  A returned
parameter below zero means the instance is a NO-instance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import Arc, Tournament, iter_bits, vertex_in_triangle


@dataclass(frozen=True)
class RuleApplication:
    rule: int
    k_delta: int
    deleted: tuple[int, ...] = ()
    reversed: tuple[Arc, ...] = ()
    cuts: tuple[int, ...] | None = None
    module: tuple[int, ...] = field(default=(), compare=False)


def _label_arcs(t: Tournament, arcs) -> tuple[Arc, ...]:
    return tuple((t.ids[u], t.ids[v]) for u, v in arcs)


def apply_rule1(t: Tournament) -> tuple[Tournament, list[int]]:
    deleted: list[int] = []
    while True:
        free = [v for v in range(t.n) if not vertex_in_triangle(t, v)]
        if not free:
            return t, deleted
        deleted.extend(t.ids[v] for v in free)
        t = t.delete_vertices(free)


def rule2_candidate(t: Tournament, k: int) -> Arc | None:
    """First arc (in row-major order) lying in more than ``k`` triangles."""
    for u in range(t.n):
        into_u = t.in_mask(u)
        for v in iter_bits(t.out_mask(u)):
            if (t.out_mask(v) & into_u).bit_count() > k:
                return u, v
    return None


def apply_rule2(t: Tournament, k: int) -> tuple[Tournament, int, list[Arc]]:
    if k < 0:
        raise ValueError("k must be non-negative")
    reversed_arcs: list[Arc] = []
    while k >= 0:
        arc = rule2_candidate(t, k)
        if arc is None:
            break
        reversed_arcs.extend(_label_arcs(t, [arc]))
        t = t.reverse_arc(*arc)
        k -= 1
    return t, k, reversed_arcs


def _is_transitive_set(t: Tournament, mask: int) -> bool:
    degrees = sorted((t.out_mask(v) & mask).bit_count() for v in iter_bits(mask))
    return degrees == list(range(len(degrees)))


def module_closure(t: Tournament, mask: int) -> int:
    """Smallest module containing the vertex set ``mask``."""
    changed = True
    while changed:
        changed = False
        outside = ((1 << t.n) - 1) & ~mask
        for s in iter_bits(outside):
            seen = t.out_mask(s) & mask
            if seen and seen != mask:
                mask |= 1 << s
                changed = True
    return mask


def is_module(t: Tournament, mask: int) -> bool:
    outside = ((1 << t.n) - 1) & ~mask
    return all((t.out_mask(s) & mask) in (0, mask) for s in iter_bits(outside))


def find_maximal_transitive_modules(t: Tournament) -> list[list[int]]:
    """Maximal transitive modules, which partition the vertex set.

    Two vertices share a maximal transitive module iff the smallest module
    containing both is transitive; overlapping transitive modules have a
    transitive union, so this relation is an equivalence.
    """
    n = t.n
    comp = list(range(n))

    def find(x: int) -> int:
        while comp[x] != x:
            comp[x] = comp[comp[x]]
            x = comp[x]
        return x

    for u in range(n):
        for v in range(u + 1, n):
            if find(u) == find(v):
                continue
            m = module_closure(t, (1 << u) | (1 << v))
            if _is_transitive_set(t, m):
                root = find(u)
                for w in iter_bits(m):
                    comp[find(w)] = root
    groups: dict[int, list[int]] = {}
    for v in range(n):
        groups.setdefault(find(v), []).append(v)
    return sorted(groups.values())


def rule4_candidate(t: Tournament) -> tuple[list[int], list[Arc]] | None:
    """A maximal transitive module with 0 < |Z| < |module|, and its Z."""
    for module in find_maximal_transitive_modules(t):
        if len(module) < 2:
            continue
        rep = module[0]
        ins, outs = t.in_mask(rep), t.out_mask(rep)
        mmask = sum(1 << v for v in module)
        ins &= ~mmask
        outs &= ~mmask
        z = [(u, v) for u in iter_bits(outs) for v in iter_bits(t.out_mask(u) & ins)]
        if 0 < len(z) < len(module):
            return module, z
    return None


def apply_rule4(t: Tournament, k: int) -> tuple[Tournament, int, list[Arc]]:
    if k < 0:
        raise ValueError("k must be non-negative")
    reversed_arcs: list[Arc] = []
    while k >= 0:
        found = rule4_candidate(t)
        if found is None:
            break
        _, z = found
        reversed_arcs.extend(_label_arcs(t, z))
        t = t.reverse_arcs(z)
        k -= len(z)
    return t, k, reversed_arcs
