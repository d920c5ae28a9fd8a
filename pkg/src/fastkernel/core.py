"""Tournaments, ordered tournaments and interval partitions.

Adjacency is a packed bit matrix: row ``v`` of ``out`` is a Python int whose
bit ``w`` is set iff ``v -> w``.  Vertices are addressed by compact indices
``0..n-1``; ``ids[i]`` keeps the original label of index ``i`` so deletions
can be traced back to the input instance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

Arc = tuple[int, int]


class FastKernelError(Exception):
    """Base class for errors raised by this package."""


class CyclicTournamentError(FastKernelError, ValueError):
    pass


class UnknownArcError(FastKernelError, KeyError):
    pass


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Tournament:
    """Complete orientation on ``n`` vertices."""

    __slots__ = ("_out", "_in", "ids")

    def __init__(self, out_masks: Sequence[int], ids: Sequence[int] | None = None):
        n = len(out_masks)
        full = (1 << n) - 1
        in_masks = [0] * n
        for v, row in enumerate(out_masks):
            if row & ~full:
                raise ValueError(f"row {v} has bits outside 0..{n - 1}")
            if row >> v & 1:
                raise ValueError(f"self-loop at {v}")
            for w in iter_bits(row):
                in_masks[w] |= 1 << v
        for v in range(n):
            if out_masks[v] & in_masks[v] or (out_masks[v] | in_masks[v]) != full ^ (1 << v):
                raise ValueError(f"vertex {v} violates the tournament property")
        self._out = list(out_masks)
        self._in = in_masks
        if ids is None:
            ids = range(n)
        self.ids = tuple(ids)
        if len(self.ids) != n or len(set(self.ids)) != n:
            raise ValueError("ids must be n distinct labels")

    # construction

    @classmethod
    def from_matrix(cls, rows: Sequence[Sequence[int]], ids: Sequence[int] | None = None) -> Tournament:
        out = []
        for row in rows:
            mask = 0
            for j, bit in enumerate(row):
                if bit:
                    mask |= 1 << j
            out.append(mask)
        return cls(out, ids)

    @classmethod
    def from_order(cls, order: Sequence[int]) -> Tournament:
        """Transitive tournament in which ``order[i] -> order[j]`` for all i < j."""
        out = [0] * len(order)
        after = 0
        for v in reversed(order):
            out[v] = after
            after |= 1 << v
        return cls(out)

    @classmethod
    def transitive(cls, n: int) -> Tournament:
        return cls.from_order(range(n))

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[Arc]) -> Tournament:
        out = [0] * n
        for u, v in arcs:
            out[u] |= 1 << v
        return cls(out)

    # queries

    @property
    def n(self) -> int:
        return len(self._out)

    def __len__(self) -> int:
        return len(self._out)

    def has_arc(self, u: int, v: int) -> bool:
        return bool(self._out[u] >> v & 1)

    def out_mask(self, v: int) -> int:
        return self._out[v]

    def in_mask(self, v: int) -> int:
        return self._in[v]

    def out_degree(self, v: int) -> int:
        return self._out[v].bit_count()

    def in_degree(self, v: int) -> int:
        return self._in[v].bit_count()

    def arcs(self) -> Iterator[Arc]:
        for u, row in enumerate(self._out):
            for v in iter_bits(row):
                yield u, v

    def matrix(self) -> list[list[int]]:
        return [[row >> j & 1 for j in range(self.n)] for row in self._out]

    def index_of(self, label: int) -> int:
        return self.ids.index(label)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Tournament):
            return NotImplemented
        return self._out == other._out and self.ids == other.ids

    def __hash__(self) -> int:
        return hash((tuple(self._out), self.ids))

    def __repr__(self) -> str:
        return f"Tournament(n={self.n}, ids={list(self.ids)})"

    # derived instances

    def copy(self) -> Tournament:
        return Tournament(self._out, self.ids)

    def reverse_arc(self, u: int, v: int) -> Tournament:
        return self.reverse_arcs([(u, v)])

    def reverse_arcs(self, arcs: Iterable[Arc]) -> Tournament:
        out = list(self._out)
        for u, v in arcs:
            if not out[u] >> v & 1:
                raise UnknownArcError((u, v))
            out[u] ^= 1 << v
            out[v] |= 1 << u
        return Tournament(out, self.ids)

    def induced(self, vertices: Sequence[int]) -> Tournament:
        """Subtournament on ``vertices`` (compact indices), in the given order."""
        out = []
        for v in vertices:
            row = self._out[v]
            mask = 0
            for i, w in enumerate(vertices):
                if row >> w & 1:
                    mask |= 1 << i
            out.append(mask)
        return Tournament(out, [self.ids[v] for v in vertices])

    def delete_vertices(self, vertices: Iterable[int]) -> Tournament:
        gone = set(vertices)
        return self.induced([v for v in range(self.n) if v not in gone])


def is_acyclic(t: Tournament) -> bool:
    # A tournament is transitive iff its score sequence is 0, 1, ..., n-1.
    return sorted(t.out_degree(v) for v in range(t.n)) == list(range(t.n))


def topological_order(out_masks: Sequence[int]) -> list[int] | None:
    """Topological order of a digraph given by out-neighbour bitmasks, or None if cyclic."""
    n = len(out_masks)
    indeg = [0] * n
    for row in out_masks:
        for w in iter_bits(row):
            indeg[w] += 1
    ready = [v for v in range(n) if indeg[v] == 0]
    order = []
    while ready:
        v = ready.pop()
        order.append(v)
        for w in iter_bits(out_masks[v]):
            indeg[w] -= 1
            if indeg[w] == 0:
                ready.append(w)
    return order if len(order) == n else None


def transitive_ordering(t: Tournament) -> list[int]:
    if not is_acyclic(t):
        raise CyclicTournamentError("tournament has a directed cycle")
    return sorted(range(t.n), key=lambda v: -t.out_degree(v))


def triangles_through_arc(t: Tournament, u: int, v: int) -> int:
    """Number of directed triangles u -> v -> w -> u."""
    if not t.has_arc(u, v):
        raise UnknownArcError((u, v))
    return (t.out_mask(v) & t.in_mask(u)).bit_count()


def vertex_in_triangle(t: Tournament, v: int) -> bool:
    into = t.in_mask(v)
    return any(t.out_mask(w) & into for w in iter_bits(t.out_mask(v)))


class OrderedTournament:
    """A tournament together with a linear ordering ``sigma`` (position -> vertex)."""

    __slots__ = ("tournament", "sigma", "_pos")

    def __init__(self, tournament: Tournament, sigma: Sequence[int]):
        if sorted(sigma) != list(range(tournament.n)):
            raise ValueError("sigma must be a permutation of the vertices")
        self.tournament = tournament
        self.sigma = tuple(sigma)
        self._pos = [0] * tournament.n
        for i, v in enumerate(self.sigma):
            self._pos[v] = i

    @property
    def n(self) -> int:
        return self.tournament.n

    def position(self, v: int) -> int:
        return self._pos[v]

    def backward_arcs(self) -> list[Arc]:
        """Arcs from a later to an earlier position, sorted by (head pos, tail pos)."""
        t = self.tournament
        result = []
        for i, head in enumerate(self.sigma):
            for j in range(i + 1, self.n):
                tail = self.sigma[j]
                if t.has_arc(tail, head):
                    result.append((tail, head))
        return result

    def backward_count(self) -> int:
        t = self.tournament
        before = 0
        count = 0
        for v in self.sigma:
            count += (t.out_mask(v) & before).bit_count()
            before |= 1 << v
        return count

    def span_length(self, arc: Arc) -> int:
        u, v = arc
        if not self.tournament.has_arc(u, v):
            raise UnknownArcError(arc)
        return abs(self._pos[u] - self._pos[v]) + 1

    def is_backward(self, arc: Arc) -> bool:
        u, v = arc
        return self.tournament.has_arc(u, v) and self._pos[u] > self._pos[v]


@dataclass(frozen=True)
class IntervalPartition:
    """Consecutive intervals of an ordering of length ``n``.

    ``boundaries`` are the cut positions strictly inside ``(0, n)``; interval
    ``i`` covers positions ``[cuts[i], cuts[i+1])`` with 0 and n appended.
    """

    n: int
    boundaries: tuple[int, ...] = ()

    def __post_init__(self):
        prev = 0
        for b in self.boundaries:
            if not prev < b < self.n:
                raise ValueError(f"bad cut positions {self.boundaries} for n={self.n}")
            prev = b

    @classmethod
    def from_sizes(cls, sizes: Sequence[int]) -> IntervalPartition:
        cuts = []
        acc = 0
        for s in sizes[:-1]:
            acc += s
            cuts.append(acc)
        return cls(sum(sizes), tuple(cuts))

    @classmethod
    def singletons(cls, n: int) -> IntervalPartition:
        return cls(n, tuple(range(1, n)))

    def intervals(self) -> list[range]:
        edges = (0, *self.boundaries, self.n)
        return [range(a, b) for a, b in zip(edges, edges[1:])]

    def interval_index(self) -> list[int]:
        """Interval number of every position."""
        index = []
        for i, r in enumerate(self.intervals()):
            index.extend([i] * len(r))
        return index
