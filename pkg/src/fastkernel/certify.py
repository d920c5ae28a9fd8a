"""Backward-weighted tournaments and arc-disjoint certificates.

A backward-weighted tournament on positions ``0..n-1`` is stored as a
strictly upper-triangular integer matrix ``W``: for ``i < j``, ``W[i, j] > 0``
means the arc between the two positions is the backward arc ``j -> i`` with
that weight, and ``W[i, j] == 0`` means the forward arc ``i -> j``.

A certificate of a backward arc ``tail -> head`` is a path ``head -> ... ->
tail`` of forward arcs inside the arc's span; an arc of weight ``w`` needs
``w`` arc-disjoint such paths.  Internally certificates are produced as
*units* ``(tail, head, path)`` over positions, one unit per weight unit.

Intervals are half-open position ranges ``(start, stop)``.
"""

from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

import numpy as np

from .core import FastKernelError, OrderedTournament, Tournament

Unit = tuple[int, int, tuple[int, ...]]


class CertificationError(FastKernelError, ValueError):
    pass


class IntervalKind(enum.Enum):
    SATISFYING = "satisfying"
    CRITICAL = "critical"
    DENSE = "dense"


class BackwardWeightedTournament:
    """Ordered tournament with positive integer weights on its backward arcs."""

    __slots__ = ("W", "labels", "_prefix")

    def __init__(self, W, labels: Sequence[Hashable] | None = None):
        W = np.array(W, dtype=np.int64)
        n = W.shape[0]
        if W.shape != (n, n):
            raise ValueError("weight matrix must be square")
        if np.any(np.tril(W) != 0) or np.any(W < 0):
            raise ValueError("weights must be non-negative and strictly upper triangular")
        self.W = W
        self.labels = tuple(range(n)) if labels is None else tuple(labels)
        if len(self.labels) != n:
            raise ValueError("need one label per position")
        self._prefix = None

    @classmethod
    def from_ordered(cls, ot: OrderedTournament, weights: dict | None = None) -> BackwardWeightedTournament:
        """Unit weights unless ``weights`` maps backward arcs ``(tail, head)`` to weights."""
        n = ot.n
        W = np.zeros((n, n), dtype=np.int64)
        for tail, head in ot.backward_arcs():
            w = 1 if weights is None else weights[(tail, head)]
            if w < 1:
                raise ValueError("backward arc weights must be positive")
            W[ot.position(head), ot.position(tail)] = w
        return cls(W, ot.sigma)

    @classmethod
    def from_backward(cls, n: int, arcs: dict[tuple[int, int], int]) -> BackwardWeightedTournament:
        """Build from ``{(tail_pos, head_pos): weight}``; every other pair is forward."""
        W = np.zeros((n, n), dtype=np.int64)
        for (tail, head), w in arcs.items():
            if not head < tail:
                raise ValueError(f"{(tail, head)} is not backward")
            if w < 1:
                raise ValueError("backward arc weights must be positive")
            W[head, tail] = w
        return cls(W)

    @property
    def n(self) -> int:
        return self.W.shape[0]

    def weight(self, tail: int, head: int) -> int:
        return int(self.W[head, tail]) if head < tail else 0

    def is_forward(self, u: int, v: int) -> bool:
        return u < v and self.W[u, v] == 0

    def backward_arcs(self) -> list[tuple[int, int]]:
        """``(tail, head)`` positions, sorted by head then tail."""
        heads, tails = np.nonzero(self.W)
        return [(int(t), int(h)) for h, t in zip(heads, tails)]

    @property
    def total_weight(self) -> int:
        return int(self.W.sum())

    def to_tournament(self) -> Tournament:
        n = self.n
        out = [0] * n
        for i in range(n):
            for j in range(i + 1, n):
                if self.W[i, j]:
                    out[j] |= 1 << i
                else:
                    out[i] |= 1 << j
        return Tournament(out)

    def _prefix_sums(self) -> np.ndarray:
        if self._prefix is None:
            P = np.zeros((self.n + 1, self.n + 1), dtype=np.int64)
            P[1:, 1:] = self.W.cumsum(0).cumsum(1)
            self._prefix = P
        return self._prefix

    def interval_weight(self, start: int, stop: int) -> int:
        if not 0 <= start < stop <= self.n:
            raise IndexError(f"interval {(start, stop)} outside 0..{self.n}")
        P = self._prefix_sums()
        return int(P[stop, stop] - P[start, stop] - P[stop, start] + P[start, start])

    def interval_weights(self) -> np.ndarray:
        """``M[a, b]`` = weight of the closed interval ``[a, b]`` (valid for a <= b)."""
        P = self._prefix_sums()
        d = np.diagonal(P)
        hi = np.arange(1, self.n + 1)
        lo = np.arange(self.n)
        return d[hi][None, :] - P[lo][:, hi] - P[hi][:, lo].T + d[lo][:, None]

    def interval_kinds(self) -> tuple[np.ndarray, np.ndarray]:
        """Boolean matrices (critical, dense) over closed intervals ``[a, b]``."""
        n = self.n
        M = self.interval_weights()
        a = np.arange(n)[:, None]
        b = np.arange(n)[None, :]
        length = b - a + 1
        valid = b >= a
        critical = valid & (length >= 2) & (2 * M == length - 1)
        dense = valid & (2 * M > length - 1)
        return critical, dense

    # structural edits, all returning new instances

    def without(self, pos: int) -> BackwardWeightedTournament:
        keep = [i for i in range(self.n) if i != pos]
        return BackwardWeightedTournament(self.W[np.ix_(keep, keep)],
                                          [self.labels[i] for i in keep])

    def restrict(self, start: int, stop: int) -> BackwardWeightedTournament:
        return BackwardWeightedTournament(self.W[start:stop, start:stop], self.labels[start:stop])

    def contract(self, start: int, stop: int) -> BackwardWeightedTournament:
        W = self.W
        outside = [*range(start), *range(stop, self.n)]
        sub = W[np.ix_(outside, outside)]
        n2 = len(outside) + 1
        c = start
        W2 = np.zeros((n2, n2), dtype=np.int64)
        W2[:c, :c] = sub[:c, :c]
        W2[:c, c + 1:] = sub[:c, c:]
        W2[c + 1:, c + 1:] = sub[c:, c:]
        # merged weights: a forward arc in a created 2-cycle is dropped, so the
        # pair is backward exactly when some member arc was backward
        W2[:c, c] = W[:start, start:stop].sum(axis=1)
        W2[c, c + 1:] = W[start:stop, stop:].sum(axis=0)
        label = tuple(self.labels[start:stop])
        return BackwardWeightedTournament(
            W2, [*self.labels[:start], label, *self.labels[stop:]])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BackwardWeightedTournament):
            return NotImplemented
        return self.labels == other.labels and np.array_equal(self.W, other.W)

    def __repr__(self) -> str:
        return f"BackwardWeightedTournament(n={self.n}, weight={self.total_weight})"


def interval_weight(tw: BackwardWeightedTournament, interval: tuple[int, int]) -> int:
    return tw.interval_weight(*interval)


def classify_interval(tw: BackwardWeightedTournament, interval: tuple[int, int]) -> IntervalKind:
    start, stop = interval
    size = stop - start
    twice = 2 * tw.interval_weight(start, stop)
    if twice > size - 1:
        return IntervalKind.DENSE
    if twice == size - 1 and size >= 2:
        return IntervalKind.CRITICAL
    return IntervalKind.SATISFYING


def contract_interval(tw: BackwardWeightedTournament, interval: tuple[int, int]) -> BackwardWeightedTournament:
    return tw.contract(*interval)


def find_violating_interval(tw: BackwardWeightedTournament) -> tuple[int, int] | None:
    """Smallest, then leftmost, interval with ``2 w(I) > |I| - 1``."""
    return _smallest(tw.interval_kinds()[1])


def _smallest(flags: np.ndarray) -> tuple[int, int] | None:
    a, b = np.nonzero(flags)
    if len(a) == 0:
        return None
    i = min(range(len(a)), key=lambda i: (b[i] - a[i], a[i]))
    return int(a[i]), int(b[i]) + 1


# certificates


@dataclass(frozen=True)
class OmegaCertificate:
    arc: tuple[Hashable, Hashable]
    paths: tuple[tuple[Hashable, ...], ...]


@dataclass(frozen=True)
class CertificateFamily:
    certificates: tuple[OmegaCertificate, ...] = ()

    def paths(self) -> Iterable[tuple[tuple, tuple]]:
        for cert in self.certificates:
            for path in cert.paths:
                yield cert.arc, path

    def __len__(self) -> int:
        return len(self.certificates)


def family_from_units(tw: BackwardWeightedTournament, units: Iterable[Unit]) -> CertificateFamily:
    grouped: dict[tuple[int, int], list[tuple[int, ...]]] = defaultdict(list)
    for tail, head, path in units:
        grouped[(tail, head)].append(path)
    lab = tw.labels
    certs = [OmegaCertificate((lab[t], lab[h]), tuple(tuple(lab[p] for p in path) for path in paths))
             for (t, h), paths in sorted(grouped.items(), key=lambda kv: (kv[0][1], kv[0][0]))]
    return CertificateFamily(tuple(certs))


def lift_contracted_units(units: Iterable[Unit], tw: BackwardWeightedTournament,
                          start: int, stop: int) -> list[Unit]:
    """Map units certified in ``tw.contract(start, stop)`` back to ``tw``.

    Inside a path the contracted vertex becomes the leftmost vertex of the
    interval; as a path endpoint it becomes the concrete endpoint of the
    original arc, whose weight units are handed out in position order.
    """
    shift = stop - start - 1
    c = start

    def up(p: int) -> int:
        return p + shift if p > c else p

    # remaining weight of original arcs merged into each contracted arc
    pending: dict[tuple[int, int], list[int]] = {}

    def take(tail2: int, head2: int) -> tuple[int, int]:
        key = (tail2, head2)
        if key not in pending:
            if tail2 == c:
                h = up(head2)
                pool = [z for z in range(start, stop) for _ in range(tw.weight(z, h))]
            else:
                t = up(tail2)
                pool = [z for z in range(start, stop) for _ in range(tw.weight(t, z))]
            pool.reverse()
            pending[key] = pool
        if not pending[key]:
            raise CertificationError("contracted arc carries more units than its parts")
        z = pending[key].pop()
        return (z, up(head2)) if tail2 == c else (up(tail2), z)

    lifted = []
    for tail2, head2, path in units:
        if c in (tail2, head2):
            tail, head = take(tail2, head2)
            endpoint = tail if tail2 == c else head
        else:
            tail, head = up(tail2), up(head2)
            endpoint = start
        lifted.append((tail, head, tuple(endpoint if p == c else up(p) for p in path)))
    return lifted


def _certify_units(tw: BackwardWeightedTournament) -> list[Unit]:
    n = tw.n
    if n < 2 or not tw.W.any():
        return []
    touched = np.zeros(n, dtype=bool)
    heads, tails = np.nonzero(tw.W)
    touched[heads] = True
    touched[tails] = True
    free = np.flatnonzero(~touched)
    if len(free) == 0:
        raise CertificationError("no vertex free of backward arcs; weight condition violated")
    vi = int(free[0])
    critical, _ = tw.interval_kinds()
    whole = bool(critical[0, n - 1])
    critical[0, n - 1] = False
    proper = _smallest(critical)

    if proper is not None:
        start, stop = proper
        outer = _certify_units(tw.contract(start, stop))
        inner = _certify_units(tw.restrict(start, stop))
        lifted = lift_contracted_units(outer, tw, start, stop)
        return lifted + [(t + start, h + start, tuple(p + start for p in path))
                         for t, h, path in inner]

    def up(p: int) -> int:
        return p + 1 if p >= vi else p

    if not whole:
        rest = _certify_units(tw.without(vi))
        return [(up(t), up(h), tuple(up(p) for p in path)) for t, h, path in rest]

    # whole ordering is the only critical interval: spend v_i on the longest
    # backward arc above it
    above = [(t - h, h, t) for h, t in zip(heads, tails) if h < vi < t]
    if not above:
        raise CertificationError(
            f"no backward arc above free vertex {vi}; counterexample instance W={tw.W.tolist()}")
    _, head, tail = max(above, key=lambda x: (x[0], -x[1], -x[2]))
    head, tail = int(head), int(tail)
    W = tw.W.copy()
    W[head, tail] -= 1  # a weight of 0 turns the arc forward
    reduced = BackwardWeightedTournament(W, tw.labels).without(vi)
    rest = _certify_units(reduced)
    return [(up(t), up(h), tuple(up(p) for p in path)) for t, h, path in rest] + \
        [(tail, head, (head, vi, tail))]


def certify_units(tw: BackwardWeightedTournament) -> list[Unit]:
    bad = find_violating_interval(tw)
    if bad is not None:
        raise CertificationError(f"interval {bad} has 2*w(I) > |I|-1")
    return _certify_units(tw)


def certify_all(tw: BackwardWeightedTournament) -> CertificateFamily:
    """Arc-disjoint certificates for every backward arc of ``tw``.

    Requires ``2 w(I) <= |I| - 1`` for every interval ``I``; otherwise raises
    :class:`CertificationError` naming a violating interval.
    """
    return family_from_units(tw, certify_units(tw))


def validate_units(tw: BackwardWeightedTournament, units: Iterable[Unit],
                   required: Iterable[tuple[int, int]] | None = None,
                   interval_of: Sequence[int] | None = None) -> bool:
    """Check units over positions: forward paths in span, counts, disjointness.

    ``required`` defaults to all backward arcs.  With ``interval_of`` every
    path arc must join two different intervals.
    """
    used: set[tuple[int, int]] = set()
    counts: dict[tuple[int, int], int] = defaultdict(int)
    for tail, head, path in units:
        if tw.weight(tail, head) < 1:
            return False
        if len(path) < 2 or path[0] != head or path[-1] != tail:
            return False
        for x, y in zip(path, path[1:]):
            if not (head <= x and y <= tail and tw.is_forward(x, y)):
                return False
            if interval_of is not None and interval_of[x] == interval_of[y]:
                return False
            if (x, y) in used:
                return False
            used.add((x, y))
        counts[(tail, head)] += 1
    if required is None:
        required = tw.backward_arcs()
    required = set(required)
    if set(counts) != required:
        return False
    return all(counts[a] == tw.weight(*a) for a in required)


def validate_family(tw: BackwardWeightedTournament, family: CertificateFamily,
                    required=None, interval_of: Sequence[int] | None = None) -> bool:
    """Label-level check of a certificate family against ``tw``."""
    pos = {lab: i for i, lab in enumerate(tw.labels)}
    units = []
    try:
        for cert in family.certificates:
            tail, head = (pos[x] for x in cert.arc)
            for path in cert.paths:
                units.append((tail, head, tuple(pos[x] for x in path)))
        if required is not None:
            required = [(pos[t], pos[h]) for t, h in required]
    except KeyError:
        return False
    return validate_units(tw, units, required, interval_of)


def format_family(family: CertificateFamily) -> str:
    lines = []
    for (tail, head), path in family.paths():
        lines.append(f"{tail} {head} : {' '.join(map(str, path))}")
    return "".join(line + "\n" for line in lines)


def parse_family(text: str) -> CertificateFamily:
    grouped: dict[tuple[int, int], list[tuple[int, ...]]] = defaultdict(list)
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            arc, path = line.split(":")
            tail, head = map(int, arc.split())
            grouped[(tail, head)].append(tuple(map(int, path.split())))
        except ValueError as exc:
            raise ValueError(f"line {lineno}: malformed certificate path") from exc
    return CertificateFamily(tuple(OmegaCertificate(a, tuple(p)) for a, p in grouped.items()))
