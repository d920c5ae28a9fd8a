"""Safe interval partitions and the reversal rule they license.

A partition of the ordering into intervals is safe when the backward arcs
running between intervals can be certified using only arcs that also run
between intervals.  Reversing those backward arcs is then an exact
reduction: the minimum feedback arc set shrinks by exactly their weight.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .certify import (
    BackwardWeightedTournament,
    CertificateFamily,
    CertificationError,
    Unit,
    _smallest,
    certify_units,
    family_from_units,
    lift_contracted_units,
    validate_units,
)
from .core import Arc, FastKernelError, IntervalPartition, OrderedTournament, Tournament


class SafePartitionError(FastKernelError, ValueError):
    pass


@dataclass(frozen=True)
class SafePartition:
    partition: IntervalPartition
    between_backward: tuple[Arc, ...]
    family: CertificateFamily
    weight: int

    def __post_init__(self):
        if not self.between_backward:
            raise SafePartitionError("a safe partition needs a backward arc between intervals")


def _between_backward(tw: BackwardWeightedTournament, interval_of: Sequence[int]) -> list[tuple[int, int]]:
    return [(t, h) for t, h in tw.backward_arcs() if interval_of[t] != interval_of[h]]


def _safe(tw: BackwardWeightedTournament, twice_p: int) -> tuple[list[int], list[Unit]]:
    """Interval sizes and certificate units; ``twice_p`` is 2p (p may be a half-integer)."""
    n = tw.n
    total = tw.total_weight
    if total == 0:
        raise SafePartitionError(
            f"contraction left no backward arc (n={n}, 2p={twice_p}); no safe partition found")
    assert n >= twice_p + 1 and 2 * total <= twice_p
    _, dense = tw.interval_kinds()
    chosen = _smallest(dense)
    if chosen is None:
        return [1] * n, certify_units(tw)
    start, stop = chosen
    sizes, units = _safe(tw.contract(start, stop), twice_p - (stop - start))
    # the contracted vertex sits at position `start`; widen its interval
    acc = 0
    for i, s in enumerate(sizes):
        if acc <= start < acc + s:
            sizes[i] += stop - start - 1
            break
        acc += s
    return sizes, lift_contracted_units(units, tw, start, stop)


def _forward_paths(tw: BackwardWeightedTournament, head: int, tail: int,
                   interval_of: Sequence[int], used: set[tuple[int, int]]):
    """Forward paths head -> tail inside the span that avoid ``used``; direct arc first."""
    def extend(path: list[int]):
        x = path[-1]
        if tw.is_forward(x, tail) and (x, tail) not in used and interval_of[x] != interval_of[tail]:
            yield (*path, tail)
        for y in range(x + 1, tail):
            if tw.is_forward(x, y) and (x, y) not in used and interval_of[x] != interval_of[y]:
                path.append(y)
                yield from extend(path)
                path.pop()

    yield from extend([head])


def _certify_between(tw: BackwardWeightedTournament, interval_of: Sequence[int],
                     budget: list[int]) -> list[Unit] | None:
    arcs = sorted(_between_backward(tw, interval_of), key=lambda a: (a[0] - a[1], a[1]))
    demand = [a for a in arcs for _ in range(tw.weight(*a))]
    used: set[tuple[int, int]] = set()
    chosen: list[Unit] = []

    def solve(i: int) -> bool:
        if i == len(demand):
            return True
        tail, head = demand[i]
        for path in _forward_paths(tw, head, tail, interval_of, used):
            budget[0] -= 1
            if budget[0] < 0:
                return False
            steps = list(zip(path, path[1:]))
            used.update(steps)
            chosen.append((tail, head, path))
            if solve(i + 1):
                return True
            chosen.pop()
            used.difference_update(steps)
        return False

    return chosen if solve(0) else None


def search_safe_partition(tw: BackwardWeightedTournament, max_n: int = 14,
                          budget: int = 200_000) -> tuple[list[int], list[Unit]] | None:
    """Exhaustive search over interval partitions, finest first.

    Used when the contraction recursion gets stuck.  Returns interval sizes
    and certificate units, or None when no interval partition is safe.
    Raises SafePartitionError if ``n > max_n`` or the budget runs out.
    """
    n = tw.n
    if n > max_n:
        raise SafePartitionError(f"exhaustive search skipped: n={n} exceeds {max_n}")
    left = [budget]
    cut_sets = sorted(range(1 << (n - 1)), key=lambda m: (-m.bit_count(), m))
    for cuts in cut_sets:
        sizes, run = [], 1
        for i in range(n - 1):
            if cuts >> i & 1:
                sizes.append(run)
                run = 1
            else:
                run += 1
        sizes.append(run)
        interval_of = IntervalPartition.from_sizes(sizes).interval_index()
        if not _between_backward(tw, interval_of):
            continue
        units = _certify_between(tw, interval_of, left)
        if units is not None:
            return sizes, units
        if left[0] < 0:
            raise SafePartitionError("exhaustive search budget exhausted")
    return None


def find_safe_partition(tw: BackwardWeightedTournament, p: int | Fraction | None = None,
                        fallback: bool = True) -> SafePartition:
    """Safe partition with at least one backward arc between its intervals.

    ``p`` defaults to the total backward weight.  Requires ``n >= 2p + 1``,
    total weight ``<= p`` and at least one backward arc.  The contraction
    recursion can get stuck (for instance when every backward arc ends up
    inside one contracted interval); with ``fallback`` a bounded exhaustive
    search is tried before giving up.
    """
    total = tw.total_weight
    if p is None:
        p = total
    twice_p = 2 * Fraction(p)
    if twice_p.denominator != 1:
        raise ValueError("p must be an integer or half-integer")
    twice_p = int(twice_p)
    if total == 0:
        raise SafePartitionError("instance has no backward arc")
    if tw.n < twice_p + 1:
        raise SafePartitionError(f"need at least 2p+1 = {twice_p + 1} vertices, have {tw.n}")
    if 2 * total > twice_p:
        raise SafePartitionError(f"total weight {total} exceeds p = {Fraction(twice_p, 2)}")
    try:
        sizes, units = _safe(tw, twice_p)
    except (CertificationError, SafePartitionError) as exc:
        found = None
        if fallback:
            try:
                found = search_safe_partition(tw)
            except SafePartitionError:
                pass
        if found is None:
            raise SafePartitionError(str(exc)) from exc
        sizes, units = found
    partition = IntervalPartition.from_sizes(sizes)
    interval_of = partition.interval_index()
    between = _between_backward(tw, interval_of)
    if not between:
        raise SafePartitionError("partition has no backward arc between intervals")
    if not validate_units(tw, units, between, interval_of):
        raise SafePartitionError("lifted certificates failed validation")
    lab = tw.labels
    return SafePartition(
        partition,
        tuple((lab[t], lab[h]) for t, h in between),
        family_from_units(tw, units),
        sum(tw.weight(t, h) for t, h in between),
    )


def apply_rule3(t: Tournament, ordering: Sequence[int], sp: SafePartition,
                k: int) -> tuple[Tournament, int, list[Arc]]:
    """Reverse the between-interval backward arcs of ``sp``; ``k`` drops by their weight.

    ``sp`` must have been computed on the unit-weighted ``(t, ordering)``.
    Returns ``(t', k', reversed arcs by original id)``; ``k' < 0`` means NO.
    """
    ot = OrderedTournament(t, ordering)
    if sp.partition.n != t.n:
        raise SafePartitionError("partition does not match the instance")
    interval_of = sp.partition.interval_index()
    for arc in sp.between_backward:
        if not ot.is_backward(arc):
            raise SafePartitionError(f"{arc} is not a backward arc of the ordering")
        tail, head = arc
        if interval_of[ot.position(tail)] == interval_of[ot.position(head)]:
            raise SafePartitionError(f"{arc} lies inside one interval")
    reversed_ids = [(t.ids[u], t.ids[v]) for u, v in sp.between_backward]
    return t.reverse_arcs(sp.between_backward), k - sp.weight, reversed_ids
