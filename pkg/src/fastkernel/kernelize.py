"""Kernelization drivers, reduction traces and the end-to-end decision procedure."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Any

from .approx import best_ordering
from .certify import BackwardWeightedTournament
from .core import (
    Arc,
    FastKernelError,
    OrderedTournament,
    Tournament,
    is_acyclic,
    topological_order,
)
from .exact import DEFAULT_LIMIT, fas_exact, verify_reversal_acyclic
from .io import fingerprint
from .rules import RuleApplication, apply_rule1, find_maximal_transitive_modules, rule2_candidate, rule4_candidate
from .safepart import SafePartitionError, apply_rule3, find_safe_partition


class TraceMismatch(FastKernelError, ValueError):
    pass


class Verdict(str, enum.Enum):
    KERNEL = "KERNEL"
    NO = "NO"


@dataclass
class ReductionTrace:
    """Every rule firing, in order, with arcs and vertices by original id."""

    n: int
    fingerprint: str
    k: int
    steps: list[RuleApplication] = field(default_factory=list)

    @classmethod
    def start(cls, t: Tournament, k: int) -> ReductionTrace:
        return cls(t.n, fingerprint(t), k)

    def record(self, step: RuleApplication) -> None:
        self.steps.append(step)

    @property
    def total_k_delta(self) -> int:
        return sum(s.k_delta for s in self.steps)

    def reversals(self) -> list[Arc]:
        return [arc for s in self.steps for arc in s.reversed]

    def to_text(self) -> str:
        lines = [f"trace n={self.n} fingerprint={self.fingerprint} k={self.k}"]
        for s in self.steps:
            parts = [f"rule={s.rule}", f"k_delta={s.k_delta}"]
            if s.deleted:
                parts.append("delete=" + ",".join(map(str, s.deleted)))
            if s.reversed:
                parts.append("reverse=" + ",".join(f"{u}:{v}" for u, v in s.reversed))
            if s.cuts is not None:
                parts.append("cuts=" + ",".join(map(str, s.cuts)))
            lines.append(" ".join(parts))
        return "".join(line + "\n" for line in lines)

    @classmethod
    def from_text(cls, text: str) -> ReductionTrace:
        lines = [line for line in text.splitlines() if line.strip()]
        if not lines or not lines[0].startswith("trace "):
            raise TraceMismatch("line 1: missing trace header")

        def fields(line: str, lineno: int) -> dict[str, str]:
            try:
                return dict(tok.split("=", 1) for tok in line.split()[int(lineno == 1):])
            except ValueError:
                raise TraceMismatch(f"line {lineno}: malformed field") from None

        head = fields(lines[0], 1)
        try:
            trace = cls(int(head["n"]), head["fingerprint"], int(head["k"]))
            for lineno, line in enumerate(lines[1:], 2):
                f = fields(line, lineno)
                deleted = tuple(int(x) for x in f["delete"].split(",")) if "delete" in f else ()
                rev = tuple(tuple(int(y) for y in x.split(":")) for x in f["reverse"].split(",")) \
                    if "reverse" in f else ()
                cuts = tuple(int(x) for x in f["cuts"].split(",") if x) if "cuts" in f else None
                trace.record(RuleApplication(int(f["rule"]), int(f["k_delta"]), deleted, rev, cuts))
        except (KeyError, ValueError) as exc:
            raise TraceMismatch(f"malformed trace: {exc}") from None
        return trace


def apply_step(t: Tournament, step: RuleApplication) -> Tournament:
    index = {label: i for i, label in enumerate(t.ids)}
    try:
        if step.reversed:
            t = t.reverse_arcs([(index[u], index[v]) for u, v in step.reversed])
        if step.deleted:
            t = t.delete_vertices([index[v] for v in step.deleted])
    except (KeyError, ValueError) as exc:
        raise TraceMismatch(f"rule {step.rule} step does not apply: {exc}") from None
    return t


def replay_trace(t: Tournament, trace: ReductionTrace) -> Tournament:
    if t.n != trace.n or fingerprint(t) != trace.fingerprint:
        raise TraceMismatch("trace was recorded on a different instance")
    for step in trace.steps:
        t = apply_step(t, step)
    return t


@dataclass
class KernelResult:
    kernel: Tournament
    k_remaining: int
    trace: ReductionTrace
    verdict: Verdict
    stats: dict[str, Any] = field(default_factory=dict)

    def stats_lines(self) -> str:
        return "".join(f"{key}={value}\n" for key, value in self.stats.items())


def subquadratic_bound(k: int) -> float:
    return math.sqrt(4 * k ** 3 + 2 * k ** 2 - k) + 2 * k


def _finish(kernel: Tournament, k: int, trace: ReductionTrace, verdict: Verdict,
            stats: dict[str, Any]) -> KernelResult:
    stats["vertices_after"] = kernel.n
    stats["k_after"] = k
    stats["verdict"] = verdict.value
    return KernelResult(kernel, k, trace, verdict, stats)


def _rule1(work: Tournament, trace: ReductionTrace, firings: dict[str, int]) -> Tournament:
    work, deleted = apply_rule1(work)
    if deleted:
        trace.record(RuleApplication(1, 0, deleted=tuple(deleted)))
        firings["rule1"] += 1
    return work


def _rule2_once(work: Tournament, k: int, trace: ReductionTrace, firings) -> tuple[Tournament, int, bool]:
    arc = rule2_candidate(work, k)
    if arc is None:
        return work, k, False
    u, v = arc
    trace.record(RuleApplication(2, 1, reversed=((work.ids[u], work.ids[v]),)))
    firings["rule2"] += 1
    return work.reverse_arc(u, v), k - 1, True


def _rule4_once(work: Tournament, k: int, trace: ReductionTrace, firings) -> tuple[Tournament, int, bool]:
    found = rule4_candidate(work)
    if found is None:
        return work, k, False
    module, z = found
    trace.record(RuleApplication(
        4, len(z), reversed=tuple((work.ids[u], work.ids[v]) for u, v in z),
        module=tuple(work.ids[v] for v in module)))
    firings["rule4"] += 1
    return work.reverse_arcs(z), k - len(z), True


def kernel_subquadratic(t: Tournament, k: int) -> KernelResult:
    """Apply Rules 2, 1 and 4 until none fires."""
    if k < 0:
        raise ValueError("k must be non-negative")
    trace = ReductionTrace.start(t, k)
    firings = {"rule1": 0, "rule2": 0, "rule4": 0}
    stats: dict[str, Any] = {"mode": "subquadratic", "vertices_before": t.n, "k_before": k}
    work = t
    changed = True
    while changed:
        changed = False
        fired = True
        while fired:
            work, k, fired = _rule2_once(work, k, trace, firings)
            changed |= fired
            if k < 0:
                stats.update(firings)
                return _finish(work, k, trace, Verdict.NO, stats)
        before = len(trace.steps)
        work = _rule1(work, trace, firings)
        changed |= len(trace.steps) > before
        work, k, fired = _rule4_once(work, k, trace, firings)
        changed |= fired
        if k < 0:
            stats.update(firings)
            return _finish(work, k, trace, Verdict.NO, stats)
    stats.update(firings)
    stats["bound"] = round(subquadratic_bound(k), 3)
    stats["module_sizes"] = ",".join(str(len(m)) for m in find_maximal_transitive_modules(work))
    if work.n:
        ho = best_ordering(work, "kwiksort", restarts=8)
        ot = OrderedTournament(work, ho.ordering)
        stats["achieved_S"] = ho.backward_count
        stats["max_backward_length"] = max((ot.span_length(a) for a in ot.backward_arcs()), default=0)
    else:
        stats["achieved_S"] = 0
        stats["max_backward_length"] = 0
    return _finish(work, k, trace, Verdict.KERNEL, stats)


def kernel_linear(t: Tournament, k: int, epsilon: float = 1.0, heuristic: str = "kwiksort",
                  restarts: int = 32, seed: int = 0, exact_limit: int = DEFAULT_LIMIT,
                  extra_rules: bool = False) -> KernelResult:
    """Alternate safe-partition reversals (Rule 3) with Rule 1.

    The feedback arc set S comes from ``heuristic``; the kernel ends with at
    most ``2 |S|`` vertices unless no safe partition could be found.  With
    ``extra_rules`` Rules 2 and 4 also run each round.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    trace = ReductionTrace.start(t, k)
    firings = {"rule1": 0, "rule2": 0, "rule3": 0, "rule4": 0}
    stats: dict[str, Any] = {"mode": "linear", "vertices_before": t.n, "k_before": k}
    work = _rule1(t, trace, firings)
    s_size = 0
    stuck = False
    ho = ordered = None
    verdict = Verdict.KERNEL
    while True:
        if extra_rules:
            fired = True
            while fired and k >= 0:
                work, k, fired = _rule2_once(work, k, trace, firings)
                if not fired:
                    work, k, fired = _rule4_once(work, k, trace, firings)
            work = _rule1(work, trace, firings)
            if k < 0:
                verdict = Verdict.NO
                break
        if k == 0 and not is_acyclic(work):
            verdict = Verdict.NO
            break
        ho = best_ordering(work, heuristic, restarts, seed, exact_limit=exact_limit)
        ordered = work
        s_size = ho.backward_count
        stats.setdefault("initial_S", s_size)
        if s_size == 0 or work.n < 2 * s_size + 1:
            break
        tw = BackwardWeightedTournament.from_ordered(OrderedTournament(work, ho.ordering))
        try:
            sp = find_safe_partition(tw, s_size)
        except SafePartitionError:
            stuck = True
            break
        work, k, reversed_ids = apply_rule3(work, ho.ordering, sp, k)
        trace.record(RuleApplication(3, sp.weight, reversed=tuple(reversed_ids),
                                     cuts=sp.partition.boundaries))
        firings["rule3"] += 1
        if k < 0:
            verdict = Verdict.NO
            break
        work = _rule1(work, trace, firings)
    stats.update(firings)
    stats.setdefault("initial_S", s_size)
    stats["achieved_S"] = s_size
    stats["bound"] = 2 * s_size
    stats["epsilon_bound"] = round((2 + epsilon) * stats["k_before"], 3)
    stats["S_within_ratio"] = stats["initial_S"] <= (1 + epsilon / 2) * stats["k_before"]
    stats["safe_partition_stuck"] = stuck
    if ordered is work and ho.backward_count:
        ot = OrderedTournament(work, ho.ordering)
        stats["max_backward_length"] = max(ot.span_length(a) for a in ot.backward_arcs())
    else:
        stats["max_backward_length"] = 0
    return _finish(work, k, trace, verdict, stats)


def kernelize(t: Tournament, k: int, mode: str = "linear", **config) -> KernelResult:
    if mode == "linear":
        return kernel_linear(t, k, **config)
    if mode == "subquadratic":
        return kernel_subquadratic(t, k)
    raise ValueError(f"unknown mode {mode!r}")


@dataclass(frozen=True)
class Decision:
    yes: bool
    arcs: tuple[Arc, ...] | None
    kernel_result: KernelResult


def lift_solution(t: Tournament, trace: ReductionTrace, kernel_arcs) -> list[Arc]:
    """Feedback arc set of ``t`` (compact indices) from trace reversals plus a kernel solution.

    The arcs whose orientation differs after all reversals form a feedback
    arc set; reading off the backward arcs of a topological order of what
    remains makes it minimal, so reversing it leaves ``t`` acyclic.
    """
    index = {label: i for i, label in enumerate(t.ids)}
    out = [t.out_mask(v) for v in range(t.n)]
    for u, v in [*trace.reversals(), *kernel_arcs]:
        a, b = index[u], index[v]
        if not out[a] >> b & 1:
            raise TraceMismatch(f"reversal {u}->{v} does not apply")
        out[a] ^= 1 << b
        out[b] |= 1 << a
    kept = [t.out_mask(v) & out[v] for v in range(t.n)]
    order = topological_order(kept)
    if order is None:
        raise FastKernelError("lifted arc set is not a feedback arc set")
    return OrderedTournament(t, order).backward_arcs()


def decide(t: Tournament, k: int, mode: str = "linear", exact_limit: int = DEFAULT_LIMIT,
           **config) -> Decision:
    """Kernelize, solve the kernel exactly and lift a solution back to ``t``."""
    if mode == "linear":
        config.setdefault("exact_limit", exact_limit)
    kr = kernelize(t, k, mode, **config)
    if kr.verdict is Verdict.NO:
        return Decision(False, None, kr)
    res = fas_exact(kr.kernel, exact_limit)
    if res.fas_size > kr.k_remaining:
        return Decision(False, None, kr)
    kernel_arcs = [(kr.kernel.ids[u], kr.kernel.ids[v]) for u, v in res.minimal_fas]
    arcs = lift_solution(t, kr.trace, kernel_arcs)
    if len(arcs) > k or not verify_reversal_acyclic(t, arcs):
        raise FastKernelError("lifted solution failed verification")
    return Decision(True, tuple((t.ids[u], t.ids[v]) for u, v in arcs), kr)
