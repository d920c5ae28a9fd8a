"""Kernelization for feedback arc set in tournaments."""

from .core import IntervalPartition, OrderedTournament, Tournament, is_acyclic, transitive_ordering
from .exact import fas_at_most, fas_exact, verify_reversal_acyclic
from .kernelize import KernelResult, Verdict, decide, kernel_linear, kernel_subquadratic, replay_trace

__all__ = [
    "IntervalPartition",
    "KernelResult",
    "OrderedTournament",
    "Tournament",
    "Verdict",
    "decide",
    "fas_at_most",
    "fas_exact",
    "is_acyclic",
    "kernel_linear",
    "kernel_subquadratic",
    "replay_trace",
    "transitive_ordering",
    "verify_reversal_acyclic",
]
