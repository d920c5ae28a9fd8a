"""Instance files and random instance generators.

An instance file is the vertex count on the first line followed by ``n``
rows of ``n`` characters; character ``j`` of row ``i`` is ``1`` iff ``i -> j``.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass

from .core import FastKernelError, Tournament


class InstanceFormatError(FastKernelError, ValueError):
    def __init__(self, message: str, line: int, column: int | None = None):
        where = f"line {line}" if column is None else f"line {line}, column {column}"
        super().__init__(f"{where}: {message}")
        self.line = line
        self.column = column


def parse_instance(text: str) -> Tournament:
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise InstanceFormatError("missing vertex count", 1)
    head = lines[0].strip()
    if not head.isdigit():
        raise InstanceFormatError(f"bad vertex count {head!r}", 1)
    n = int(head)
    rows = [line.strip() for line in lines[1:]]
    if len(rows) != n:
        raise InstanceFormatError(f"expected {n} matrix rows, found {len(rows)}", len(lines) + 1)
    for i, row in enumerate(rows):
        lineno = i + 2
        if len(row) != n:
            raise InstanceFormatError(f"row has {len(row)} characters, expected {n}", lineno)
        for j, ch in enumerate(row):
            if ch not in "01":
                raise InstanceFormatError(f"unexpected character {ch!r}", lineno, j + 1)
        if row[i] != "0":
            raise InstanceFormatError("diagonal entry must be 0", lineno, i + 1)
    for i in range(n):
        for j in range(i + 1, n):
            if rows[i][j] == rows[j][i]:
                what = "both" if rows[i][j] == "1" else "neither"
                raise InstanceFormatError(
                    f"antisymmetry violated: {what} of {i}->{j} and {j}->{i}", i + 2, j + 1)
    return Tournament.from_matrix([[c == "1" for c in row] for row in rows])


def format_instance(t: Tournament) -> str:
    rows = ("".join("1" if t.has_arc(i, j) else "0" for j in range(t.n)) for i in range(t.n))
    return f"{t.n}\n" + "".join(row + "\n" for row in rows)


def fingerprint(t: Tournament) -> str:
    return hashlib.sha256(format_instance(t).encode("ascii")).hexdigest()[:16]


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    n: int
    seed: int = 0
    planted_reversals: int = 0

    def __post_init__(self):
        if self.kind not in ("uniform", "planted"):
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if self.n < 0:
            raise ValueError("n must be non-negative")
        pairs = self.n * (self.n - 1) // 2
        if self.kind == "planted" and not 0 <= self.planted_reversals <= pairs:
            raise ValueError(f"planted reversals must lie in 0..{pairs}")


def generate(spec: GeneratorSpec) -> Tournament:
    rng = random.Random(spec.seed)
    n = spec.n
    if spec.kind == "uniform":
        out = [0] * n
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < 0.5:
                    out[i] |= 1 << j
                else:
                    out[j] |= 1 << i
        return Tournament(out)
    order = list(range(n))
    rng.shuffle(order)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    flipped = set(rng.sample(pairs, spec.planted_reversals))
    out = [0] * n
    for i, j in pairs:
        u, v = order[i], order[j]
        if (i, j) in flipped:
            u, v = v, u
        out[u] |= 1 << v
    return Tournament(out)
