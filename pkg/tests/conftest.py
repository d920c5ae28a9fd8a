import random

import pytest
from hypothesis import strategies as st

from fastkernel.core import Tournament


@pytest.fixture
def rng():
    return random.Random(20240917)


@pytest.fixture
def three_cycle():
    return Tournament.from_arcs(3, [(0, 1), (1, 2), (2, 0)])


@st.composite
def tournaments(draw, min_n=0, max_n=9):
    n = draw(st.integers(min_n, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    bits = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Tournament.from_arcs(n, [(i, j) if b else (j, i) for (i, j), b in zip(pairs, bits)])


_ACCEPTANCE_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE_KEY] = []


@pytest.fixture
def report(request):
    lines = request.config.stash[_ACCEPTANCE_KEY]

    def emit(criterion: int, ok: bool, detail: str) -> None:
        line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'} - {detail}"
        lines.append(line)
        print(line)

    return emit


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
