import itertools

import pytest

from seqrule.memory import MemoryStore
from seqrule.tokens import Channel, rec


def store_sequence(store, records, tick=True):
    """Store records as one chain the way the agent does; returns the cells used."""
    prev, cells = None, []
    for r in records:
        cell = store.allocate_state(protect=cells)
        store.bind_step(prev, cell, r)
        cells.append(cell)
        prev = cell
        if tick:
            store.decay_tick()
    return cells


def dm2s_sequences():
    """All 64 record sequences an agent can write for one episode."""
    attrs = [rec(ch, v) for ch in (Channel.A1, Channel.A2) for v in (0, 1)]
    return [
        [rec("CUE", c), a, b, rec("ANS", ans)]
        for c, a, b, ans in itertools.product((0, 1), attrs, attrs, (0, 1))
    ]


@pytest.fixture
def store():
    return MemoryStore(16, decay=0.9)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
