import os
from pathlib import Path

import numpy as np
import pytest

from alphacf import Graph, generate_erdos_renyi, read_graph
from alphacf.graph import connected_components

DATA = Path(__file__).parent / "data"
_REPORT = []


def path_graph(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(leaves):
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def complete_graph(n):
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def connected_er(n, p, seed):
    """First connected G(n, p) found from ``seed`` upwards."""
    while True:
        g = generate_erdos_renyi(n, p, seed)
        if connected_components(g)[1].size == 1:
            return g
        seed += 10_000


def dolphins_path():
    env = os.environ.get("ALPHACF_DOLPHINS")
    candidates = [Path(env)] if env else []
    candidates += [DATA / "dolphins.txt", DATA / "dolphins.gml"]
    return next((p for p in candidates if p.exists()), None)


@pytest.fixture(scope="session")
def dolphins():
    path = dolphins_path()
    if path is None:
        pytest.fail("Dolphin network not found: set ALPHACF_DOLPHINS or add "
                    "tests/data/dolphins.txt (or .gml)", pytrace=False)
    return read_graph(path)[0]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def report(request):
    """Record one pass/fail line per acceptance criterion."""
    def _record(criterion, passed, detail=""):
        _REPORT.append((criterion, bool(passed), detail))
        return passed
    return _record


def pytest_terminal_summary(terminalreporter):
    if not _REPORT:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, passed, detail in _REPORT:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {criterion}  {detail}")
