import os
import sys

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from corelab.graph import Graph  # noqa: E402

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# Lines reported by the acceptance module, printed after the run.
ACCEPTANCE_LINES: list[str] = []


@st.composite
def graphs(draw, min_n=0, max_n=9, p=None):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    if p is None:
        mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    else:
        mask = [draw(st.floats(0, 1)) < p for _ in pairs]
    return Graph(n, [e for e, keep in zip(pairs, mask) if keep])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def tmp_edge_file(tmp_path):
    def make(g: Graph, name="g.txt"):
        from corelab.graph import write_edge_list
        path = tmp_path / name
        write_edge_list(g, path)
        return str(path)
    return make
