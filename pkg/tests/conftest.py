import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from rrweights import Multigraph  # noqa: E402

IRREGULAR_EDGES = [(1, 2, 2), (2, 3, 1), (3, 4, 3), (4, 1, 1), (1, 3, 1)]

ACCEPTANCE_RESULTS = {}


def irregular_graph():
    return Multigraph.from_edges(4, IRREGULAR_EDGES, "irregular4")


def audit_graphs():
    return [
        Multigraph.complete(3),
        Multigraph.complete(4),
        Multigraph.complete(5),
        Multigraph.dipole(1),
        Multigraph.dipole(3),
        Multigraph.dipole(5),
        irregular_graph(),
    ]


@pytest.fixture
def irregular():
    return irregular_graph()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS):
        status, title = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"[{status}] criterion {key:>2}: {title}")
