import itertools

import pytest
from hypothesis import HealthCheck, settings

from hamhit.graph import Graph

settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def graph_from_mask(n: int, mask: int) -> Graph:
    pairs = list(itertools.combinations(range(n), 2))
    return Graph(n, [e for i, e in enumerate(pairs) if mask >> i & 1])


@pytest.fixture
def petersen():
    from hamhit.graph import petersen_graph

    return petersen_graph()


# one line per acceptance criterion, echoed at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
