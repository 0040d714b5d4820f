import functools

import networkx as nx
import pytest

from carpet_wiener import build_graph, build_vertex_table
from carpet_wiener.metric import PairMetric


@functools.lru_cache(maxsize=None)
def table(level):
    return build_vertex_table(level)


@functools.lru_cache(maxsize=None)
def graph(level):
    return build_graph(level)


@functools.lru_cache(maxsize=None)
def metric(level):
    return PairMetric(table(level))


def _in_carpet(i, j, depth):
    for _ in range(depth):
        if i % 3 == 1 and j % 3 == 1:
            return False
        i //= 3
        j //= 3
    return True


@functools.lru_cache(maxsize=None)
def carved_carpet(level):
    """Γn rebuilt from the geometry: boundaries of the unit cells that survive carving.

    Shares no code with the package, so it checks both the gluing and the BFS.
    """
    side = 3 ** (level - 1)
    g = nx.Graph()
    for i in range(side):
        for j in range(side):
            if _in_carpet(i, j, level - 1):
                corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)]
                for k in range(4):
                    g.add_edge(corners[k], corners[(k + 1) % 4])
    return g


@functools.lru_cache(maxsize=None)
def carved_distances(level):
    return dict(nx.all_pairs_shortest_path_length(carved_carpet(level)))


@pytest.fixture
def tables():
    return table


@pytest.fixture
def graphs():
    return graph


# --- acceptance reporting ---------------------------------------------------

ACCEPTANCE = {}


@pytest.fixture
def record():
    """Store one verdict line per acceptance criterion."""
    def _record(number, ok, detail):
        ACCEPTANCE[number] = (ok, detail)
    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
