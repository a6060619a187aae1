import sys

import pytest

from mtk import CYCLIC, TRIVIAL, DiGraph, GraphOfGroupsZ, QuotientPresentation, UndirectedGraph


def rose(n, cls=TRIVIAL, omega=None):
    g = DiGraph.build(["v"], [(f"e{i}", "v", "v") for i in range(n)])
    return QuotientPresentation(g, {"v": cls}, omega or {})


def bs_loop(m, n):
    g = DiGraph.build(["v"], [("e", "v", "v")])
    return QuotientPresentation(g, {"v": CYCLIC}, {"e": (m, n)})


def free_rose_gog(n):
    g = UndirectedGraph.from_pairs(["v"], [(f"a{i}", f"A{i}", "v", "v") for i in range(n)])
    return GraphOfGroupsZ(g, {"v": TRIVIAL})


@pytest.fixture
def bs23():
    return bs_loop(2, 3)


@pytest.fixture
def f2_gog():
    return free_rose_gog(2)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("tests.test_acceptance")
    if module is not None and module.LINES:
        terminalreporter.section("acceptance criteria")
        for line in module.LINES:
            terminalreporter.write_line(line)
