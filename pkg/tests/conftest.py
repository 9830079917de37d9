from collections import defaultdict

import pytest
from hypothesis import strategies as st

from dmag.equivalence import separation_signature
from dmag.mixed_graph import ARROW, TAIL, MixedGraph, iter_mixed_graphs, parse_graph
from dmag.reachability import is_dmag

FIXTURES = {
    "K2": "A -> B",
    "CHAIN3": "A -> B\nB -> C",
    "COLL3": "A -> B\nC -> B",
    "FORK3": "B -> A\nB -> C",
    "BIARC": "A <-> B\nB -> C",
    "NONMAX4": "C <-> A\nA <-> B\nB <-> D\nA -> D\nB -> C",
    "MAX4": "C <-> A\nA <-> B\nB <-> D\nA -> D\nB -> C\nC <-> D",
}


@pytest.fixture(scope="session")
def graphs():
    return {name: parse_graph(text) for name, text in FIXTURES.items()}


def g(text: str) -> MixedGraph:
    return parse_graph(text.replace(";", "\n"))


@st.composite
def mixed_graphs(draw, min_vertices=1, max_vertices=5):
    n = draw(st.integers(min_vertices, max_vertices))
    vs = "ABCDEFG"[:n]
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            state = draw(st.integers(0, 3))
            if state == 1:
                edges.append((vs[i], vs[j], TAIL, ARROW))
            elif state == 2:
                edges.append((vs[i], vs[j], ARROW, TAIL))
            elif state == 3:
                edges.append((vs[i], vs[j], ARROW, ARROW))
    return MixedGraph(vs, edges)


@st.composite
def dags(draw, min_vertices=1, max_vertices=5):
    n = draw(st.integers(min_vertices, max_vertices))
    order = draw(st.permutations("ABCDEFG"[:n]))
    arcs = [(order[i], order[j]) for i in range(n) for j in range(i + 1, n) if draw(st.booleans())]
    return MixedGraph.from_edges(directed=arcs, vertices=order)


class Corpus:
    """All DMAGs on four labelled vertices, grouped by oracle equivalence."""

    def __init__(self, vertices="ABCD"):
        self.all_graphs = list(iter_mixed_graphs(vertices))
        self.dmags = [h for h in self.all_graphs if is_dmag(h)]
        classes = defaultdict(list)
        for h in self.dmags:
            classes[separation_signature(h)].append(h)
        self.classes = list(classes.values())
        self.class_of = {h: members for members in self.classes for h in members}
        by_skeleton = defaultdict(list)
        for h in self.dmags:
            by_skeleton[h.skeleton()].append(h)
        self.by_skeleton = list(by_skeleton.values())


@pytest.fixture(scope="session")
def corpus4():
    return Corpus("ABCD")


@pytest.fixture(scope="session")
def corpus3():
    return Corpus("ABC")


# === acceptance reporting

_ACCEPTANCE = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is not None and report.when == "call":
        number, title = marker.args
        detail = dict(report.user_properties).get("detail", "")
        _ACCEPTANCE.append((number, title, report.outcome, detail))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, outcome, detail in sorted(_ACCEPTANCE):
        status = "PASS" if outcome == "passed" else "FAIL"
        line = f"{status}  criterion {number}: {title}"
        terminalreporter.write_line(f"{line} ({detail})" if detail else line)
