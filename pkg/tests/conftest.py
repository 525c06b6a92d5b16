import random

import pytest
from hypothesis import strategies as st

from cyclerules.index import GraphIndex
from cyclerules.kb import KnowledgeGraph, Triple
from cyclerules.synthetic import random_kb


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def bush_kb() -> KnowledgeGraph:
    return KnowledgeGraph.from_strings(
        [
            ("GeorgeW", "spouse", "Laura"),
            ("Laura", "children", "Barbara"),
            ("GeorgeW", "children", "Barbara"),
        ]
    )


def mutual_kb() -> KnowledgeGraph:
    return KnowledgeGraph.from_strings([("a", "m", "b"), ("b", "m", "a")])


def hand_kb() -> KnowledgeGraph:
    return KnowledgeGraph.from_strings(
        [("a", "l", "t"), ("b", "l", "t"), ("a", "b0", "t")],
        types=[("a", "Person"), ("b", "Person")],
    )


@pytest.fixture
def bush():
    return bush_kb()


@pytest.fixture
def mutual():
    return mutual_kb()


@pytest.fixture
def hand():
    return hand_kb()


def random_suite(n=200, seed=0):
    """The fixed random-KB suite used by the acceptance checks."""
    rng = random.Random(seed)
    return [random_kb(rng) for _ in range(n)]


@st.composite
def small_kbs(draw, max_entities=6, max_predicates=3, max_facts=14, max_types=2):
    n_ent = draw(st.integers(1, max_entities))
    n_pred = draw(st.integers(1, max_predicates))
    facts = draw(
        st.lists(
            st.tuples(
                st.integers(0, n_ent - 1), st.integers(0, n_pred - 1), st.integers(0, n_ent - 1)
            ),
            max_size=max_facts,
        )
    )
    kb = KnowledgeGraph()
    for i in range(n_ent):
        kb.intern_entity(f"e{i}")
    for i in range(n_pred):
        kb.intern_predicate(f"p{i}")
    for f in facts:
        kb.add_fact(Triple(*f))
    n_types = draw(st.integers(0, max_types))
    for t in range(n_types):
        tid = kb.intern_type(f"T{t}")
        members = draw(st.sets(st.integers(0, n_ent - 1)))
        for e in members:
            kb.add_type(e, tid)
    return kb


def index_of(kb):
    return GraphIndex(kb)
