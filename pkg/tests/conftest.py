from __future__ import annotations

import itertools

import pytest

from dlrewrite.datalog import ABox
from dlrewrite.logic import Atom, Const
from dlrewrite.syntax import parse_abox, parse_clause


def C(text: str):
    """Clause from ``~A(X) | B(X)`` notation."""
    return parse_clause(text)


def A(text: str) -> ABox:
    return parse_abox(text)


def fact(pred: str, *names: str) -> Atom:
    return Atom(pred, tuple(Const(n) for n in names))


def small_aboxes(concepts, roles, individuals=("a", "b"), max_facts=2):
    """Every ABox with at most ``max_facts`` facts over the given signature."""
    inds = [Const(i) for i in individuals]
    facts = [Atom(c, (i,)) for c in sorted(concepts) for i in inds]
    facts += [Atom(r, (i, j)) for r in sorted(roles) for i in inds for j in inds]
    for k in range(max_facts + 1):
        for combo in itertools.combinations(facts, k):
            yield ABox(frozenset(combo))


@pytest.fixture
def t_ex_bundle():
    from dlrewrite import fixtures
    from dlrewrite.pipeline import rewrite
    return rewrite(fixtures.tbox("t_ex"))


def pytest_terminal_summary(terminalreporter):
    from acceptance_report import RESULTS
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for key in sorted(RESULTS, key=lambda k: int(k.split("-")[1])):
            terminalreporter.write_line(RESULTS[key])
