from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings

from conftest import A, C, fact
from dlrewrite import fixtures
from dlrewrite.datalog import ABox
from dlrewrite.oracle import (
    FRESH_CONSTANT, GroundingLimitExceeded, cautious_entails, certain_answers, entailed_facts,
    ground, ground_skolem, skolem_entails, solve,
)
from dlrewrite.syntax import parse_query
from strategies import cnf


def brute_force_sat(clauses, natoms: int) -> bool:
    for bits in itertools.product((False, True), repeat=natoms):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in c) for c in clauses):
            return True
    return False


# ---------------------------------------------------------------------------
# satisfiability

def test_solve_examples():
    assert solve([], 0) == set()
    assert solve([(1,), (-1, 2)], 2) == {1, 2}
    assert solve([(1,), (-1,)], 1) is None
    assert solve([()], 1) is None
    model = solve([(1, 2), (-1, 2), (1, -2)], 2)
    assert model == {1, 2}


@settings(max_examples=300)
@given(cnf())
def test_solve_agrees_with_truth_tables(problem):
    natoms, clauses = problem
    model = solve(clauses, natoms)
    assert (model is not None) == brute_force_sat(clauses, natoms)
    if model is not None:
        assert all(any((abs(l) in model) == (l > 0) for l in c) for c in clauses)


@pytest.mark.parametrize("seed", range(5))
def test_solve_on_larger_random_formulas(seed):
    rng = random.Random(seed)
    n = 20
    clauses = [tuple(sorted({rng.choice((1, -1)) * rng.randint(1, n) for _ in range(3)}))
               for _ in range(rng.randint(60, 100))]
    model = solve(clauses, n)
    if model is not None:
        assert all(any((abs(l) in model) == (l > 0) for l in c) for c in clauses)
    else:
        assert not brute_force_sat(clauses, n)


def test_pigeonhole_is_unsatisfiable():
    # three pigeons, two holes: p(i, h) is atom 2*i + h + 1
    def p(i, h):
        return 2 * i + h + 1
    clauses = [(p(i, 0), p(i, 1)) for i in range(3)]
    clauses += [(-p(i, h), -p(j, h)) for h in range(2) for i, j in itertools.combinations(range(3), 2)]
    assert solve(clauses, 6) is None


# ---------------------------------------------------------------------------
# grounding

def test_ground_instantiates_over_individuals():
    gcs = ground([C("~A(X) | B(X)")], A("A(a)\nR(a,b)"))
    assert gcs.constants == ("a", "b")
    assert len(gcs.clauses) == 2 + 2       # two facts, two instances


def test_ground_uses_a_fresh_constant_for_empty_data():
    gcs = ground([C("A(X) | B(X)")], ABox())
    assert gcs.constants == (FRESH_CONSTANT,)


def test_ground_adds_top_facts_when_needed():
    gcs = ground([C("~Top(X) | A(X)")], A("B(a)"))
    assert cautious_entails(None, A("B(a)"), fact("A", "a"), gcs=gcs)


def test_ground_rejects_function_terms():
    with pytest.raises(ValueError):
        ground([C("~A(X) | B(f(X))")], A("A(a)"))


def test_grounding_limit():
    wide = C("~R(X,Y) | ~R(Y,Z) | ~R(Z,W) | A(W)")
    abox = ABox(frozenset(fact("R", f"v{i}", f"v{i+1}") for i in range(40)))
    with pytest.raises(GroundingLimitExceeded):
        ground([wide], abox)
    with pytest.raises(GroundingLimitExceeded):
        ground([C("~A(X) | B(X)")], abox, limit=10)


# ---------------------------------------------------------------------------
# entailment

def test_cautious_entailment_through_a_disjunction():
    p = fixtures.clauses("t_ex_dd")
    abox = A("Student(a)\ntakes(a,c)\nGradCo(c)")
    assert cautious_entails(p, abox, fact("Grad", "a"))
    assert not cautious_entails(p, A("Student(a)"), fact("Grad", "a"))
    assert cautious_entails(p, A("Student(a)\nUndergrad(a)\ntakes(a,c)\nGradCo(c)"), fact("Grad", "b"))


def test_cautious_entailment_by_cases():
    p = [C("A(X) | B(X)"), C("~A(X) | D(X)"), C("~B(X) | D(X)")]
    assert cautious_entails(p, A("E(a)"), fact("D", "a"))
    assert not cautious_entails(p, A("E(a)"), fact("A", "a"))
    assert cautious_entails(p, A("E(a)"), [fact("D", "a"), fact("D", "a")])
    assert not cautious_entails(p, A("E(a)"), fact("D", "zz"))


def test_entailed_facts_match_single_tests():
    p = fixtures.clauses("t_ex_dd")
    abox = A("Student(a)\nCourse(c)\ntakes(a,c)\nPHD(b)\nPHDco(c)")
    res = entailed_facts(p, abox)
    assert res.consistent
    gcs = ground(p, abox)
    for i in range(1, len(gcs.names)):
        f = gcs.atom(i)
        assert (f in res.facts) == cautious_entails(p, abox, f, gcs=gcs)


def test_inconsistent_data_entails_nothing_and_answers_everything():
    p = fixtures.clauses("t_ex_dd")
    abox = A("Undergrad(a)\ntakes(a,c)\nGradCo(c)\nStudent(b)")
    assert not entailed_facts(p, abox).consistent
    res = certain_answers(p, abox, parse_query("Grad(?x)"))
    assert res.inconsistent and res.answers == {("a",), ("b",), ("c",)}


def test_certain_answers_examples():
    p = fixtures.clauses("t_ex_dd")
    abox = A("Student(a)\nStudent(b)\ntakes(b,c)\nPHDco(c)\nPHD(d)")
    assert certain_answers(p, abox, parse_query("Grad(?x)")).answers == {("b",), ("d",)}
    assert certain_answers(p, abox, parse_query("takes(?x, ?y), GradCo(?y)")).answers == {("b", "c")}


@pytest.mark.parametrize("seed", range(12))
def test_parity_program_entails_reachability(seed):
    edges = fixtures.random_digraph(random.Random(seed), max_vertices=5)
    abox = fixtures.edge_abox(edges)
    p = fixtures.clauses("parity")
    gcs = ground(p, abox)
    nodes = {u for e in edges for u in e}
    got = {v for v in nodes if cautious_entails(p, abox, fact("G", v), gcs=gcs)}
    assert got == fixtures.parity_reachable(edges)


# ---------------------------------------------------------------------------
# skolemised checks

def test_skolem_entailment_examples():
    theory = [C("~A(X) | R(X,f(X))"), C("~A(X) | B(f(X))"), C("~R(X,Y) | ~B(Y) | D(X)")]
    assert skolem_entails(theory, C("~A(X) | D(X)"))
    assert not skolem_entails(theory, C("~A(X) | B(X)"))
    assert skolem_entails([C("P(X)")], C("P(a)"))
    assert skolem_entails([C("P(X)"), C("~P(a)")], C("Q(b)"))


def test_skolem_depth_limits_what_is_proved():
    theory = [C("~A(X) | B(f(X))"), C("~B(X) | D(f(X))"), C("~D(X)")]
    assert not skolem_entails(theory, C("~A(X)"))
    assert skolem_entails(theory, C("~A(X)"), depth=2)


def test_ground_skolem_finds_anonymous_consequences():
    theory = [C("~A(X) | R(X,f(X))"), C("~A(X) | B(f(X))"), C("~R(X,Y) | ~B(Y) | D(X)")]
    res = entailed_facts(None, A("A(a)"), gcs=ground_skolem(theory, A("A(a)")))
    assert fact("D", "a") in res.facts
    assert res.consistent
