from __future__ import annotations

import random

import pytest

from conftest import C, small_aboxes
from dlrewrite import fixtures
from dlrewrite.budget import Budget
from dlrewrite.dd import (
    DD_TYPES, DisjunctiveProgram, SaturationBudgetExceeded, TypedClause, UntypableClauseError,
    classify_program, clause_type, clausify, extract_dd, is_simple_clause, saturate,
    unfold_definitions,
)
from dlrewrite.ontology import normalize
from dlrewrite.oracle import entailed_facts, ground_skolem, skolem_entails
from dlrewrite.pipeline import rewrite
from dlrewrite.syntax import parse_tbox
from dlrewrite.trace import Trace
from dlrewrite.transitivity import split
from fo import first_order_clauses
from random_tboxes import random_alchi


def dd_of(t) -> DisjunctiveProgram:
    return extract_dd(saturate(clausify(split(normalize(t)).omega)))


# ---------------------------------------------------------------------------
# clause shapes

@pytest.mark.parametrize("text, expected", [
    ("~A(X) | R(X,f(X))", 1),
    ("~A(X) | ~B(X) | R(f(X),X)", 2),
    ("~R(X,Y) | S(X,Y)", 3),
    ("~R(X,Y) | S(Y,X)", 4),
    ("~R(X,Y) | ~B(Y) | A(X)", 5),
    ("~R(X,Y) | ~A(X) | ~B(Y)", 5),
    ("~A(X) | B(f(X)) | C(X)", 6),
    ("~A(X) | B(X) | C(X)", 7),
    ("A(X)", 7),
    ("~R(X,X) | A(X)", 8),
    ("~A(X) | R(X,X)", 9),
])
def test_clause_types(text, expected):
    assert clause_type(C(text)) == expected


@pytest.mark.parametrize("text", [
    "R(X,Y) | A(X)",                # positive role atom between distinct variables
    "~A(X) | B(Y)",                 # two unconnected variables
    "A(a)",                         # constants
    "~R(X,Y) | ~S(Y,Z)",            # role chain
    "~A(X) | R(X,f(X)) | S(X,f(X))",
    "~A(X) | B(f(X)) | C(g(X))",    # two different skolem terms is fine, two arguments not
    "~T(X,Y,Z)",
])
def test_untypable_clauses(text):
    c = C(text)
    if text == "~A(X) | B(f(X)) | C(g(X))":
        assert clause_type(c) == 6
        return
    assert clause_type(c) is None
    with pytest.raises(UntypableClauseError):
        TypedClause.of(c)


def test_eligible_literals_follow_the_shape():
    c = C("~R(X,Y) | ~B(Y) | A(X)")
    assert TypedClause.of(c).eligible == {l for l in c.literals if l.atom.pred == "R"}
    tc = TypedClause.of(C("~A(X) | B(f(X)) | C(X)"))
    assert {str(l) for l in tc.eligible} == {"B(f(X0))"}
    tc = TypedClause.of(C("~A(X) | B(X)"))
    assert len(tc.eligible) == 2


# ---------------------------------------------------------------------------
# clausification

def test_clausify_university_tbox():
    typed = clausify(normalize(fixtures.tbox("t_ex")))
    clauses = {tc.clause: tc.ctype for tc in typed}
    assert clauses[C("~takes(X,Y) | ~GradCo(Y) | Grad(X)")] == 5
    skolem = [c for c, k in clauses.items() if c.has_functions()]
    assert sorted(clauses[c] for c in skolem) == [1, 6]
    assert {l.atom.pred for c in skolem for l in c.literals} == {"PHD", "takes", "PHDco"}


def test_clausify_self_restriction():
    typed = clausify(parse_tbox("SubClassOf(A, HasSelf(R))\nSubClassOf(HasSelf(S), B)"))
    assert [(str(tc.clause), tc.ctype) for tc in typed] == [
        ("~A(X0) | R(X0,X0)", 9), ("~S(X0,X0) | B(X0)", 8)]


def test_clausify_inverse_roles_and_top_fillers():
    typed = clausify(parse_tbox("SubClassOf(A, Some(Inv(R), Top))\nSubRole(Inv(R), S)"))
    assert [tc.ctype for tc in typed] == [2, 4]


def test_clausify_rejects_transitivity_and_complex_axioms():
    with pytest.raises(ValueError):
        clausify(parse_tbox("Transitive(R)"))
    with pytest.raises(ValueError):
        clausify(parse_tbox("SubClassOf(A, Some(R, And(B, C)))"))


# ---------------------------------------------------------------------------
# saturation

def test_saturation_of_a_single_inclusion():
    assert dd_of(parse_tbox("SubClassOf(A, B)")).clauses == (C("~A(X) | B(X)"),)


def test_self_loops_propagate_through_role_inclusions():
    typed = [TypedClause.of(C("~A(X) | R(X,X)")), TypedClause.of(C("~R(X,Y) | S(Y,X)"))]
    dd = extract_dd(saturate(typed))
    assert C("~A(X) | S(X,X)") in dd
    assert clause_type(C("~A(X) | S(X,X)")) == 9


def test_self_loop_meets_existential_body():
    dd = dd_of(parse_tbox("SubClassOf(A, HasSelf(R))\nSubClassOf(Some(R, B), D)"))
    assert C("~A(X) | ~B(X) | D(X)") in dd


def test_university_disjunctive_program():
    b = rewrite(fixtures.tbox("t_ex"))
    expected = set(fixtures.clauses("t_ex_dd")) | {C("~PHD(X) | ~Undergrad(X)")}
    assert set(b.compiled_input) == expected
    assert b.metadata["unfolded"] == ["X1"]
    assert b.dd.nearly_monadic and not b.dd.simple


def test_university_program_derives_phd_rule():
    trace = Trace()
    saturate(clausify(normalize(fixtures.tbox("t_ex"))), trace=trace)
    derived = [e["clause"] for e in trace.of("derived")]
    assert "~PHD(X0) | Grad(X0)" in derived
    for e in trace.of("derived"):
        assert e["rule"] in ("resolve", "factor") and e["premises"]


def test_the_extra_university_rule_is_entailed():
    theory = [tc.clause for tc in clausify(normalize(fixtures.tbox("t_ex")))]
    assert skolem_entails(theory, C("~PHD(X) | ~Undergrad(X)"))


def test_self_loop_program_keeps_the_self_rule():
    assert C("~A(X) | R(X,X)") in dd_of(fixtures.tbox("self_loop"))


def test_coloring_program_signature():
    t = fixtures.tbox("coloring")
    dd = dd_of(t)
    fresh = normalize(t).concept_names - t.concept_names
    assert dd.predicates() - fresh <= {
        "R", "G", "B", "F_R", "F_G", "F_B", "F", "V", "NC", "edge", "vertex"}


def test_saturation_budget():
    with pytest.raises(SaturationBudgetExceeded):
        saturate(clausify(normalize(fixtures.tbox("t_ex"))), Budget(max_clauses=3))


def test_only_function_free_types_reach_the_program():
    sat = saturate(clausify(normalize(fixtures.tbox("t_ex"))))
    dd = extract_dd(sat)
    assert {tc.ctype for tc in sat if tc.clause in dd} <= DD_TYPES
    assert not any(c.has_functions() for c in dd)


# ---------------------------------------------------------------------------
# program classes and unfolding

@pytest.mark.parametrize("texts, expected", [
    (["~R(X,Y) | A(X)", "~A(X) | B(X) | C(X)"], (True, True)),
    (["~takes(X,Y) | ~GradCo(Y) | Grad(X)"], (True, False)),
    (["~A(X) | R(X,X)", "~R(X,Y) | S(Y,X)"], (True, True)),
    (["~A(X) | R(X,Y)"], (False, False)),
    (["G(X) | B(X)", "B(X1) | ~E(X1,X0) | ~G(X0)"], (True, False)),
])
def test_classify_program(texts, expected):
    assert classify_program([C(t) for t in texts]) == expected


def test_simple_clause_examples():
    assert is_simple_clause(C("~R(X,Y) | ~R(X,Z) | A(X)"))
    assert not is_simple_clause(C("~R(X,Y) | ~R(Y,X) | A(X)"))
    assert not is_simple_clause(C("~R(X,Y) | A(Y) | B(X)"))


def test_programs_reject_function_terms():
    with pytest.raises(ValueError):
        DisjunctiveProgram([C("~A(X) | B(f(X))")])


def test_unfolding_resolves_away_a_definition():
    out, gone = unfold_definitions([C("~A(X) | Q(X)"), C("~Q(X) | B(X) | D(X)")], ["Q"])
    assert out == [C("~A(X) | B(X) | D(X)")] and gone == ["Q"]


def test_unfolding_skips_predicates_that_occur_twice():
    clauses = [C("~A(X) | Q(X)"), C("~Q(X) | ~Q(Y) | B(X)")]
    out, gone = unfold_definitions(clauses, ["Q"])
    assert gone == [] and set(out) == set(clauses)


def test_unfolded_clauses_are_entailed():
    b = rewrite(fixtures.tbox("t_ex"))
    for c in b.compiled_input:
        assert skolem_entails(b.dd.clauses, c)


# ---------------------------------------------------------------------------
# random TBoxes against the first-order reading

def _entailed(theory, c) -> bool:
    return skolem_entails(theory, c) or skolem_entails(theory, c, depth=2)


@pytest.mark.parametrize("seed", range(4))
def test_random_programs_are_sound_and_keep_facts(seed):
    rng = random.Random(seed)
    for _ in range(20):
        t = random_alchi(rng)
        omega = split(t).omega
        theory = first_order_clauses(omega)
        dd = dd_of(t)
        for c in dd:
            assert _entailed(theory, c), (t, c)
        names = t.concept_names | t.role_names
        for abox in small_aboxes(t.concept_names, t.role_names, ("a", "b"), 2):
            want = entailed_facts(None, abox, gcs=ground_skolem(theory, abox), predicates=names)
            got = entailed_facts(dd, abox, predicates=names)
            if not want.consistent:
                assert not got.consistent, (t, abox)
            elif got.consistent:
                direct = {f for f in want.facts if all(a in abox.individuals for a in f.args)}
                assert direct <= got.facts, (t, abox)


def test_unsatisfiable_concept_needs_nested_skolem_terms():
    t = parse_tbox("SubClassOf(A3, Some(Inv(s), A3))\nSubClassOf(Some(Inv(s), A3), Bottom)\n"
                   "SubClassOf(A0, Some(s, A3))")
    theory = first_order_clauses(t)
    assert C("~A0(X)") in dd_of(t)
    assert not skolem_entails(theory, C("~A0(X)"))
    assert skolem_entails(theory, C("~A0(X)"), depth=2)
