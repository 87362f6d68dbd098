"""Text formats: TBoxes, ABoxes, ground queries, datalog programs and clauses.

TBoxes use a functional syntax, one axiom per line::

    SubClassOf(Student, Or(Grad, Undergrad))
    EquivalentClasses(F_R, And(R, Some(edge, R)))
    SubRole(S, Inv(R))
    Transitive(R)

ABoxes are ``Pred(a)`` / ``Pred(a,b)`` lines; queries are comma-separated
atoms with ``?``-prefixed variables.  Datalog uses ``Head(X) :- B(X,Y).``
with upper-case variables and ``false :- Body.`` for inconsistency rules;
clauses are ``~A(X) | B(X)``.  ``#`` starts a comment everywhere.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Optional

from .datalog import ABox, DatalogProgram, GroundQuery, Rule
from .logic import Atom, Clause, Const, Func, Literal, Var
from .ontology import (
    BOTTOM, TOP, All, And, AtomicConcept, Not, Or, Role, Self, Some, SubClassOf, SubRole,
    TBox, Transitive, equivalent,
)

__all__ = [
    "ParseError", "parse_tbox", "parse_abox", "parse_query", "parse_program", "parse_clauses",
    "parse_clause", "format_tbox", "format_abox", "format_query", "format_program",
    "format_clauses",
]


class ParseError(ValueError):
    """Syntax error with a 1-based line and column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message, self.line, self.column = message, line, column


_TOKEN = re.compile(r"""
    (?P<space>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<newline>\n)
  | (?P<implies>:-)
  | (?P<quoted>'[^'\n]*')
  | (?P<var>\?[A-Za-z_][A-Za-z0-9_]*)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[(),.~|])
""", re.VERBOSE)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    column: int


def _tokens(text: str) -> list:
    out = []
    line, start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "newline":
            out.append(_Tok("newline", "\n", line, pos - start + 1))
            line, start = line + 1, m.end()
        elif kind not in ("space", "comment"):
            value = m.group()
            out.append(_Tok(value if kind in ("punct", "implies") else kind, value, line, pos - start + 1))
        pos = m.end()
    out.append(_Tok("eof", "", line, pos - start + 1))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokens(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, message: str, tok: Optional[_Tok] = None) -> ParseError:
        tok = tok or self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        return ParseError(f"{message}, found {found}", tok.line, tok.column)

    def take(self, kind: str, what: Optional[str] = None) -> _Tok:
        if self.tok.kind != kind:
            raise self.error(f"expected {what or kind!r}")
        tok = self.tok
        self.i += 1
        return tok

    def accept(self, kind: str) -> bool:
        if self.tok.kind == kind:
            self.i += 1
            return True
        return False

    def skip_newlines(self) -> None:
        while self.tok.kind == "newline":
            self.i += 1

    def end_statement(self) -> None:
        if self.tok.kind not in ("newline", "eof"):
            raise self.error("expected end of line")
        self.skip_newlines()

    def statements(self) -> Iterator[None]:
        self.skip_newlines()
        while self.tok.kind != "eof":
            yield
            self.end_statement()

    def name(self, what: str = "name") -> str:
        return self.take("name", what).text

    def comma_list(self, item) -> list:
        self.take("(", "(")
        items = [item()]
        while self.accept(","):
            items.append(item())
        self.take(")", ")")
        return items


# ---------------------------------------------------------------------------
# TBox

_CONSTRUCTORS = {"And", "Or", "Not", "Some", "All", "HasSelf"}


def _role(p: _Parser) -> Role:
    tok = p.tok
    n = p.name("role")
    if n == "Inv":
        p.take("(", "(")
        inner = _role(p)
        p.take(")", ")")
        return inner.inv()
    if n in _CONSTRUCTORS or n in ("Top", "Bottom"):
        raise p.error("expected role", tok)
    return Role(n)


def _concept(p: _Parser):
    tok = p.tok
    n = p.name("concept")
    if n == "Top":
        return TOP
    if n == "Bottom":
        return BOTTOM
    if n in ("And", "Or"):
        ops = p.comma_list(lambda: _concept(p))
        if len(ops) < 2:
            raise p.error(f"{n} needs at least two operands", tok)
        return And(ops) if n == "And" else Or(ops)
    if n == "Not":
        (c,) = _fixed_args(p, tok, n, [_concept])
        return Not(c)
    if n in ("Some", "All"):
        r, c = _fixed_args(p, tok, n, [_role, _concept])
        return Some(r, c) if n == "Some" else All(r, c)
    if n == "HasSelf":
        (r,) = _fixed_args(p, tok, n, [_role])
        return Self(r)
    if n == "Inv":
        raise p.error("unexpected role constructor in concept position", tok)
    if p.tok.kind == "(":
        raise ParseError(f"unknown concept constructor {n!r}; expected one of "
                         "And, Or, Not, Some, All, HasSelf", tok.line, tok.column)
    return AtomicConcept(n)


def _fixed_args(p: _Parser, tok: _Tok, name: str, kinds: list) -> list:
    p.take("(", "(")
    out = []
    for k, kind in enumerate(kinds):
        if k:
            p.take(",", f"',' ({name} takes {len(kinds)} arguments)")
        out.append(kind(p))
    p.take(")", f"')' ({name} takes {len(kinds)} argument{'s' if len(kinds) > 1 else ''})")
    return out


def parse_tbox(text: str) -> TBox:
    p = _Parser(text)
    axioms = []
    for _ in p.statements():
        tok = p.tok
        kw = p.name("axiom")
        if kw == "SubClassOf":
            c, d = _fixed_args(p, tok, kw, [_concept, _concept])
            axioms.append(SubClassOf(c, d))
        elif kw == "EquivalentClasses":
            cs = p.comma_list(lambda: _concept(p))
            if len(cs) < 2:
                raise p.error("EquivalentClasses needs at least two concepts", tok)
            for c, d in zip(cs, cs[1:]):
                axioms += equivalent(c, d)
        elif kw == "SubRole":
            r, s = _fixed_args(p, tok, kw, [_role, _role])
            axioms.append(SubRole(r, s))
        elif kw == "Transitive":
            (r,) = _fixed_args(p, tok, kw, [_role])
            if r.inverse:
                r = r.inv()     # a role is transitive iff its inverse is
            axioms.append(Transitive(r))
        else:
            raise p.error(f"unknown axiom {kw!r}; expected SubClassOf, EquivalentClasses, "
                          "SubRole or Transitive", tok)
    return TBox(tuple(axioms))


def format_tbox(t: TBox) -> str:
    return "".join(f"{a}\n" for a in t.axioms)


# ---------------------------------------------------------------------------
# ABox and queries

def _constant(p: _Parser) -> Const:
    if p.tok.kind == "quoted":
        return Const(p.take("quoted").text[1:-1])
    return Const(p.name("individual"))


def _fact(p: _Parser) -> Atom:
    pred = p.name("predicate")
    args = p.comma_list(lambda: _constant(p))
    if len(args) > 2:
        raise p.error("facts are unary or binary")
    return Atom(pred, tuple(args))


def parse_abox(text: str) -> ABox:
    p = _Parser(text)
    facts = []
    for _ in p.statements():
        facts.append(_fact(p))
        p.accept(".")
    return ABox(frozenset(facts))


def format_abox(a: ABox) -> str:
    return "".join(f"{f}\n" for f in a)


def _query_term(p: _Parser):
    if p.tok.kind == "var":
        return Var(p.take("var").text[1:])
    return _constant(p)


def parse_query(text: str) -> GroundQuery:
    p = _Parser(text)
    p.skip_newlines()
    atoms = []
    while True:
        pred = p.name("predicate")
        atoms.append(Atom(pred, tuple(p.comma_list(lambda: _query_term(p)))))
        p.skip_newlines()
        if not p.accept(","):
            break
        p.skip_newlines()
    p.accept(".")
    p.skip_newlines()
    p.take("eof", "end of query")
    return GroundQuery(tuple(atoms))


def format_query(q: GroundQuery) -> str:
    return str(q)


# ---------------------------------------------------------------------------
# datalog programs and clauses

def _logic_term(p: _Parser, functions: bool):
    tok = p.tok
    if tok.kind == "quoted":
        return Const(p.take("quoted").text[1:-1])
    n = p.name("term")
    if p.tok.kind == "(":
        if not functions:
            raise p.error("function terms are not allowed here", tok)
        (arg,) = p.comma_list(lambda: _logic_term(p, False))
        return Func(n, arg)
    if n[0].isupper():
        return Var(n[0].lower() + n[1:])
    return Const(n)


def _logic_atom(p: _Parser, functions: bool = False) -> Atom:
    pred = p.name("predicate")
    if p.tok.kind != "(":
        return Atom(pred, ())
    return Atom(pred, tuple(p.comma_list(lambda: _logic_term(p, functions))))


def parse_program(text: str) -> DatalogProgram:
    p = _Parser(text)
    rules = []
    for _ in p.statements():
        tok = p.tok
        head = _logic_atom(p)
        if head.pred == "false" and not head.args:
            head = None
        body = []
        if p.accept(":-"):
            body.append(_logic_atom(p))
            while p.accept(","):
                body.append(_logic_atom(p))
        elif head is None:
            raise p.error("an inconsistency rule needs a body", tok)
        p.take(".", "'.'")
        rules.append(Rule(head, tuple(body)))
    return DatalogProgram(rules)


def format_program(program: DatalogProgram) -> str:
    return "".join(f"{r}\n" for r in program.rules)


def _clause(p: _Parser) -> Clause:
    lits = []
    while True:
        positive = not p.accept("~")
        lits.append(Literal(_logic_atom(p, functions=True), positive))
        if not p.accept("|"):
            break
    if len(lits) == 1 and lits[0].positive and lits[0].atom == Atom("false", ()):
        return Clause(())
    return Clause(lits)


def parse_clause(text: str) -> Clause:
    p = _Parser(text)
    p.skip_newlines()
    c = _clause(p)
    p.accept(".")
    p.skip_newlines()
    p.take("eof", "end of clause")
    return c


def parse_clauses(text: str) -> list:
    p = _Parser(text)
    out = []
    for _ in p.statements():
        out.append(_clause(p))
        p.accept(".")
    return out


def format_clauses(clauses) -> str:
    return "".join(f"{c if len(c) else 'false'}\n" for c in clauses)
