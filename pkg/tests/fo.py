"""Direct first-order reading of normalised TBoxes, independent of the translator.

Each normal-form axiom becomes the clauses of its textbook first-order
translation, with one skolem function per existential axiom and transitivity
as the clause ``¬R(x,y) ∨ ¬R(y,z) ∨ R(x,z)``.  Grounded with depth-one skolem
terms this gives a sound entailment referee for small ABoxes.
"""

from __future__ import annotations

from dlrewrite.logic import Atom, Clause, Func, Literal, Var
from dlrewrite.ontology import (
    And, Bottom, Or, Self, Some, SubClassOf, SubRole, TBox, Top, Transitive,
)

x, y, z = Var("x"), Var("y"), Var("z")


def _role(r, u, v) -> Atom:
    return Atom(r.name, (v, u) if r.inverse else (u, v))


def _names(c) -> list:
    if isinstance(c, (And, Or)):
        return list(c.operands)
    if isinstance(c, (Top, Bottom)):
        return []
    return [c]


def _unary(c, t, positive: bool) -> list:
    return [Literal(Atom(n.name, (t,)), positive) for n in _names(c)]


def first_order_clauses(t: TBox) -> list:
    out = []
    for k, ax in enumerate(t.axioms):
        if isinstance(ax, SubRole):
            out.append([Literal(_role(ax.sub, x, y), False), Literal(_role(ax.sup, x, y))])
        elif isinstance(ax, Transitive):
            r = ax.role.name
            out.append([Literal(Atom(r, (x, y)), False), Literal(Atom(r, (y, z)), False),
                        Literal(Atom(r, (x, z)))])
        elif isinstance(ax.sub, Some):
            out.append([Literal(_role(ax.sub.role, x, y), False)]
                       + _unary(ax.sub.filler, y, False) + _unary(ax.sup, x, True))
        elif isinstance(ax.sub, Self):
            out.append([Literal(_role(ax.sub.role, x, x), False)] + _unary(ax.sup, x, True))
        elif isinstance(ax.sup, Some):
            f = Func(f"sk{k}", x)
            body = _unary(ax.sub, x, False)
            out.append(body + [Literal(_role(ax.sup.role, x, f))])
            if not isinstance(ax.sup.filler, Top):
                out.append(body + _unary(ax.sup.filler, f, True))
        elif isinstance(ax.sup, Self):
            out.append(_unary(ax.sub, x, False) + [Literal(_role(ax.sup.role, x, x))])
        else:
            assert isinstance(ax, SubClassOf)
            out.append(_unary(ax.sub, x, False) + _unary(ax.sup, x, True))
    return [Clause(c) for c in out]
