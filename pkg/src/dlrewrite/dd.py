"""Translation of normalised, transitivity-free TBoxes into disjunctive datalog.

The TBox is skolemised into clauses, which are saturated by binary resolution
and positive factoring.  Instead of a literal ordering, every clause is tagged
with one of nine shapes and only the literals that shape marks as eligible
take part in inferences::

    1  ¬A(x) ∨ R(x,f(x))           eligible: R(x,f(x))
    2  ¬A(x) ∨ R(f(x),x)           eligible: R(f(x),x)
    3  ¬R(x,y) ∨ S(x,y)            eligible: ¬R(x,y)
    4  ¬R(x,y) ∨ S(y,x)            eligible: ¬R(x,y)
    5  ¬R(x,y) ∨ unary on x, y     eligible: ¬R(x,y)
    6  unary on x and f(x)         eligible: every f(x) literal
    7  unary on x                  eligible: every literal
    8  ¬R(x,x) ∨ unary on x        eligible: ¬R(x,x)
    9  R(x,x) ∨ unary on x         eligible: R(x,x)

The function-free clauses of shapes 3–5 and 7–9 that survive saturation form
the disjunctive program.
"""

from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass
from typing import Iterable, Optional

from .budget import Budget, BudgetMeter
from .logic import (
    Atom, Clause, Const, Func, Literal, SubsumptionIndex, Var, condense, factors, resolve,
    resolvents, theta_subsumes,
)
from .ontology import (
    And, AtomicConcept, Bottom, Or, Role, Self, Some, SubClassOf, SubRole, TBox, Top,
    Transitive, is_normal,
)
from .trace import Trace, unifier_json

log = logging.getLogger(__name__)

__all__ = [
    "TypedClause", "UntypableClauseError", "SaturationBudgetExceeded",
    "DisjunctiveProgram", "clause_type", "clausify", "saturate", "extract_dd",
    "classify_program", "is_simple_clause", "unfold_definitions", "skolem_name",
    "DD_TYPES", "SATURATION_BUDGET",
]

DD_TYPES = frozenset({3, 4, 5, 7, 8, 9})
SATURATION_BUDGET = Budget(max_clauses=200_000, wall_clock_limit=300.0)

_X, _Y = Var("x"), Var("y")


class UntypableClauseError(ValueError):
    pass


class SaturationBudgetExceeded(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# clause shapes

def _unary_on(lit: Literal, terms) -> bool:
    return lit.atom.arity == 1 and lit.atom.args[0] in terms


def _shape(c: Clause) -> Optional[tuple]:
    """``(type, eligible literals)`` or ``None`` when ``c`` fits no shape."""
    lits = c.literals
    if any(a.arity not in (1, 2) for a in (l.atom for l in lits)):
        return None
    if any(isinstance(t, Const) or (isinstance(t, Func) and not isinstance(t.arg, Var))
           for l in lits for t in l.atom.args):
        return None
    binary = [l for l in lits if l.atom.arity == 2]
    unary = [l for l in lits if l.atom.arity == 1]

    if c.has_functions():
        fterms = {t for l in lits for t in l.atom.args if isinstance(t, Func)}
        if len({f.arg for f in fterms}) != 1:
            return None
        x = next(iter(fterms)).arg
        if c.variables() != {x}:
            return None
        if binary:
            if len(binary) != 1 or not binary[0].positive:
                return None
            b = binary[0]
            if not all(not l.positive and l.atom.args == (x,) for l in unary):
                return None
            if b.atom.args[0] == x and isinstance(b.atom.args[1], Func):
                return 1, frozenset(binary)
            if b.atom.args[1] == x and isinstance(b.atom.args[0], Func):
                return 2, frozenset(binary)
            return None
        return 6, frozenset(l for l in lits if isinstance(l.atom.args[0], Func))

    if not binary:
        return (7, frozenset(lits)) if len(c.variables()) <= 1 else None
    if len(binary) == 1:
        b = binary[0]
        u, v = b.atom.args
        if u == v:
            if not all(_unary_on(l, (u,)) for l in unary):
                return None
            return (9 if b.positive else 8), frozenset(binary)
        if b.positive or not all(_unary_on(l, (u, v)) for l in unary):
            return None
        return 5, frozenset(binary)
    if len(binary) == 2 and not unary:
        neg = [l for l in binary if not l.positive]
        pos = [l for l in binary if l.positive]
        if len(neg) != 1 or len(pos) != 1:
            return None
        u, v = neg[0].atom.args
        if u == v:
            return None
        if pos[0].atom.args == (u, v):
            return 3, frozenset(neg)
        if pos[0].atom.args == (v, u):
            return 4, frozenset(neg)
    return None


def clause_type(c: Clause) -> Optional[int]:
    s = _shape(c)
    return None if s is None else s[0]


@dataclass(frozen=True)
class TypedClause:
    clause: Clause
    ctype: int
    eligible: frozenset

    @classmethod
    def of(cls, c: Clause) -> "TypedClause":
        s = _shape(c)
        if s is None:
            raise UntypableClauseError(f"clause fits none of the nine shapes: {c}")
        return cls(c, s[0], s[1])

    def __str__(self) -> str:
        return f"[{self.ctype}] {self.clause}"


# ---------------------------------------------------------------------------
# clausification

def _role_atom(r: Role, u, v) -> Atom:
    return Atom(r.name, (v, u) if r.inverse else (u, v))


def _label(c) -> str:
    if isinstance(c, Top):
        return "Top"
    if isinstance(c, AtomicConcept):
        return c.name
    if isinstance(c, And):
        return "_".join(_label(o) for o in c.operands)
    raise ValueError(f"unexpected concept {c}")


def skolem_name(sub, role: Role, filler) -> str:
    tag = f"inv_{role.name}" if role.inverse else role.name
    return f"f__{_label(sub)}__{tag}__{_label(filler)}"


def _names(c) -> list:
    if isinstance(c, (And, Or)):
        return list(c.operands)
    return [c]


def _unary(c, t, positive: bool) -> list:
    """Literal for concept name ``c`` at ``t``; ⊤/⊥ vanish on the trivial side."""
    if isinstance(c, (Top, Bottom)):
        return []
    return [Literal(Atom(c.name, (t,)), positive)]


def _gci_clauses(ax: SubClassOf) -> list:
    sub, sup = ax.sub, ax.sup
    if isinstance(sup, Top) or isinstance(sub, Bottom):
        return []
    if isinstance(sub, Some):
        lits = [Literal(_role_atom(sub.role, _X, _Y), False)]
        lits += _unary(sub.filler, _Y, False) + _unary(sup, _X, True)
        return [Clause(lits)]
    if isinstance(sub, Self):
        return [Clause([Literal(_role_atom(sub.role, _X, _X), False)] + _unary(sup, _X, True))]
    body = _names(sub)
    if any(isinstance(b, Bottom) for b in body):
        return []
    neg = [l for b in body for l in _unary(b, _X, False)]
    if isinstance(sup, Some):
        f = Func(skolem_name(sub, sup.role, sup.filler), _X)
        out = [Clause(neg + [Literal(_role_atom(sup.role, _X, f))])]
        if not isinstance(sup.filler, Top):
            out.append(Clause(neg + _unary(sup.filler, f, True)))
        return out
    if isinstance(sup, Self):
        return [Clause(neg + [Literal(_role_atom(sup.role, _X, _X))])]
    head = _names(sup)
    if any(isinstance(h, Top) for h in head):
        return []
    return [Clause(neg + [l for h in head for l in _unary(h, _X, True)])]


def clausify(t: TBox) -> list:
    """Skolemised, typed clauses of a normalised transitivity-free TBox."""
    out = []
    for ax in t.axioms:
        if isinstance(ax, Transitive):
            raise ValueError("clausify requires a transitivity-free TBox")
        if isinstance(ax, SubRole):
            cs = [Clause([Literal(_role_atom(ax.sub, _X, _Y), False),
                          Literal(_role_atom(ax.sup, _X, _Y))])]
        else:
            if not is_normal(ax):
                raise ValueError(f"axiom not in normal form: {ax}")
            cs = _gci_clauses(ax)
        for c in cs:
            if not c.is_tautology:
                out.append(TypedClause.of(c))
    return list(dict.fromkeys(out))


# ---------------------------------------------------------------------------
# saturation

def saturate(clauses: Iterable[TypedClause], budget: Optional[Budget] = None,
             trace: Optional[Trace] = None) -> list:
    """Closure under eligible-literal resolution and factoring, with deletion of
    tautologies and θ-subsumed clauses.

    Given clauses are taken shortest first (oldest first among equals); the
    signature is finite, so every clause is eventually processed.
    """
    meter = BudgetMeter(budget or SATURATION_BUDGET)
    ids: dict = {}
    passive: list = []          # heap of (length, id, clause): shortest first, then oldest

    def register(tc: TypedClause, **info) -> None:
        ids[tc.clause] = len(ids)
        meter.clauses += 1
        if trace is not None:
            trace.emit("derived" if info else "input", id=ids[tc.clause], clause=str(tc.clause),
                       type=tc.ctype, **info)
        heapq.heappush(passive, (len(tc.clause), ids[tc.clause], tc))

    for tc in clauses:
        if tc.clause not in ids:
            register(tc)

    active: dict = {}           # clause -> TypedClause
    index = SubsumptionIndex()
    while passive:
        reason = meter.exhausted()
        if reason is not None:
            raise SaturationBudgetExceeded(f"saturation exceeded its {reason} budget")
        meter.iterations += 1
        given = heapq.heappop(passive)[2]
        g = given.clause
        if g.is_tautology or index.subsumes_any(g):
            continue
        for d in index.subsumed_by(g):
            if trace is not None:
                trace.emit("deleted", id=ids[d], by=ids[g])
            index.remove(d)
            del active[d]
        active[g] = given
        index.add(g)

        partners = {}
        for l in given.eligible:
            for d in index.with_key((not l.positive, l.atom.pred)):
                partners[d] = None
        conclusions = []
        for d in sorted(partners, key=ids.__getitem__):
            a = active[d]
            for inf in resolvents(g, d, given.eligible, a.eligible):
                conclusions.append((inf, "resolve", (g, d)))
            if d is not g:
                for inf in resolvents(d, g, a.eligible, given.eligible):
                    conclusions.append((inf, "resolve", (d, g)))
        for inf in factors(g, given.eligible):
            conclusions.append((inf, "factor", (g,)))

        for inf, rule, premises in conclusions:
            c = inf.clause
            if c.is_tautology or c in ids or index.subsumes_any(c):
                continue
            tc = TypedClause.of(c)
            register(tc, rule=rule, premises=[ids[p] for p in premises],
                     literals=[str(inf.left), str(inf.right)], unifier=unifier_json(inf.unifier))
    log.debug("saturation: %d clauses kept after %d iterations", len(active), meter.iterations)
    return list(active.values())


# ---------------------------------------------------------------------------
# disjunctive programs

def _is_role_rule(c: Clause) -> bool:
    return clause_type(c) in (3, 4)


def is_simple_clause(c: Clause) -> bool:
    """Some variable ``x`` is the pivot of every atom and other variables occur once."""
    occurrences: dict = {}
    for l in c.literals:
        for t in l.atom.args:
            if not isinstance(t, Var):
                return False
            occurrences[t] = occurrences.get(t, 0) + 1
    if not occurrences:
        return True
    for x in occurrences:
        if all(v == x or n == 1 for v, n in occurrences.items()) and all(_pivoted(l, x) for l in c.literals):
            return True
    return False


def _pivoted(l: Literal, x: Var) -> bool:
    args = l.atom.args
    if len(args) == 1:
        return args[0] == x
    if l.positive:
        return args == (x, x)
    return x in args


def _monadic_ok(c: Clause) -> bool:
    if c.has_functions():
        return False
    for l in c.literals:
        a = l.atom
        if a.arity not in (1, 2):
            return False
        if l.positive and a.arity == 2 and a.args[0] != a.args[1]:
            return False
    return True


def classify_program(clauses: Iterable[Clause]) -> tuple:
    """``(nearly_monadic, simple)`` for a set of disjunctive rules given as clauses."""
    mon = [c for c in clauses if not _is_role_rule(c)]
    nearly_monadic = all(_monadic_ok(c) for c in mon)
    simple = nearly_monadic and all(is_simple_clause(c) for c in mon)
    return nearly_monadic, simple


class DisjunctiveProgram:
    """Function-free disjunctive rules (as clauses) split into role and other rules."""

    def __init__(self, clauses: Iterable[Clause] = ()):
        self.clauses = tuple(dict.fromkeys(clauses))
        for c in self.clauses:
            if c.has_functions():
                raise ValueError(f"disjunctive program clause has function terms: {c}")
        self.nearly_monadic, self.simple = classify_program(self.clauses)

    @property
    def p_rol(self) -> tuple:
        return tuple(c for c in self.clauses if _is_role_rule(c))

    @property
    def p_mon(self) -> tuple:
        return tuple(c for c in self.clauses if not _is_role_rule(c))

    def __iter__(self):
        return iter(self.clauses)

    def __len__(self) -> int:
        return len(self.clauses)

    def __contains__(self, c) -> bool:
        return c in self.clauses

    def __eq__(self, other) -> bool:
        return isinstance(other, DisjunctiveProgram) and set(self.clauses) == set(other.clauses)

    def __hash__(self) -> int:
        return hash(frozenset(self.clauses))

    def __str__(self) -> str:
        return "\n".join(str(c) for c in self.clauses)

    def predicates(self) -> set:
        return {p for c in self.clauses for p in c.predicates()}


def extract_dd(saturated: Iterable[TypedClause]) -> DisjunctiveProgram:
    return DisjunctiveProgram(tc.clause for tc in saturated if tc.ctype in DD_TYPES)


# ---------------------------------------------------------------------------
# definitional unfolding

def _occurrences(c: Clause, pred: str) -> int:
    return sum(1 for l in c.literals if l.atom.pred == pred)


def _reduce(clauses: list) -> list:
    """Drop tautologies and θ-subsumed clauses, keeping the earlier of two variants."""
    out: list = []
    for c in dict.fromkeys(clauses):
        if c.is_tautology or any(theta_subsumes(d, c) for d in out):
            continue
        out = [d for d in out if not theta_subsumes(c, d)] + [c]
    order = {c: i for i, c in enumerate(dict.fromkeys(clauses))}
    return sorted(out, key=lambda c: order[c])


def unfold_definitions(clauses: Iterable[Clause], predicates: Iterable[str]) -> tuple:
    """Eliminate auxiliary predicates by resolving away every occurrence.

    A predicate is eliminated only when each clause mentions it at most once,
    so every resolvent on it is free of it.  Returns ``(clauses, eliminated)``.
    """
    current = _reduce(list(clauses))
    eliminated = []
    for pred in sorted(set(predicates)):
        touching = [c for c in current if _occurrences(c, pred)]
        if not touching:
            continue
        if any(_occurrences(c, pred) > 1 for c in touching):
            log.debug("not unfolding %s: a clause mentions it twice", pred)
            continue
        pos = [c for c in touching if any(l.positive and l.atom.pred == pred for l in c.literals)]
        neg = [c for c in touching if c not in pos]
        new = []
        for p in pos:
            pl = next(l for l in p.literals if l.atom.pred == pred)
            for n in neg:
                nl = next(l for l in n.literals if l.atom.pred == pred)
                r = resolve(p, pl, n, nl)
                if r is not None and not r.is_tautology:
                    new.append(condense(r))
        current = _reduce([c for c in current if c not in touching] + new)
        eliminated.append(pred)
    return current, eliminated
