"""Ground entailment oracle: grounding plus a small DPLL satisfiability search.

A function-free universal program entails a ground fact exactly when the
fact holds in every Herbrand model over the active constants, so grounding
the program over the ABox individuals and refuting the negated goal decides
cautious (classical) entailment.  The search is deliberately minimal — unit
propagation and chronological backtracking — since it serves as a referee.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .datalog import ABox, AnswerSet, DatalogProgram, GroundQuery, TOP_PRED
from .dd import DisjunctiveProgram
from .logic import Atom, Clause, Const, Func, Var

log = logging.getLogger(__name__)

__all__ = [
    "GroundClauseSet", "GroundingLimitExceeded", "FactEntailment", "ground", "solve",
    "cautious_entails", "entailed_facts", "certain_answers", "skolem_entails", "ground_skolem",
    "GROUNDING_LIMIT", "FRESH_CONSTANT",
]

GROUNDING_LIMIT = 10 ** 6
FRESH_CONSTANT = "c_fresh"


class GroundingLimitExceeded(MemoryError):
    pass


def _as_clauses(p) -> list:
    if isinstance(p, DisjunctiveProgram):
        return list(p.clauses)
    if isinstance(p, DatalogProgram):
        return [r.to_clause() for r in p.rules]
    return [c if isinstance(c, Clause) else c.to_clause() for c in p]


@dataclass
class GroundClauseSet:
    """Propositional clauses over integer atoms; ``atoms`` and ``names`` are inverse."""

    atoms: dict = field(default_factory=dict)        # (pred, args) -> id, ids from 1
    names: list = field(default_factory=lambda: [None])
    clauses: list = field(default_factory=list)       # tuples of signed ids
    constants: tuple = ()

    def atom_id(self, pred: str, args: tuple) -> int:
        key = (pred, args)
        i = self.atoms.get(key)
        if i is None:
            i = len(self.names)
            self.atoms[key] = i
            self.names.append(key)
        return i

    def lookup(self, atom: Atom) -> Optional[int]:
        return self.atoms.get((atom.pred, tuple(_term_name(t) for t in atom.args)))

    def atom(self, i: int) -> Atom:
        pred, args = self.names[i]
        return Atom(pred, tuple(Const(a) for a in args))

    def __len__(self) -> int:
        return len(self.clauses)


def _term_name(t) -> str:
    if isinstance(t, Const):
        return t.name
    if isinstance(t, Func):
        return f"{t.name}({_term_name(t.arg)})"
    raise ValueError(f"non-ground term {t}")


def _instantiate(gcs: GroundClauseSet, c: Clause, universe: Sequence, limit: int,
                 closed: Optional[set] = None) -> None:
    """Append the instances of ``c`` over ``universe``.

    With ``closed`` given, instances whose function terms name an element
    outside that set are skipped.
    """
    variables = sorted(c.variables(), key=lambda v: v.name)
    for values in itertools.product(universe, repeat=len(variables)):
        s = dict(zip(variables, values))
        lits = []
        ok = True
        for l in c.literals:
            args = []
            for t in l.atom.args:
                if isinstance(t, Var):
                    args.append(s[t].name if isinstance(s[t], Const) else _term_name(s[t]))
                elif isinstance(t, Func):
                    inner = s[t.arg] if isinstance(t.arg, Var) else t.arg
                    if isinstance(inner, Func):
                        ok = False      # nesting deeper than the grounding universe
                        break
                    name = f"{t.name}({inner.name})"
                    if closed is not None and name not in closed:
                        ok = False
                        break
                    args.append(name)
                else:
                    args.append(t.name)
            if not ok:
                break
            i = gcs.atom_id(l.atom.pred, tuple(args))
            lits.append(i if l.positive else -i)
        if not ok:
            continue
        lits = tuple(sorted(set(lits)))
        if any(-x in lits for x in lits if x > 0):
            continue
        gcs.clauses.append(lits)
        if len(gcs.clauses) > limit:
            raise GroundingLimitExceeded(f"grounding exceeds {limit} clauses")


def ground(p, abox: ABox, *, limit: int = GROUNDING_LIMIT) -> GroundClauseSet:
    """All instantiations of the function-free program ``p`` over the ABox individuals.

    An empty ABox gets one fresh constant; ``Top(c)`` units are added for every
    constant when ``Top`` occurs in the program.
    """
    clauses = _as_clauses(p)
    for c in clauses:
        if c.has_functions():
            raise ValueError(f"ground expects a function-free program: {c}")
    names = {t.name for f in abox.facts for t in f.args}
    for c in clauses:
        for l in c.literals:
            names |= {t.name for t in l.atom.args if isinstance(t, Const)}
    if not names:
        names = {FRESH_CONSTANT}
    universe = [Const(n) for n in sorted(names)]
    expected = sum(len(universe) ** len(c.variables()) for c in clauses) + len(abox)
    if expected > limit:
        raise GroundingLimitExceeded(f"grounding would produce {expected} clauses (limit {limit})")
    gcs = GroundClauseSet(constants=tuple(sorted(names)))
    for f in sorted(abox.facts, key=Atom.key):
        gcs.clauses.append((gcs.atom_id(f.pred, tuple(t.name for t in f.args)),))
    if any(l.atom.pred == TOP_PRED for c in clauses for l in c.literals):
        for n in gcs.constants:
            gcs.clauses.append((gcs.atom_id(TOP_PRED, (n,)),))
    for c in clauses:
        _instantiate(gcs, c, universe, limit)
    return gcs


# ---------------------------------------------------------------------------
# satisfiability

def solve(clauses: Sequence[tuple], natoms: int) -> Optional[set]:
    """A model (set of true atom ids) of the clauses, or ``None`` if unsatisfiable.

    DPLL with unit propagation over two watched literals per clause and
    chronological backtracking on the lowest unassigned atom.
    """
    value = [0] * (natoms + 1)          # 0 unassigned, 1 true, -1 false
    watches: dict = {}
    units = []
    cls = []
    for c in clauses:
        if not c:
            return None
        if len(c) == 1:
            units.append(c[0])
            continue
        c = list(c)
        cls.append(c)
        watches.setdefault(c[0], []).append(c)
        watches.setdefault(c[1], []).append(c)

    def lit_value(l: int) -> int:
        v = value[abs(l)]
        return v if l > 0 else -v

    trail: list = []

    def assign(l: int) -> bool:
        v = lit_value(l)
        if v == 1:
            return True
        if v == -1:
            return False
        value[abs(l)] = 1 if l > 0 else -1
        trail.append(l)
        return True

    def propagate(start: int) -> bool:
        i = start
        while i < len(trail):
            false_lit = -trail[i]
            i += 1
            watching = watches.get(false_lit, [])
            keep = []
            ok = True
            for k, c in enumerate(watching):
                if not ok:
                    keep.append(c)
                    continue
                if c[0] == false_lit:
                    c[0], c[1] = c[1], c[0]
                if lit_value(c[0]) == 1:
                    keep.append(c)
                    continue
                for j in range(2, len(c)):
                    if lit_value(c[j]) != -1:
                        c[1], c[j] = c[j], c[1]
                        watches.setdefault(c[1], []).append(c)
                        break
                else:
                    keep.append(c)
                    if not assign(c[0]):
                        ok = False
            watches[false_lit] = keep
            if not ok:
                return False
        return True

    for u in units:
        if not assign(u):
            return None
    if not propagate(0):
        return None

    decisions: list = []          # (trail length before decision, literal)
    next_atom = 1
    while True:
        while next_atom <= natoms and value[next_atom] != 0:
            next_atom += 1
        if next_atom > natoms:
            return {i for i in range(1, natoms + 1) if value[i] == 1}
        decisions.append((len(trail), next_atom, False))
        assign(-next_atom)          # try false first: small models
        ok = propagate(len(trail) - 1)
        while not ok:
            # backtrack to the latest decision whose other branch is untried
            while decisions and decisions[-1][2]:
                mark, _, _ = decisions.pop()
                _undo(trail, value, mark)
            if not decisions:
                return None
            mark, atom, _ = decisions.pop()
            _undo(trail, value, mark)
            decisions.append((mark, atom, True))
            assign(atom)
            ok = propagate(len(trail) - 1)
        next_atom = 1


def _undo(trail: list, value: list, mark: int) -> None:
    while len(trail) > mark:
        value[abs(trail.pop())] = 0


# ---------------------------------------------------------------------------
# entailment

def _model(gcs: GroundClauseSet, extra: Iterable[tuple] = ()) -> Optional[set]:
    return solve(gcs.clauses + list(extra), len(gcs.names) - 1)


def cautious_entails(p, abox: ABox, goal, *, gcs: Optional[GroundClauseSet] = None) -> bool:
    """True iff every model of ``p ∪ abox`` satisfies the ground atom or conjunction ``goal``."""
    atoms = [goal] if isinstance(goal, Atom) else list(goal)
    gcs = ground(p, abox) if gcs is None else gcs
    ids = [gcs.lookup(a) for a in atoms]
    if any(i is None for i in ids):
        # an atom the grounding never mentions is false in some model, unless there is none
        return _model(gcs) is None
    return _model(gcs, [tuple(-i for i in ids)]) is None


@dataclass
class FactEntailment:
    consistent: bool
    facts: frozenset          # entailed ground atoms (empty when inconsistent)


def entailed_facts(p, abox: ABox, *, gcs: Optional[GroundClauseSet] = None,
                   predicates: Optional[set] = None) -> FactEntailment:
    """Every ground atom over the grounding's vocabulary that ``p ∪ abox`` entails.

    Candidates start as the atoms true in one model; each refuting model found
    along the way removes the candidates it falsifies.
    """
    gcs = ground(p, abox) if gcs is None else gcs
    model = _model(gcs)
    if model is None:
        return FactEntailment(False, frozenset())
    candidates = {i for i in model if predicates is None or gcs.names[i][0] in predicates}
    entailed = set()
    while candidates:
        i = min(candidates)
        candidates.discard(i)
        counter = _model(gcs, [(-i,)])
        if counter is None:
            entailed.add(i)
        else:
            candidates &= counter
    return FactEntailment(True, frozenset(gcs.atom(i) for i in entailed))


def certain_answers(p, abox: ABox, query: GroundQuery) -> AnswerSet:
    """Answers of a ground query by one entailment test per candidate substitution."""
    gcs = ground(p, abox)
    individuals = sorted(c.name for c in abox.individuals)
    names = query.answer_vars
    model = _model(gcs)
    if model is None:
        rows = set(itertools.product(individuals, repeat=len(names)))
        return AnswerSet(names, rows, inconsistent=True)
    rows = set()
    variables = sorted({t for a in query.atoms for t in a.args if isinstance(t, Var)},
                       key=lambda v: v.name)
    for values in itertools.product(individuals, repeat=len(variables)):
        s = dict(zip(variables, values))
        atoms = [Atom(a.pred, tuple(Const(s[t]) if isinstance(t, Var) else t for t in a.args))
                 for a in query.atoms]
        ids = [gcs.lookup(a) for a in atoms]
        if any(i is None or i not in model for i in ids):
            continue            # false in the model found, so not entailed
        if _model(gcs, [tuple(-i for i in ids)]) is None:
            rows.add(tuple(s[v] for v in names))
    return AnswerSet(names, rows)


# ---------------------------------------------------------------------------
# skolemised spot checks

def _constants(clauses: Iterable[Clause]) -> set:
    return {t.name for c in clauses for l in c.literals for t in l.atom.args
            if isinstance(t, Const)}


def _skolem_universe(theory: list, base: list, depth: int) -> list:
    """``base`` and the skolem terms over it nested up to ``depth``, each
    represented by a constant named after the term."""
    functions = sorted({t.name for c in theory for l in c.literals for t in l.atom.args
                        if isinstance(t, Func)})
    universe, layer = list(base), list(base)
    for _ in range(depth):
        layer = [Const(f"{f}({c.name})") for f in functions for c in layer]
        universe += layer
    return universe


def ground_skolem(theory: Iterable[Clause], abox: ABox, *, depth: int = 1,
                  limit: int = GROUNDING_LIMIT) -> GroundClauseSet:
    """Instances of clauses with skolem terms over the ABox individuals and the
    skolem terms over them nested up to ``depth``, plus the ABox facts.

    This is a subset of the Herbrand expansion, so every refutation it admits
    is sound; it is complete when skolem terms never need to nest deeper.
    """
    theory = list(theory)
    names = {t.name for f in abox.facts for t in f.args} | _constants(theory)
    names = sorted(names) or [FRESH_CONSTANT]
    universe = _skolem_universe(theory, [Const(n) for n in names], depth)
    closed = {t.name for t in universe}
    gcs = GroundClauseSet(constants=tuple(names))
    for f in sorted(abox.facts, key=Atom.key):
        gcs.clauses.append((gcs.atom_id(f.pred, tuple(t.name for t in f.args)),))
    if any(l.atom.pred == TOP_PRED for c in theory for l in c.literals):
        for t in universe:
            gcs.clauses.append((gcs.atom_id(TOP_PRED, (t.name,)),))
    for c in theory:
        _instantiate(gcs, c, universe, limit, closed)
    return gcs


def skolem_entails(theory: Iterable[Clause], clause: Clause, *, constants: int = 0,
                   depth: int = 1, limit: int = GROUNDING_LIMIT) -> bool:
    """Sound (incomplete) test that clauses with skolem terms entail ``clause``.

    The variables of ``clause`` become fresh constants and its negation is
    added as unit clauses; the theory is grounded over those constants, the
    constants the clauses mention and ``constants`` extra ones, plus the
    skolem terms over them nested up to ``depth``.  Unsatisfiability proves
    the entailment; satisfiability proves nothing.
    """
    theory = list(theory)
    fresh = {v: Const(f"k{i}") for i, v in enumerate(sorted(clause.variables(), key=lambda v: v.name))}
    base = list(fresh.values()) + [Const(f"e{i}") for i in range(constants)]
    base += [Const(n) for n in sorted(_constants(theory + [clause]))]
    universe = _skolem_universe(theory, base or [Const(FRESH_CONSTANT)], depth)
    closed = {t.name for t in universe}
    gcs = GroundClauseSet()
    for c in theory:
        _instantiate(gcs, c, universe, limit, closed)
    def name(t) -> str:
        if isinstance(t, Var):
            return fresh[t].name
        return f"{t.name}({name(t.arg)})" if isinstance(t, Func) else t.name

    for l in clause.literals:
        args = tuple(name(t) for t in l.atom.args)
        i = gcs.atom_id(l.atom.pred, args)
        gcs.clauses.append((-i,) if l.positive else (i,))
    return _model(gcs) is None
