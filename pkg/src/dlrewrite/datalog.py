"""Semi-naive bottom-up evaluation of datalog programs over ABoxes."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .logic import Atom, Clause, Const, Func, Literal, Var

log = logging.getLogger(__name__)

__all__ = [
    "Rule", "DatalogProgram", "UnsafeRuleError", "ABox", "GroundQuery",
    "AnswerSet", "Evaluation", "evaluate", "answer", "apply_xi", "rule_from_clause",
    "TOP_PRED",
]

TOP_PRED = "Top"


class UnsafeRuleError(ValueError):
    pass


@dataclass(frozen=True)
class Rule:
    """``body -> head``; ``head is None`` encodes an inconsistency rule."""

    head: Optional[Atom]
    body: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "body", tuple(self.body))

    def is_safe(self) -> bool:
        if self.head is None:
            return True
        bound = set()
        for a in self.body:
            bound |= a.variables()
        return self.head.variables() <= bound

    def variables(self) -> set:
        out = set() if self.head is None else self.head.variables()
        for a in self.body:
            out |= a.variables()
        return out

    def to_clause(self) -> Clause:
        lits = [Literal(a, False) for a in self.body]
        if self.head is not None:
            lits.append(Literal(self.head, True))
        return Clause(lits)

    def __str__(self) -> str:
        head = "false" if self.head is None else str(self.head)
        if not self.body:
            return f"{head}."
        return f"{head} :- {', '.join(map(str, self.body))}."


def rule_from_clause(c: Clause, guard: bool = True) -> Rule:
    """Datalog rule for a Horn clause; unbound head variables get ``Top`` guards."""
    if not c.is_horn:
        raise ValueError(f"not a Horn clause: {c}")
    if c.has_functions():
        raise ValueError(f"clause is not function-free: {c}")
    pos = c.positive
    head = pos[0].atom if pos else None
    body = [l.atom for l in c.negative]
    if guard and head is not None:
        bound = set()
        for a in body:
            bound |= a.variables()
        for v in sorted(head.variables() - bound, key=lambda v: v.name):
            body.append(Atom(TOP_PRED, (v,)))
    return Rule(head, tuple(body))


@dataclass
class DatalogProgram:
    rules: list = field(default_factory=list)

    def __post_init__(self):
        self.rules = list(dict.fromkeys(self.rules))
        for r in self.rules:
            if not r.is_safe():
                raise UnsafeRuleError(f"unsafe rule: {r}")
            if r.head is not None and r.head.args and any(isinstance(t, Func) for t in r.head.args):
                raise ValueError(f"function term in datalog rule: {r}")

    def __iter__(self):
        return iter(self.rules)

    def __len__(self) -> int:
        return len(self.rules)

    def __or__(self, other: "DatalogProgram") -> "DatalogProgram":
        return DatalogProgram(self.rules + other.rules)

    def __eq__(self, other) -> bool:
        return isinstance(other, DatalogProgram) and set(self.rules) == set(other.rules)

    def __str__(self) -> str:
        return "\n".join(str(r) for r in self.rules)

    @classmethod
    def from_clauses(cls, clauses: Iterable[Clause]) -> "DatalogProgram":
        return cls([rule_from_clause(c) for c in clauses])

    def predicates(self) -> set:
        out = set()
        for r in self.rules:
            if r.head is not None:
                out.add(r.head.pred)
            out |= {a.pred for a in r.body}
        return out


@dataclass(frozen=True)
class ABox:
    facts: frozenset = frozenset()

    def __post_init__(self):
        facts = frozenset(self.facts)
        for f in facts:
            if not f.is_ground() or any(isinstance(t, Func) for t in f.args):
                raise ValueError(f"ABox facts must be ground and function-free: {f}")
        object.__setattr__(self, "facts", facts)

    def __iter__(self):
        return iter(sorted(self.facts, key=Atom.key))

    def __len__(self) -> int:
        return len(self.facts)

    def __contains__(self, a) -> bool:
        return a in self.facts

    @property
    def individuals(self) -> frozenset:
        return frozenset(t for f in self.facts for t in f.args)

    def __str__(self) -> str:
        return "\n".join(str(f) for f in self)


@dataclass(frozen=True)
class GroundQuery:
    atoms: tuple
    answer_vars: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))
        if not self.answer_vars:
            seen = []
            for a in self.atoms:
                for t in a.args:
                    if isinstance(t, Var) and t not in seen:
                        seen.append(t)
            object.__setattr__(self, "answer_vars", tuple(seen))

    def __str__(self) -> str:
        def term(t):
            return "?" + t.name if isinstance(t, Var) else str(t)
        return ", ".join(f"{a.pred}({','.join(term(t) for t in a.args)})" for a in self.atoms)


@dataclass
class AnswerSet:
    variables: tuple
    answers: set
    inconsistent: bool = False

    @property
    def warning(self) -> Optional[str]:
        if self.inconsistent:
            return "ABox is inconsistent with the program; every tuple is an answer"
        return None

    def as_dicts(self) -> list:
        return [dict(zip((v.name for v in self.variables), row)) for row in sorted(self.answers)]

    def __eq__(self, other) -> bool:
        return (isinstance(other, AnswerSet) and self.variables == other.variables
                and self.answers == other.answers)


@dataclass
class Evaluation:
    facts: set
    inconsistent: bool
    iterations: int

    def __contains__(self, a: Atom) -> bool:
        return a in self.facts


# ---------------------------------------------------------------------------

class _Index:
    def __init__(self):
        self.by_pred: dict = {}
        self.by_arg: dict = {}

    def add(self, pred: str, args: tuple) -> bool:
        rel = self.by_pred.setdefault(pred, set())
        if args in rel:
            return False
        rel.add(args)
        for i, c in enumerate(args):
            self.by_arg.setdefault((pred, i, c), set()).add(args)
        return True

    def lookup(self, pred: str, pattern: tuple) -> Iterable:
        best = None
        for i, c in enumerate(pattern):
            if c is not None:
                s = self.by_arg.get((pred, i, c))
                if s is None:
                    return ()
                if best is None or len(s) < len(best):
                    best = s
        if best is None:
            return self.by_pred.get(pred, ())
        return best


def _join(body: tuple, sources: list, binding: dict):
    """Enumerate bindings; ``sources[i]`` is the index used for ``body[i]``."""
    if not body:
        yield binding
        return
    atom, src = body[0], sources[0]
    pattern = tuple(binding.get(t.name) if isinstance(t, Var) else t.name for t in atom.args)
    for args in list(src.lookup(atom.pred, pattern)):
        b = binding
        ok = True
        for t, c in zip(atom.args, args):
            if isinstance(t, Var):
                cur = b.get(t.name)
                if cur is None:
                    if b is binding:
                        b = dict(binding)
                    b[t.name] = c
                elif cur != c:
                    ok = False
                    break
            elif t.name != c:
                ok = False
                break
        if ok:
            yield from _join(body[1:], sources[1:], b)


def _ground_head(head: Atom, b: dict) -> tuple:
    return tuple(b[t.name] if isinstance(t, Var) else t.name for t in head.args)


def evaluate(program: DatalogProgram, abox: ABox, *, max_iterations: Optional[int] = None) -> Evaluation:
    """Least fixpoint of ``program`` over ``abox`` by semi-naive iteration.

    ``Top(c)`` is asserted for every individual so guarded rules fire
    everywhere.  Firing a rule with an empty head marks the result
    inconsistent.
    """
    full = _Index()
    delta = _Index()
    inconsistent = False
    for f in abox.facts:
        args = tuple(t.name for t in f.args)
        full.add(f.pred, args)
        delta.add(f.pred, args)
    constants = {t.name for f in abox.facts for t in f.args}
    for r in program.rules:
        for a in ([r.head] if r.head is not None else []) + list(r.body):
            constants |= {t.name for t in a.args if isinstance(t, Const)}
    for c in constants:
        if full.add(TOP_PRED, (c,)):
            delta.add(TOP_PRED, (c,))
    for r in program.rules:
        if not r.body:
            if r.head is None:
                inconsistent = True
            else:
                args = _ground_head(r.head, {})
                if full.add(r.head.pred, args):
                    delta.add(r.head.pred, args)

    rules = [r for r in program.rules if r.body]
    iterations = 0
    while any(delta.by_pred.values()):
        iterations += 1
        if max_iterations is not None and iterations > max_iterations:
            raise RuntimeError("datalog evaluation exceeded iteration bound")
        new = _Index()
        for r in rules:
            for i, a in enumerate(r.body):
                if not delta.by_pred.get(a.pred):
                    continue
                sources = [full] * len(r.body)
                sources[i] = delta
                for b in _join(r.body, sources, {}):
                    if r.head is None:
                        inconsistent = True
                        continue
                    args = _ground_head(r.head, b)
                    if args not in full.by_pred.get(r.head.pred, ()):
                        new.add(r.head.pred, args)
        for pred, rel in new.by_pred.items():
            for args in rel:
                full.add(pred, args)
        delta = new
    facts = {Atom(p, tuple(Const(c) for c in args))
             for p, rel in full.by_pred.items() if p != TOP_PRED for args in rel}
    return Evaluation(facts, inconsistent, iterations)


def answer(query: GroundQuery, program: DatalogProgram, abox: ABox) -> AnswerSet:
    """Certain answers of a ground query; all tuples when the data is inconsistent."""
    ev = evaluate(program, abox)
    individuals = sorted(c.name for c in abox.individuals)
    names = [v.name for v in query.answer_vars]
    if ev.inconsistent:
        log.info("inconsistent ABox: returning every tuple over %d individuals", len(individuals))
        rows = set(itertools.product(individuals, repeat=len(names)))
        return AnswerSet(query.answer_vars, rows, inconsistent=True)
    index = _Index()
    for f in ev.facts:
        index.add(f.pred, tuple(t.name for t in f.args))
    allowed = set(individuals)
    rows = set()
    for b in _join(query.atoms, [index] * len(query.atoms), {}):
        row = tuple(b[n] for n in names)
        if all(c in allowed for c in row):
            rows.add(row)
    return AnswerSet(query.answer_vars, rows)


def apply_xi(xi: DatalogProgram, abox: ABox) -> ABox:
    """Closure of ``abox`` under role inclusion and transitivity rules."""
    for r in xi.rules:
        if r.head is None or r.head.arity != 2 or any(a.arity != 2 for a in r.body):
            raise ValueError(f"not a role rule: {r}")
    return ABox(frozenset(evaluate(xi, abox).facts))
