"""Horn knowledge compilation of disjunctive programs by restricted resolution.

Clauses are kept in a Horn store and a non-Horn store.  Factoring applies to
non-Horn clauses and resolution needs at least one non-Horn premise, so two
Horn clauses are never resolved.  A conclusion is kept only if, after
condensation, it is neither a tautology nor θ-subsumed by a stored clause;
kept conclusions delete the stored clauses they θ-subsume.  The Horn store at
the fixpoint is a datalog program entailing the same facts as the input for
every ABox.  Termination is not guaranteed in general, so runs are bounded by
a :class:`Budget` unless the input is simple and nearly monadic.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

from .budget import DEFAULT_BUDGET, UNBOUNDED, Budget, BudgetMeter
from .dd import DisjunctiveProgram, classify_program
from .logic import Clause, SubsumptionIndex, condense, factors, resolvents
from .trace import Trace, unifier_json

log = logging.getLogger(__name__)

__all__ = [
    "Budget", "CompilationState", "CompilationOutcome", "VariableBoundViolation",
    "TERMINATED", "BUDGET_EXHAUSTED", "compile_horn", "relevant_consequences",
    "check_simple_termination", "variable_bound",
]

TERMINATED = "terminated"
BUDGET_EXHAUSTED = "budget_exhausted"


class VariableBoundViolation(AssertionError):
    """A stored clause exceeded the variable bound of simple nearly-monadic inputs."""


def _clauses(p) -> list:
    return list(p.clauses if isinstance(p, DisjunctiveProgram) else p)


def check_simple_termination(p) -> bool:
    """True iff ``p`` is nearly monadic and simple, so compilation terminates unbudgeted."""
    nearly_monadic, simple = classify_program(_clauses(p))
    return nearly_monadic and simple


def variable_bound(p) -> int:
    """``2n + 1`` where ``n`` is the number of binary predicates of ``p``."""
    binary = {l.atom.pred for c in _clauses(p) for l in c.literals if l.atom.arity == 2}
    return 2 * len(binary) + 1


@dataclass
class CompilationState:
    """Horn and non-Horn stores, the queue of clauses awaiting inferences, counters."""

    s_horn: dict = field(default_factory=dict)     # clause -> id, insertion ordered
    s_nhorn: dict = field(default_factory=dict)
    queue: deque = field(default_factory=deque)
    active: dict = field(default_factory=dict)     # clauses whose inferences are done
    index: SubsumptionIndex = field(default_factory=SubsumptionIndex)
    iterations: int = 0
    derived: int = 0
    deleted: int = 0
    next_id: int = 0

    @classmethod
    def from_clauses(cls, clauses: Iterable[Clause], *, condensation: bool = True) -> "CompilationState":
        """Initial stores: non-tautologies, condensed, inter-reduced (earlier clause wins)."""
        state = cls()
        for c in clauses:
            if condensation:
                c = condense(c)
            if c.is_tautology or state.is_redundant(c):
                continue
            state.delete_subsumed(c)
            state.store(c)
        return state

    def __contains__(self, c: Clause) -> bool:
        return c in self.s_horn or c in self.s_nhorn

    def stored(self) -> Iterator[Clause]:
        yield from self.s_horn
        yield from self.s_nhorn

    def id_of(self, c: Clause) -> int:
        return self.s_horn.get(c, self.s_nhorn.get(c))

    def is_redundant(self, c: Clause) -> bool:
        if c.is_tautology or c in self:
            return True
        # candidates come shortest first: they are the likelier subsumers
        return self.index.subsumes_any(c)

    def store(self, c: Clause) -> int:
        target = self.s_horn if c.is_horn else self.s_nhorn
        target[c] = self.next_id
        self.next_id += 1
        self.index.add(c)
        self.queue.append(c)
        return target[c]

    def delete_subsumed(self, c: Clause) -> list:
        """Remove stored clauses θ-subsumed by ``c``; returns ``(clause, id)`` pairs."""
        gone = [(d, self.id_of(d)) for d in self.index.subsumed_by(c)]
        gone.sort(key=lambda pair: pair[1])
        for d, _ in gone:
            (self.s_horn if d.is_horn else self.s_nhorn).pop(d)
            self.active.pop(d, None)
            self.index.remove(d)
        self.deleted += len(gone)
        return gone


@dataclass
class CompilationOutcome:
    status: str
    s_horn: tuple
    s_nhorn: tuple
    stats: dict
    trace: Optional[Trace] = None
    exhausted: Optional[str] = None

    @property
    def terminated(self) -> bool:
        return self.status == TERMINATED


def _inferences(c: Clause, partners: Iterable[Clause]) -> Iterator[tuple]:
    """Relevant inferences between ``c`` and ``partners`` (``c`` itself included by caller)."""
    if not c.is_horn:
        for inf in factors(c):
            yield inf, "factor", (c,)
    for d in partners:
        if c.is_horn and d.is_horn:
            continue
        if c.clashes_with(d):
            for inf in resolvents(c, d):
                yield inf, "resolve", (c, d)
        if d is not c and d.clashes_with(c):
            for inf in resolvents(d, c):
                yield inf, "resolve", (d, c)


def relevant_consequences(state: CompilationState, *, condensation: bool = True) -> Iterator[Clause]:
    """Every relevant consequence of the current stores (no state change).

    Factors of non-Horn clauses and resolvents with a non-Horn premise that,
    after condensation, are not redundant in the union of the stores.
    """
    stored = list(state.stored())
    seen = set()
    for i, c in enumerate(stored):
        for inf, _, _ in _inferences(c, stored[: i + 1]):
            r = condense(inf.clause) if condensation else inf.clause
            if r in seen or state.is_redundant(r):
                continue
            seen.add(r)
            yield r


def compile_horn(p, budget: Optional[Budget] = None, *, trace: Optional[Trace] = None,
                 condensation: bool = True) -> CompilationOutcome:
    """Run the compilation loop to its fixpoint or until the budget runs out.

    Without an explicit budget, simple nearly-monadic inputs run unbounded and
    everything else gets :data:`DEFAULT_BUDGET`.  On simple nearly-monadic
    inputs every stored clause is checked against the ``2n + 1`` variable bound.
    """
    clauses = _clauses(p)
    simple = check_simple_termination(clauses)
    if budget is None:
        budget = UNBOUNDED if simple else DEFAULT_BUDGET
    bound = variable_bound(clauses) if simple and condensation else None
    meter = BudgetMeter(budget)
    state = CompilationState.from_clauses(clauses, condensation=condensation)
    if trace is not None:
        for c in state.stored():
            trace.emit("input", id=state.id_of(c), clause=str(c), horn=c.is_horn)

    def check_bound(c: Clause) -> None:
        if bound is not None and len(c.variables()) > bound:
            raise VariableBoundViolation(f"clause {c} has more than {bound} variables")

    for c in state.stored():
        check_bound(c)

    exhausted = None
    while state.queue:
        exhausted = meter.exhausted()
        if exhausted is not None:
            break
        given = state.queue.popleft()
        if given not in state:
            continue
        meter.iterations += 1
        state.iterations += 1
        state.active[given] = None
        for inf, rule, premises in _inferences(given, list(state.active)):
            if any(q not in state for q in premises):
                continue        # a premise was deleted by an earlier conclusion
            if inf.clause in state:
                continue        # already stored up to renaming, hence already condensed
            r = condense(inf.clause) if condensation else inf.clause
            if state.is_redundant(r):
                continue
            gone = state.delete_subsumed(r)
            ident = state.store(r)
            state.derived += 1
            meter.clauses += 1
            check_bound(r)
            if trace is not None:
                for d, did in gone:
                    trace.emit("deleted", id=did, clause=str(d), by=ident)
                trace.emit("derived", id=ident, clause=str(r), horn=r.is_horn, rule=rule,
                           premises=[state.id_of(q) for q in premises],
                           literals=[str(inf.left), str(inf.right)],
                           unifier=unifier_json(inf.unifier))
            if given not in state:
                break           # the given clause itself was subsumed

    status = TERMINATED if not state.queue else BUDGET_EXHAUSTED
    if status == BUDGET_EXHAUSTED and exhausted is None:
        exhausted = meter.exhausted()
    stats = {
        "iterations": state.iterations, "derived": state.derived, "deleted": state.deleted,
        "horn": len(state.s_horn), "non_horn": len(state.s_nhorn),
        "seconds": round(meter.elapsed, 3), "simple_nearly_monadic": simple,
        "max_variables": max((len(c.variables()) for c in state.stored()), default=0),
    }
    log.info("horn compilation %s: %s", status, stats)
    if trace is not None:
        trace.emit("outcome", status=status, exhausted=exhausted, **stats)
    return CompilationOutcome(status, tuple(state.s_horn), tuple(state.s_nhorn), stats, trace, exhausted)
