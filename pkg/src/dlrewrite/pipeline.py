"""End-to-end rewriting: TBox → disjunctive program → Horn program plus role rules.

The steps are normalisation, transitivity elimination, clausification and
saturation into a disjunctive program, optional unfolding of the concepts
introduced by normalisation, and Horn compilation.  The resulting bundle
answers ground queries by plain datalog evaluation; :func:`oracle_check`
compares that against cautious entailment from the disjunctive program.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .budget import Budget
from .datalog import ABox, AnswerSet, DatalogProgram, GroundQuery, answer, evaluate
from .dd import DisjunctiveProgram, clausify, extract_dd, saturate, unfold_definitions
from .horn import CompilationOutcome, TERMINATED, compile_horn
from .ontology import TBox, classify_fragment, normalize
from .oracle import certain_answers, entailed_facts, ground
from .syntax import format_program, parse_program
from .trace import Trace
from .transitivity import split

log = logging.getLogger(__name__)

__all__ = [
    "PipelineConfig", "RewritingBundle", "Reference", "OracleReport", "rewrite",
    "reference", "write_bundle", "read_bundle", "answer_bundle", "evaluate_bundle",
    "oracle_check", "BUNDLE_FILES",
]

BUNDLE_FILES = ("p_horn.dl", "xi.dl", "metadata.json")


@dataclass(frozen=True)
class PipelineConfig:
    budget: Optional[Budget] = None      # None: unbounded only for simple nearly-monadic programs
    unfold: bool = True
    self_axioms: bool = True
    condensation: bool = True


@dataclass
class RewritingBundle:
    p_horn: DatalogProgram
    xi: DatalogProgram
    metadata: dict = field(default_factory=dict)
    dd: Optional[DisjunctiveProgram] = None           # before unfolding
    compiled_input: tuple = ()                        # after unfolding
    outcome: Optional[CompilationOutcome] = None

    @property
    def status(self) -> str:
        return self.metadata.get("status", TERMINATED)

    @property
    def terminated(self) -> bool:
        return self.status == TERMINATED

    @property
    def program(self) -> DatalogProgram:
        return self.p_horn | self.xi


def _dd(t: TBox, config: PipelineConfig, trace: Optional[Trace]):
    n = normalize(t)
    parts = split(n, self_axioms=config.self_axioms)
    if trace is not None:
        trace.emit("stage", name="saturation")
    dd = extract_dd(saturate(clausify(parts.omega), trace=trace))
    return n, parts, dd


def rewrite(t: TBox, config: PipelineConfig = PipelineConfig(), *,
            trace: Optional[Trace] = None) -> RewritingBundle:
    n, parts, dd = _dd(t, config, trace)
    compiled = list(dd.clauses)
    eliminated: list = []
    if config.unfold:
        fresh = n.concept_names - t.concept_names
        compiled, eliminated = unfold_definitions(compiled, fresh)
    if trace is not None:
        trace.emit("stage", name="compilation")
    outcome = compile_horn(compiled, config.budget, trace=trace, condensation=config.condensation)
    p_horn = DatalogProgram.from_clauses(outcome.s_horn)
    metadata = {
        "fragment": classify_fragment(t).label,
        "status": outcome.status,
        "exhausted": outcome.exhausted,
        "statistics": outcome.stats,
        "disjunctive_rules": len(dd),
        "unfolded": eliminated,
        "nearly_monadic": dd.nearly_monadic,
        "simple": dd.simple,
        "signature": sorted(t.concept_names | t.role_names),
    }
    log.info("rewriting %s: %d Horn rules, %d role rules", outcome.status, len(p_horn), len(parts.xi))
    return RewritingBundle(p_horn, parts.xi, metadata, dd, tuple(compiled), outcome)


# ---------------------------------------------------------------------------
# bundle files

def write_bundle(bundle: RewritingBundle, directory) -> Path:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    (d / "p_horn.dl").write_text(format_program(bundle.p_horn), encoding="utf-8")
    (d / "xi.dl").write_text(format_program(bundle.xi), encoding="utf-8")
    (d / "metadata.json").write_text(json.dumps(bundle.metadata, indent=2, sort_keys=True) + "\n",
                                     encoding="utf-8")
    return d


def read_bundle(directory) -> RewritingBundle:
    d = Path(directory)
    missing = [f for f in BUNDLE_FILES if not (d / f).is_file()]
    if missing:
        raise FileNotFoundError(f"bundle {d} lacks {', '.join(missing)}")
    return RewritingBundle(
        parse_program((d / "p_horn.dl").read_text(encoding="utf-8")),
        parse_program((d / "xi.dl").read_text(encoding="utf-8")),
        json.loads((d / "metadata.json").read_text(encoding="utf-8")),
    )


def answer_bundle(bundle: RewritingBundle, abox: ABox, query: GroundQuery) -> AnswerSet:
    return answer(query, bundle.program, abox)


def evaluate_bundle(bundle: RewritingBundle, abox: ABox):
    return evaluate(bundle.program, abox)


# ---------------------------------------------------------------------------
# oracle comparison

@dataclass(frozen=True)
class Reference:
    """The disjunctive program of a TBox with its role rules, as clauses for the oracle."""

    clauses: tuple
    signature: frozenset

    @classmethod
    def of(cls, t: TBox, config: PipelineConfig = PipelineConfig()) -> "Reference":
        _, parts, dd = _dd(t, config, None)
        return cls(tuple(dd.clauses) + tuple(r.to_clause() for r in parts.xi),
                   frozenset(t.concept_names | t.role_names))


def reference(t: TBox) -> Reference:
    return Reference.of(t)


@dataclass
class OracleReport:
    consistent_bundle: bool
    consistent_oracle: bool
    missing: frozenset          # entailed per the oracle, not derived by the bundle
    extra: frozenset            # derived by the bundle, not entailed per the oracle
    query: Optional[GroundQuery] = None

    @property
    def ok(self) -> bool:
        return self.consistent_bundle == self.consistent_oracle and not self.missing and not self.extra

    def lines(self) -> list:
        out = [f"consistent: bundle={self.consistent_bundle} oracle={self.consistent_oracle}"]
        out += [f"missing {a}" for a in sorted(self.missing, key=str)]
        out += [f"extra {a}" for a in sorted(self.extra, key=str)]
        out.append("agree" if self.ok else "DIFF")
        return out


def oracle_check(bundle: RewritingBundle, ref: Reference, abox: ABox,
                 query: Optional[GroundQuery] = None) -> OracleReport:
    """Diff the bundle against cautious entailment from the disjunctive program.

    With a query the certain answers are compared; otherwise all facts over the
    TBox signature and the ABox individuals.  Inconsistency is compared when
    the ABox names at least one individual.
    """
    if query is not None:
        got = answer_bundle(bundle, abox, query)
        want = certain_answers(ref.clauses, abox, query)
        return OracleReport(not got.inconsistent, not want.inconsistent,
                            frozenset(want.answers - got.answers),
                            frozenset(got.answers - want.answers), query)
    individuals = abox.individuals
    ev = evaluate_bundle(bundle, abox)
    oracle = entailed_facts(ref.clauses, abox, gcs=ground(ref.clauses, abox),
                            predicates=set(ref.signature))

    def relevant(facts) -> frozenset:
        return frozenset(f for f in facts if f.pred in ref.signature
                         and all(t in individuals for t in f.args))

    if not individuals:
        return OracleReport(True, True, frozenset(), frozenset())
    if ev.inconsistent or not oracle.consistent:
        return OracleReport(not ev.inconsistent, oracle.consistent, frozenset(), frozenset())
    got, want = relevant(ev.facts), relevant(oracle.facts)
    return OracleReport(True, True, want - got, got - want)
