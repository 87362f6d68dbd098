"""Transitivity elimination: a transitivity-free TBox plus a datalog role program."""

from __future__ import annotations

from dataclasses import dataclass

from .datalog import DatalogProgram, Rule
from .logic import Atom, Var
from .ontology import (
    AtomicConcept, Bottom, Role, Self, Some, SubClassOf, TBox, Top,
    Transitive, classify_fragment, is_normalized,
)

__all__ = ["TransitivitySplit", "upsilon", "split", "xi_rules", "propagation_name"]

_X, _Y, _Z = Var("x"), Var("y"), Var("z")


@dataclass(frozen=True)
class TransitivitySplit:
    omega: TBox
    xi: DatalogProgram

    def __post_init__(self):
        if self.omega.transitivity_axioms:
            raise ValueError("omega must not contain transitivity axioms")


def _role_tag(r: Role) -> str:
    return f"inv_{r.name}" if r.inverse else r.name


def propagation_name(b, r: Role) -> AtomicConcept:
    """Fresh concept that propagates ``b`` backwards along transitive role ``r``."""
    label = "Bottom" if isinstance(b, Bottom) else b.name
    return AtomicConcept(f"Q__{label}__{_role_tag(r)}")


def _require_normal(t: TBox) -> None:
    if not is_normalized(t):
        raise ValueError("transitivity elimination requires a normalised TBox")


def _existential_bodies(t: TBox):
    """Axioms of the shape ``∃S.A ⊑ B`` with ``A`` atomic or ⊤."""
    for ax in t.gcis:
        if isinstance(ax.sub, Some) and isinstance(ax.sub.filler, (AtomicConcept, Top)):
            yield ax


def upsilon(t: TBox) -> TBox:
    """Drop transitivity axioms and compensate existential bodies on transitive subroles."""
    _require_normal(t)
    theta = [ax for ax in t.axioms if not isinstance(ax, Transitive)]
    if classify_fragment(t).is_bool:
        return TBox(tuple(theta))
    extra = []
    transitive = sorted(t.transitive_roles, key=lambda r: (r.name, r.inverse))
    for ax in _existential_bodies(t):
        s, a, b = ax.sub.role, ax.sub.filler, ax.sup
        for r in transitive:
            if (r, s) not in t.role_hierarchy:
                continue
            q = propagation_name(b, r)
            extra += [SubClassOf(Some(r, a), q), SubClassOf(Some(r, q), q), SubClassOf(q, b)]
    return TBox(tuple(theta + extra))


def xi_rules(t: TBox) -> DatalogProgram:
    """Datalog rules for the role inclusions and transitivity axioms of ``t``."""
    rules = []

    def atom(r: Role, u, v) -> Atom:
        return Atom(r.name, (v, u) if r.inverse else (u, v))

    for ax in t.rias:
        rules.append(Rule(atom(ax.sup, _X, _Y), (atom(ax.sub, _X, _Y),)))
    for ax in t.transitivity_axioms:
        name = ax.role.name
        rules.append(Rule(Atom(name, (_X, _Z)), (Atom(name, (_X, _Y)), Atom(name, (_Y, _Z)))))
    # Normalise bodies so that each rule reads R(x,y) -> S(x,y) or R(x,y) -> S(y,x).
    out = []
    for r in rules:
        if len(r.body) == 1 and r.body[0].args == (_Y, _X):
            r = Rule(Atom(r.head.pred, tuple({_X: _Y, _Y: _X}[v] for v in r.head.args)),
                     (Atom(r.body[0].pred, (_X, _Y)),))
        out.append(r)
    return DatalogProgram(out)


def split(t: TBox, *, self_axioms: bool = True) -> TransitivitySplit:
    """Transitivity-free TBox ``omega`` and role program ``xi`` preserving fact entailment.

    ``self_axioms=False`` omits the ``A ⊑ ∃R.Self`` extension; it exists so
    the necessity of that extension can be demonstrated.
    """
    _require_normal(t)
    base = upsilon(t)
    extra = []
    if self_axioms:
        hierarchy = t.role_hierarchy
        atomic_transitive = sorted({r.name for r in t.transitive_roles})
        for ax in t.gcis:
            if not (isinstance(ax.sup, Some) and isinstance(ax.sub, (AtomicConcept, Top))):
                continue
            s = ax.sup.role
            for name in atomic_transitive:
                r = Role(name)
                if (s, r) in hierarchy and (s, r.inv()) in hierarchy:
                    extra.append(SubClassOf(ax.sub, Self(r)))
    return TransitivitySplit(TBox(base.axioms + tuple(extra)), xi_rules(t))
