"""SHI concepts, roles, axioms and TBoxes, plus structural normalisation."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Union

__all__ = [
    "Role", "Top", "Bottom", "TOP", "BOTTOM", "AtomicConcept", "Not", "And",
    "Or", "Some", "All", "Self", "Concept", "SubClassOf", "SubRole",
    "Transitive", "Axiom", "TBox", "Fragment", "equivalent", "normalize",
    "is_normal", "is_normalized", "role_subsumed", "classify_fragment", "NormalizationError",
]


class NormalizationError(ValueError):
    pass


@dataclass(frozen=True, slots=True)
class Role:
    name: str
    inverse: bool = False

    def inv(self) -> "Role":
        return Role(self.name, not self.inverse)

    def __str__(self) -> str:
        return f"Inv({self.name})" if self.inverse else self.name


@dataclass(frozen=True, slots=True)
class Top:
    def __str__(self) -> str:
        return "Top"


@dataclass(frozen=True, slots=True)
class Bottom:
    def __str__(self) -> str:
        return "Bottom"


TOP = Top()
BOTTOM = Bottom()


@dataclass(frozen=True, slots=True)
class AtomicConcept:
    name: str

    def __post_init__(self):
        if self.name in ("Top", "Bottom"):
            raise ValueError(f"reserved concept name {self.name}")

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class Not:
    operand: "Concept"

    def __str__(self) -> str:
        return f"Not({self.operand})"


@dataclass(frozen=True, slots=True)
class And:
    operands: tuple

    def __post_init__(self):
        object.__setattr__(self, "operands", tuple(self.operands))
        if len(self.operands) < 2:
            raise ValueError("And needs at least two operands")

    def __str__(self) -> str:
        return f"And({', '.join(map(str, self.operands))})"


@dataclass(frozen=True, slots=True)
class Or:
    operands: tuple

    def __post_init__(self):
        object.__setattr__(self, "operands", tuple(self.operands))
        if len(self.operands) < 2:
            raise ValueError("Or needs at least two operands")

    def __str__(self) -> str:
        return f"Or({', '.join(map(str, self.operands))})"


@dataclass(frozen=True, slots=True)
class Some:
    role: Role
    filler: "Concept"

    def __str__(self) -> str:
        return f"Some({self.role}, {self.filler})"


@dataclass(frozen=True, slots=True)
class All:
    role: Role
    filler: "Concept"

    def __str__(self) -> str:
        return f"All({self.role}, {self.filler})"


@dataclass(frozen=True, slots=True)
class Self:
    role: Role

    def __str__(self) -> str:
        return f"HasSelf({self.role})"


Concept = Union[Top, Bottom, AtomicConcept, Not, And, Or, Some, All, Self]


@dataclass(frozen=True, slots=True)
class SubClassOf:
    sub: Concept
    sup: Concept

    def __str__(self) -> str:
        return f"SubClassOf({self.sub}, {self.sup})"


@dataclass(frozen=True, slots=True)
class SubRole:
    sub: Role
    sup: Role

    def __str__(self) -> str:
        return f"SubRole({self.sub}, {self.sup})"


@dataclass(frozen=True, slots=True)
class Transitive:
    role: Role

    def __str__(self) -> str:
        return f"Transitive({self.role})"


Axiom = Union[SubClassOf, SubRole, Transitive]


def equivalent(c: Concept, d: Concept) -> list:
    """``C ≡ D`` as its two inclusions."""
    return [SubClassOf(c, d), SubClassOf(d, c)]


def _subconcepts(c: Concept):
    yield c
    if isinstance(c, Not):
        yield from _subconcepts(c.operand)
    elif isinstance(c, (And, Or)):
        for o in c.operands:
            yield from _subconcepts(o)
    elif isinstance(c, (Some, All)):
        yield from _subconcepts(c.filler)


def _check_concept(c) -> None:
    if isinstance(c, (Top, Bottom, AtomicConcept)):
        return
    if isinstance(c, Not):
        return _check_concept(c.operand)
    if isinstance(c, (And, Or)):
        for o in c.operands:
            _check_concept(o)
        return
    if isinstance(c, (Some, All)):
        if not isinstance(c.role, Role):
            raise NormalizationError(f"malformed role in {c}")
        return _check_concept(c.filler)
    if isinstance(c, Self):
        if not isinstance(c.role, Role):
            raise NormalizationError(f"malformed role in {c}")
        return
    raise NormalizationError(f"malformed concept {c!r}")


@dataclass(frozen=True)
class TBox:
    axioms: tuple = ()

    def __post_init__(self):
        # order-preserving dedupe
        object.__setattr__(self, "axioms", tuple(dict.fromkeys(self.axioms)))

    def __iter__(self):
        return iter(self.axioms)

    def __len__(self) -> int:
        return len(self.axioms)

    def __eq__(self, other) -> bool:
        return isinstance(other, TBox) and set(self.axioms) == set(other.axioms)

    def __hash__(self) -> int:
        return hash(frozenset(self.axioms))

    def __str__(self) -> str:
        return "\n".join(str(a) for a in self.axioms)

    @property
    def gcis(self) -> list:
        return [a for a in self.axioms if isinstance(a, SubClassOf)]

    @property
    def rias(self) -> list:
        return [a for a in self.axioms if isinstance(a, SubRole)]

    @property
    def transitivity_axioms(self) -> list:
        return [a for a in self.axioms if isinstance(a, Transitive)]

    @cached_property
    def concept_names(self) -> frozenset:
        out = set()
        for a in self.gcis:
            for c in itertools.chain(_subconcepts(a.sub), _subconcepts(a.sup)):
                if isinstance(c, AtomicConcept):
                    out.add(c.name)
        return frozenset(out)

    @cached_property
    def role_names(self) -> frozenset:
        out = set()
        for a in self.axioms:
            if isinstance(a, SubRole):
                out |= {a.sub.name, a.sup.name}
            elif isinstance(a, Transitive):
                out.add(a.role.name)
            else:
                for c in itertools.chain(_subconcepts(a.sub), _subconcepts(a.sup)):
                    if isinstance(c, (Some, All, Self)):
                        out.add(c.role.name)
        return frozenset(out)

    @cached_property
    def role_hierarchy(self) -> frozenset:
        """Reflexive-transitive closure of the RIAs, closed under inverses."""
        roles = set()
        for n in self.role_names:
            roles |= {Role(n), Role(n, True)}
        edges = set()
        for a in self.rias:
            edges.add((a.sub, a.sup))
            edges.add((a.sub.inv(), a.sup.inv()))
        closure = {(r, r) for r in roles} | edges
        changed = True
        while changed:
            changed = False
            for (a, b) in list(closure):
                for (c, d) in edges:
                    if b == c and (a, d) not in closure:
                        closure.add((a, d))
                        changed = True
        return frozenset(closure)

    def is_transitive(self, r: Role) -> bool:
        return any(t.role.name == r.name for t in self.transitivity_axioms)

    @cached_property
    def transitive_roles(self) -> frozenset:
        out = set()
        for t in self.transitivity_axioms:
            out |= {Role(t.role.name), Role(t.role.name, True)}
        return frozenset(out)

    def signature(self) -> tuple:
        """(concept names, role names)."""
        return self.concept_names, self.role_names


def role_subsumed(t: TBox, r: Role, s: Role) -> bool:
    if r == s:
        return True
    return (r, s) in t.role_hierarchy


# ---------------------------------------------------------------------------
# fragments

@dataclass(frozen=True)
class Fragment:
    label: str           # "ELU", "ELU-bool", "ALCHI" or "SHI"
    is_bool: bool
    is_alchi: bool
    is_elu: bool
    has_transitivity: bool

    def __str__(self) -> str:
        return self.label


def classify_fragment(t: TBox) -> Fragment:
    concepts = [c for a in t.gcis for c in itertools.chain(_subconcepts(a.sub), _subconcepts(a.sup))]
    has_all = any(isinstance(c, All) for c in concepts)
    is_bool = not has_all and all(isinstance(c.filler, Top) for c in concepts if isinstance(c, Some))
    has_tra = bool(t.transitivity_axioms)
    is_alchi = not has_tra
    inverse = any(c.role.inverse for c in concepts if isinstance(c, (Some, All, Self)))
    inverse = inverse or any(a.sub.inverse or a.sup.inverse for a in t.rias)
    is_elu = (is_alchi and not t.rias and not inverse
              and not any(isinstance(c, (Self, Bottom, All, Not)) for c in concepts))
    if is_elu:
        label = "ELU"
    elif is_bool:
        label = "ELU-bool"
    elif is_alchi:
        label = "ALCHI"
    else:
        label = "SHI"
    return Fragment(label, is_bool, is_alchi, is_elu, has_tra)


# ---------------------------------------------------------------------------
# normal form
#
#   And(A1..An) ⊑ Or(B1..Bm)      atomic A_i (or Top / none), atomic B_j (or Bottom / none)
#   Some(R, A) ⊑ B                A atomic or Top, B atomic or Bottom
#   A ⊑ Some(R, B)                A atomic or Top, B atomic or Top
#   HasSelf(R) ⊑ A,  A ⊑ HasSelf(R)

def _is_name(c, *, top=False, bottom=False) -> bool:
    return (isinstance(c, AtomicConcept) or (top and isinstance(c, Top))
            or (bottom and isinstance(c, Bottom)))


def _conj_of_names(c) -> bool:
    if isinstance(c, And):
        return all(_is_name(o) for o in c.operands)
    return _is_name(c, top=True)


def _disj_of_names(c) -> bool:
    if isinstance(c, Or):
        return all(_is_name(o) for o in c.operands)
    return _is_name(c, bottom=True)


def is_normal(ax: Axiom) -> bool:
    if not isinstance(ax, SubClassOf):
        return True
    sub, sup = ax.sub, ax.sup
    if isinstance(sub, Some):
        return _is_name(sub.filler, top=True) and _is_name(sup, bottom=True)
    if isinstance(sub, Self):
        return _is_name(sup, bottom=True)
    if isinstance(sup, Some):
        return _is_name(sub, top=True) and _is_name(sup.filler, top=True)
    if isinstance(sup, Self):
        return _is_name(sub, top=True)
    return _conj_of_names(sub) and _disj_of_names(sup)


def _nnf_neg(c: Concept) -> Concept:
    """Negation normal form of ``Not(c)``."""
    if isinstance(c, Top):
        return BOTTOM
    if isinstance(c, Bottom):
        return TOP
    if isinstance(c, (AtomicConcept, Self)):
        return Not(c)
    if isinstance(c, Not):
        return c.operand
    if isinstance(c, And):
        return Or(tuple(_nnf_neg(o) for o in c.operands))
    if isinstance(c, Or):
        return And(tuple(_nnf_neg(o) for o in c.operands))
    if isinstance(c, Some):
        return All(c.role, _nnf_neg(c.filler))
    if isinstance(c, All):
        return Some(c.role, _nnf_neg(c.filler))
    raise NormalizationError(f"malformed concept {c!r}")


class _Normalizer:
    def __init__(self, reserved: Iterable[str]):
        self.reserved = set(reserved)
        self.counter = 0
        self.out: list = []
        self.names: dict = {}
        self.defined: set = set()

    def fresh(self, key) -> AtomicConcept:
        # one fresh name per named subconcept and polarity
        if key in self.names:
            return self.names[key]
        while True:
            self.counter += 1
            name = f"X{self.counter}"
            if name not in self.reserved:
                break
        c = AtomicConcept(name)
        self.names[key] = c
        return c

    def first_use(self, x: AtomicConcept) -> bool:
        if x in self.defined:
            return False
        self.defined.add(x)
        return True

    def emit(self, ax: SubClassOf) -> None:
        if ax not in self.out:
            self.out.append(ax)

    # An axiom under construction is a body (conjunction, negative polarity)
    # and a head (disjunction, positive polarity) of arbitrary concepts.
    def gci(self, body: list, head: list) -> None:
        body, head = list(body), list(head)
        names_b: list = []
        names_h: list = []
        while body or head:
            if body:
                c = body.pop(0)
                if isinstance(c, Top):
                    continue
                if isinstance(c, Bottom):
                    return
                if isinstance(c, AtomicConcept):
                    names_b.append(c)
                elif isinstance(c, And):
                    body[:0] = list(c.operands)
                elif isinstance(c, Not):
                    head.append(c.operand)
                elif isinstance(c, (Or, Some, Self)):
                    x = self.body_name(c)
                    if isinstance(x, Bottom):
                        return
                    names_b.append(x)
                elif isinstance(c, All):
                    head.append(Some(c.role, _nnf_neg(c.filler)))
                else:
                    raise NormalizationError(f"malformed concept {c!r}")
            else:
                c = head.pop(0)
                if isinstance(c, Bottom):
                    continue
                if isinstance(c, Top):
                    return
                if isinstance(c, AtomicConcept):
                    names_h.append(c)
                elif isinstance(c, Or):
                    head[:0] = list(c.operands)
                elif isinstance(c, Not):
                    body.append(c.operand)
                elif isinstance(c, And):
                    # split: one axiom per conjunct
                    rest_b = list(names_b) + body
                    rest_h = list(names_h) + head
                    for o in c.operands:
                        self.gci(rest_b, [o] + rest_h)
                    return
                elif isinstance(c, (Some, All, Self)):
                    x = self.head_name(c)
                    if isinstance(x, Bottom):
                        continue
                    if isinstance(x, Top):
                        return
                    names_h.append(x)
                else:
                    raise NormalizationError(f"malformed concept {c!r}")
        names_b = list(dict.fromkeys(names_b))
        names_h = list(dict.fromkeys(names_h))
        if set(names_b) & set(names_h):
            return
        self.emit(SubClassOf(_mk_and(names_b), _mk_or(names_h)))

    # A defining axiom is emitted straight from the named concept's top
    # constructor: re-entering gci with the concept itself would look up the
    # same name and yield the tautology X ⊑ X.
    def body_name(self, c: Concept) -> Concept:
        """Name X with c ⊑ X for a disjunction, existential or self restriction."""
        if isinstance(c, Some):
            filler = self.name_negative(c.filler)
            if isinstance(filler, Bottom):
                return BOTTOM
            c = Some(c.role, filler)
        x = self.fresh(("neg", c))
        if self.first_use(x):
            if isinstance(c, Or):
                for o in c.operands:
                    self.gci([o], [x])
            else:
                self.emit(SubClassOf(c, x))
        return x

    def head_name(self, c: Concept) -> Concept:
        """Name X with X ⊑ c for an existential, universal or self restriction."""
        if isinstance(c, (Some, All)):
            filler = self.name_positive(c.filler)
            if isinstance(c, Some) and isinstance(filler, Bottom):
                return BOTTOM
            if isinstance(c, All) and isinstance(filler, Top):
                return TOP
            c = type(c)(c.role, filler)
        x = self.fresh(("pos", c))
        if self.first_use(x):
            if isinstance(c, All):
                self.emit(SubClassOf(Some(c.role.inv(), x), c.filler))
            else:
                self.emit(SubClassOf(x, c))
        return x

    def name_negative(self, c: Concept) -> Concept:
        """A name X with c ⊑ X (c itself if already atomic/Top/Bottom)."""
        if _is_name(c, top=True, bottom=True):
            return c
        if isinstance(c, (Or, Some, Self)):
            return self.body_name(c)
        x = self.fresh(("neg", c))
        if self.first_use(x):
            self.gci([c], [x])
        return x

    def name_positive(self, c: Concept) -> Concept:
        """A name X with X ⊑ c (c itself if already atomic/Top/Bottom)."""
        if _is_name(c, top=True, bottom=True):
            return c
        if isinstance(c, (Some, All, Self)):
            return self.head_name(c)
        x = self.fresh(("pos", c))
        if self.first_use(x):
            self.gci([x], [c])
        return x

    def axiom(self, ax: SubClassOf) -> None:
        sub, sup = ax.sub, ax.sup
        _check_concept(sub)
        _check_concept(sup)
        if is_normal(ax):
            self.emit(ax)
            return
        # whole-axiom shortcuts that avoid a fresh name
        if _is_name(sub, top=True):
            if isinstance(sup, All):
                f = self.name_positive(sup.filler)
                if not isinstance(f, Top):
                    a = sub if isinstance(sub, AtomicConcept) else TOP
                    self.emit(SubClassOf(Some(sup.role.inv(), a), f))
                return
            if isinstance(sup, Some):
                f = self.name_positive(sup.filler)
                self.emit(SubClassOf(sub, Some(sup.role, f)) if not isinstance(f, Bottom)
                          else SubClassOf(sub, BOTTOM))
                return
        if isinstance(sub, Some) and _is_name(sup, bottom=True):
            f = self.name_negative(sub.filler)
            if not isinstance(f, Bottom):
                self.emit(SubClassOf(Some(sub.role, f), sup))
            return
        self.gci([sub], [sup])


def _mk_and(names: list) -> Concept:
    if not names:
        return TOP
    if len(names) == 1:
        return names[0]
    return And(tuple(names))


def _mk_or(names: list) -> Concept:
    if not names:
        return BOTTOM
    if len(names) == 1:
        return names[0]
    return Or(tuple(names))


def normalize(t: TBox) -> TBox:
    """Structural transformation into normal form.

    Axioms already in normal form are kept verbatim; fresh concepts are named
    ``X1, X2, ...`` in axiom order, skipping names used by ``t``.
    """
    norm = _Normalizer(t.concept_names)
    others = []
    for ax in t.axioms:
        if isinstance(ax, SubClassOf):
            norm.axiom(ax)
        elif isinstance(ax, (SubRole, Transitive)):
            others.append(ax)
        else:
            raise NormalizationError(f"unknown axiom {ax!r}")
    return TBox(tuple(_order_like(t.axioms, norm.out + others)))


def _order_like(original: tuple, result: list) -> list:
    """Stable order: axioms that were in the input first, in input order."""
    pos = {a: i for i, a in enumerate(original)}
    inputs = sorted((a for a in result if a in pos), key=pos.__getitem__)
    fresh = [a for a in result if a not in pos]
    return inputs + fresh


def is_normalized(t: TBox) -> bool:
    return all(is_normal(a) for a in t.axioms)
