"""Random normalised ALCHI TBoxes with self restrictions, for property tests."""

from __future__ import annotations

import random

from dlrewrite.ontology import (
    BOTTOM, TOP, And, AtomicConcept, Or, Role, Self, Some, SubClassOf, SubRole, TBox,
)


def random_alchi(rng: random.Random, concepts: int = 4, roles: str = "rs") -> TBox:
    names = [AtomicConcept(f"A{i}") for i in range(concepts)]

    def role() -> Role:
        return Role(rng.choice(roles), rng.random() < 0.3)

    def name(top: bool = False):
        return TOP if top and rng.random() < 0.15 else rng.choice(names)

    axioms = []
    for _ in range(rng.randint(2, 6)):
        k = rng.random()
        if k < 0.25:
            axioms.append(SubClassOf(name(), Some(role(), name(top=True))))
        elif k < 0.5:
            axioms.append(SubClassOf(Some(role(), name(top=True)),
                                     name() if rng.random() < 0.85 else BOTTOM))
        elif k < 0.75:
            body = rng.sample(names, 2)
            head = rng.sample(names, rng.randint(0, 2))
            sub = And(tuple(body)) if rng.random() < 0.5 else body[0]
            sup = Or(tuple(head)) if len(head) == 2 else (head[0] if head else BOTTOM)
            axioms.append(SubClassOf(sub, sup))
        elif k < 0.85:
            axioms.append(SubRole(role(), role()))
        elif k < 0.93:
            axioms.append(SubClassOf(name(), Self(role())))
        else:
            axioms.append(SubClassOf(Self(role()), name()))
    return TBox(tuple(axioms))
