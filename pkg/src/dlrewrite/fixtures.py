"""Packaged test data: worked TBoxes, clause sets and graph-shaped ABoxes.

Named data files live in ``dlrewrite/data``; graph ABoxes and random
TBoxes are generated here so that every acceptance check runs from the
installed package alone.
"""

from __future__ import annotations

import itertools
import random
from collections import deque
from importlib import resources
from typing import Iterable

from .datalog import ABox, DatalogProgram
from .logic import Atom, Const
from .ontology import (
    TOP, And, AtomicConcept, Bottom, Or, Role, Some, SubClassOf, SubRole, TBox, Transitive,
)
from .syntax import parse_abox, parse_clauses, parse_program, parse_tbox

__all__ = [
    "read_text", "tbox", "clauses", "program", "abox", "NAMES",
    "coloring_abox", "triangle_abox", "k4_abox", "edge_abox", "parity_reachable",
    "random_digraph", "random_bool_tbox",
]

NAMES = (
    "t_ex", "t_ex_dd", "t_ex_horn", "t_ex_intermediate", "self_loop", "parity",
    "parity_rewriting", "chain", "condensation", "coloring",
)


def read_text(filename: str) -> str:
    return resources.files("dlrewrite").joinpath("data", filename).read_text(encoding="utf-8")


def tbox(name: str) -> TBox:
    return parse_tbox(read_text(f"{name}.tbox"))


def clauses(name: str) -> list:
    return parse_clauses(read_text(f"{name}.clauses"))


def program(name: str) -> DatalogProgram:
    return parse_program(read_text(f"{name}.dl"))


def abox(text: str) -> ABox:
    return parse_abox(text)


# ---------------------------------------------------------------------------
# graph colouring

GRAPH_NODE = "v"


def coloring_abox(vertices: int, edges: Iterable[tuple]) -> ABox:
    """Encoding of an undirected graph: ``edge`` both ways, ``V`` and ``vertex`` links."""
    names = [f"a{i}" for i in range(1, vertices + 1)]
    facts = set()
    for i, j in edges:
        a, b = Const(names[i]), Const(names[j])
        facts |= {Atom("edge", (a, b)), Atom("edge", (b, a))}
    for n in names:
        facts |= {Atom("V", (Const(n),)), Atom("vertex", (Const(GRAPH_NODE), Const(n)))}
    return ABox(frozenset(facts))


def triangle_abox() -> ABox:
    return coloring_abox(3, itertools.combinations(range(3), 2))


def k4_abox() -> ABox:
    return coloring_abox(4, itertools.combinations(range(4), 2))


# ---------------------------------------------------------------------------
# path parity

def edge_abox(edges: Iterable[tuple]) -> ABox:
    return ABox(frozenset(Atom("E", (Const(u), Const(v))) for u, v in edges))


def parity_reachable(edges: Iterable[tuple]) -> set:
    """Nodes ``v`` with E-walks of positive even and of odd length from ``v`` to one node.

    Brute force over (node, parity) states; walks follow ``E(u, w)`` from ``u`` to ``w``.
    """
    succ: dict = {}
    for u, w in edges:
        succ.setdefault(u, set()).add(w)
    out = set()
    for v in succ:
        seen = set()
        todo = deque((w, 1) for w in succ[v])
        seen.update(todo)
        while todo:
            u, parity = todo.popleft()
            for w in succ.get(u, ()):
                state = (w, 1 - parity)
                if state not in seen:
                    seen.add(state)
                    todo.append(state)
        # parity 0 states are reached by walks of length >= 2, parity 1 by length >= 1
        if any((w, 0) in seen and (w, 1) in seen for w, _ in seen):
            out.add(v)
    return out


def random_digraph(rng: random.Random, max_vertices: int = 6) -> list:
    n = rng.randint(1, max_vertices)
    density = rng.uniform(0.1, 0.5)
    names = [f"v{i}" for i in range(n)]
    edges = [(u, w) for u in names for w in names if rng.random() < density]
    return edges or [(names[0], names[-1])]


# ---------------------------------------------------------------------------
# random Boolean TBoxes

def _join(op, items: list):
    return items[0] if len(items) == 1 else op(tuple(items))


def random_bool_tbox(rng: random.Random, *, max_axioms: int = 12, concepts: int = 6,
                     roles: int = 3) -> TBox:
    """A random normalised TBox using ⊔, ⊓, ⊥, ∃R.⊤, role inclusions and transitivity.

    Existential axioms relate a single atomic concept, as the normal form requires.
    """
    names = [AtomicConcept(f"A{i}") for i in range(rng.randint(2, concepts))]
    role_names = [f"r{i}" for i in range(rng.randint(1, roles))]

    def role() -> Role:
        return Role(rng.choice(role_names), rng.random() < 0.25)

    def split_names(k_body: int, k_head: int):
        """Disjoint body conjunction and head disjunction (either may be empty)."""
        picked = rng.sample(names, min(len(names), k_body + k_head))
        body, head = picked[:k_body], picked[k_body:]
        return (_join(And, body) if body else None), (_join(Or, head) if head else Bottom())

    axioms = []
    for _ in range(rng.randint(3, max_axioms)):
        shape = rng.random()
        if shape < 0.35:
            sub, sup = split_names(rng.randint(1, 2), rng.randint(1, 3))
            axioms.append(SubClassOf(sub, sup))
        elif shape < 0.5:
            sub, _ = split_names(1, 0)
            axioms.append(SubClassOf(sub, Some(role(), TOP)))
        elif shape < 0.65:
            _, sup = split_names(0, 1)
            axioms.append(SubClassOf(Some(role(), TOP), sup))
        elif shape < 0.72:
            sub, _ = split_names(2, 0)
            axioms.append(SubClassOf(sub, Bottom()))
        elif shape < 0.87:
            r, s = role(), role()
            if r.name != s.name:
                axioms.append(SubRole(r, s))
        else:
            axioms.append(Transitive(Role(rng.choice(role_names))))
    return TBox(tuple(axioms))
