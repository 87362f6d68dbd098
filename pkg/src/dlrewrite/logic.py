"""Clausal logic substrate: terms, atoms, literals, clauses and the inferences
on them (unification, binary resolution, positive factoring, subsumption and
condensation).

Terms have function nesting depth at most one.  A :class:`Clause` is a set of
literals kept in a canonical form, so two clauses compare equal exactly when
they are variants of each other.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple, Optional, Union

__all__ = [
    "Var", "Const", "Func", "Term", "Atom", "Literal", "Clause",
    "Substitution", "unify", "match_atom", "apply_term", "apply_atom",
    "apply_literal", "rename_apart", "resolve", "factor", "resolvents",
    "factors", "subsumes", "theta_subsumes", "condense", "is_redundant",
    "is_variant", "Inference", "SubsumptionIndex",
]


@dataclass(frozen=True, slots=True, eq=False)
class Var:
    name: str

    def __eq__(self, other) -> bool:
        return other.__class__ is Var and self.name == other.name

    def __hash__(self) -> int:
        return hash(self.name)

    def __str__(self) -> str:
        return self.name[:1].upper() + self.name[1:]


@dataclass(frozen=True, slots=True, eq=False)
class Const:
    name: str

    def __eq__(self, other) -> bool:
        return other.__class__ is Const and self.name == other.name

    def __hash__(self) -> int:
        return hash(self.name)

    def __str__(self) -> str:
        if self.name[:1].isupper() or not self.name.replace("_", "a").isalnum():
            return "'" + self.name + "'"
        return self.name


@dataclass(frozen=True, slots=True)
class Func:
    name: str
    arg: Union[Var, Const]

    def __post_init__(self):
        if not isinstance(self.arg, (Var, Const)):
            raise ValueError(f"function nesting deeper than one: {self.name}({self.arg})")

    def __str__(self) -> str:
        return f"{self.name}({self.arg})"


Term = Union[Var, Const, Func]
Substitution = dict


def _term_key(t: Term) -> tuple:
    if isinstance(t, Var):
        return (0, t.name)
    if isinstance(t, Const):
        return (1, t.name)
    return (2, t.name, _term_key(t.arg))


@dataclass(frozen=True, slots=True, eq=False)
class Atom:
    pred: str
    args: tuple
    _hash: int = field(init=False, repr=False)

    def __post_init__(self):
        if not isinstance(self.args, tuple):
            object.__setattr__(self, "args", tuple(self.args))
        object.__setattr__(self, "_hash", hash((self.pred, self.args)))

    # atoms are hashed constantly during search, so the hash is computed once
    def __eq__(self, other) -> bool:
        return self is other or (other.__class__ is Atom and self._hash == other._hash
                                 and self.pred == other.pred and self.args == other.args)

    def __hash__(self) -> int:
        return self._hash

    @property
    def arity(self) -> int:
        return len(self.args)

    def variables(self) -> set:
        out = set()
        for t in self.args:
            if isinstance(t, Var):
                out.add(t)
            elif isinstance(t, Func) and isinstance(t.arg, Var):
                out.add(t.arg)
        return out

    def is_ground(self) -> bool:
        return not self.variables()

    def key(self) -> tuple:
        return (self.pred, tuple(_term_key(t) for t in self.args))

    def __str__(self) -> str:
        return f"{self.pred}({','.join(str(t) for t in self.args)})"


@dataclass(frozen=True, slots=True, eq=False)
class Literal:
    atom: Atom
    positive: bool = True
    _hash: int = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((self.atom._hash, self.positive)))

    def __eq__(self, other) -> bool:
        return self is other or (other.__class__ is Literal and self._hash == other._hash
                                 and self.positive == other.positive and self.atom == other.atom)

    def __hash__(self) -> int:
        return self._hash

    def __neg__(self) -> "Literal":
        return Literal(self.atom, not self.positive)

    @property
    def pred(self) -> str:
        return self.atom.pred

    def key(self) -> tuple:
        return (self.positive, self.atom.key())

    def __str__(self) -> str:
        return str(self.atom) if self.positive else "~" + str(self.atom)


# ---------------------------------------------------------------------------
# substitutions

def apply_term(t: Term, s: Substitution) -> Term:
    if isinstance(t, Var):
        return s.get(t, t)
    if isinstance(t, Func):
        a = s.get(t.arg, t.arg) if isinstance(t.arg, Var) else t.arg
        if isinstance(a, Func):
            raise ValueError(f"substitution produced nested term {t.name}({a})")
        return t if a is t.arg else Func(t.name, a)
    return t


def apply_atom(a: Atom, s: Substitution) -> Atom:
    return Atom(a.pred, tuple(s.get(t, t) if t.__class__ is Var else apply_term(t, s) for t in a.args))


def apply_literal(lit: Literal, s: Substitution) -> Literal:
    return Literal(apply_atom(lit.atom, s), lit.positive)


def _walk(t: Term, s: Substitution) -> Term:
    while isinstance(t, Var) and t in s:
        t = s[t]
    return t


def _occurs(v: Var, t: Term, s: Substitution) -> bool:
    t = _walk(t, s)
    if t == v:
        return True
    if isinstance(t, Func):
        return _occurs(v, t.arg, s)
    return False


def _unify_terms(a: Term, b: Term, s: Substitution) -> bool:
    a, b = _walk(a, s), _walk(b, s)
    if a == b:
        return True
    if isinstance(b, Var):
        if _occurs(b, a, s):
            return False
        s[b] = a
        return True
    if isinstance(a, Var):
        if _occurs(a, b, s):
            return False
        s[a] = b
        return True
    if isinstance(a, Func) and isinstance(b, Func) and a.name == b.name:
        return _unify_terms(a.arg, b.arg, s)
    return False


def _resolve_fully(t: Term, s: Substitution) -> Term:
    t = _walk(t, s)
    if isinstance(t, Func):
        return Func(t.name, _resolve_fully(t.arg, s))
    return t


def unify(a: Atom, b: Atom) -> Optional[Substitution]:
    """Most general unifier of two atoms (occurs-check on), or ``None``.

    The returned substitution is idempotent: no variable in its domain occurs
    in its range.
    """
    if a.pred != b.pred or len(a.args) != len(b.args):
        return None
    s: Substitution = {}
    for x, y in zip(a.args, b.args):
        if not _unify_terms(x, y, s):
            return None
    try:
        return {v: _resolve_fully(t, s) for v, t in s.items()}
    except ValueError:
        # binding chain would nest functions beyond depth one
        return None


def _match_term(p: Term, t: Term, s: Substitution) -> bool:
    if isinstance(p, Var):
        bound = s.get(p)
        if bound is None:
            s[p] = t
            return True
        return bound == t
    if isinstance(p, Func):
        return isinstance(t, Func) and p.name == t.name and _match_term(p.arg, t.arg, s)
    return p == t


def match_atom(p: Atom, t: Atom, s: Optional[Substitution] = None) -> Optional[Substitution]:
    """One-way matching: extend ``s`` so that ``p`` instantiated equals ``t``."""
    if p.pred != t.pred or len(p.args) != len(t.args):
        return None
    s = dict(s) if s else {}
    for x, y in zip(p.args, t.args):
        if not _match_term(x, y, s):
            return None
    return s


# ---------------------------------------------------------------------------
# canonical form

def _lit_vars(lit: Literal) -> list:
    out = []
    for t in lit.atom.args:
        v = t.arg if isinstance(t, Func) else t
        if isinstance(v, Var):
            out.append(v)
    return out


def _template(lit: Literal) -> tuple:
    """``(base, slots)``: the literal with variables replaced by slot numbers."""
    slots: list = []

    def shape(t):
        if isinstance(t, Var):
            slots.append(t)
            return ("v", len(slots) - 1)
        if isinstance(t, Const):
            return ("c", t.name)
        return ("f", t.name, shape(t.arg))

    base = (lit.positive, lit.atom.pred, tuple(shape(t) for t in lit.atom.args))
    return base, tuple(slots)


def _refine(occ: dict, color: dict) -> dict:
    """Colour refinement over variables until the partition is stable.

    ``occ`` maps each variable to ``(template rank, slot variables, slot positions)``
    triples, one per literal it occurs in.
    """
    ncolors = len(set(color.values()))
    while True:
        sig = {v: (color[v], tuple(sorted((rank, tuple(color[u] for u in slot_vars), slots)
                                          for rank, slot_vars, slots in uses)))
               for v, uses in occ.items()}
        ranks = {c: i for i, c in enumerate(sorted(set(sig.values())))}
        new = {v: ranks[sig[v]] for v in sig}
        if len(ranks) == ncolors:
            return new
        color, ncolors = new, len(ranks)


_LEAF_CAP = 256
_X0, _Y0 = Var("x0"), Var("y0")


def _canonical_literals(lits: Iterable[Literal]) -> tuple:
    lits = list(dict.fromkeys(lits))
    variables = []
    for lit in lits:
        for v in _lit_vars(lit):
            if v not in variables:
                variables.append(v)
    if not variables:
        return tuple(sorted(lits, key=Literal.key))
    if len(variables) == 1:
        # every renaming is the same up to the name of the one variable
        if variables[0] != _X0:
            lits = [apply_literal(l, {variables[0]: _X0}) for l in lits]
        return tuple(sorted(lits, key=Literal.key))
    templates = [_template(l) for l in lits]
    rank = {base: i for i, base in enumerate(sorted({base for base, _ in templates}))}
    occ: dict = {v: [] for v in variables}
    for base, slots in templates:
        for v in dict.fromkeys(slots):
            occ[v].append((rank[base], slots, tuple(k for k, u in enumerate(slots) if u == v)))
    start = _refine(occ, {v: 0 for v in variables})

    best = None
    leaves = 0

    def leaf_form(color):
        ren = {v: Var(f"_{color[v]:04d}") for v in variables}
        return tuple(sorted((apply_literal(l, ren) for l in lits), key=Literal.key))

    def search(color):
        nonlocal best, leaves
        if leaves >= _LEAF_CAP:
            return
        cells = {}
        for v, c in color.items():
            cells.setdefault(c, []).append(v)
        target = None
        for c in sorted(cells):
            if len(cells[c]) > 1:
                target = c
                break
        if target is None:
            leaves += 1
            form = leaf_form(color)
            key = tuple(l.key() for l in form)
            if best is None or key < best[0]:
                best = (key, form)
            return
        for v in sorted(cells[target], key=lambda u: u.name):
            # individualise v: it precedes the rest of its cell
            c2 = {u: 2 * c + 1 for u, c in color.items()}
            c2[v] = 2 * target
            ranks = {c: i for i, c in enumerate(sorted(set(c2.values())))}
            search(_refine(occ, {u: ranks[c] for u, c in c2.items()}))

    search(start)
    form = best[1]
    # renumber in first-occurrence order of the chosen literal order
    ren: dict = {}
    for lit in form:
        for v in _lit_vars(lit):
            if v not in ren:
                ren[v] = Var(f"x{len(ren)}")
    return tuple(apply_literal(l, ren) for l in form)


class Clause:
    """A clause in canonical form; equality is equality up to variable renaming."""

    __slots__ = ("literals", "_hash", "_encoded", "_index", "_keys", "_order", "_functions", "_groups",
                 "_vars", "_monadic", "_horn")

    def __init__(self, literals: Iterable[Literal] = (), *, canonical: bool = False):
        self.literals = tuple(literals) if canonical else _canonical_literals(literals)
        self._hash = hash(self.literals)
        self._encoded = self._index = self._keys = self._order = self._groups = None
        self._vars = self._monadic = self._horn = None
        self._functions = any(isinstance(t, Func) for l in self.literals for t in l.atom.args)

    @property
    def encoded(self) -> tuple:
        if self._encoded is None:
            self._encoded = _encode(self.literals)
        return self._encoded

    @property
    def join_order(self) -> tuple:
        if self._order is None:
            self._order = _join_order(self.encoded[0])
        return self._order

    @property
    def index(self) -> tuple:
        if self._index is None:
            self._index = _index(self.encoded[0])
        return self._index

    def literals_of(self, positive: bool, pred: str) -> tuple:
        """Literals with the given polarity and predicate."""
        if self._groups is None:
            groups: dict = {}
            for l in self.literals:
                groups.setdefault((l.positive, l.atom.pred), []).append(l)
            self._groups = {k: tuple(v) for k, v in groups.items()}
        return self._groups.get((positive, pred), ())

    @property
    def keys(self) -> frozenset:
        """The (polarity, predicate) pairs occurring in the clause."""
        if self._keys is None:
            self._keys = frozenset((l.positive, l.atom.pred) for l in self.literals)
        return self._keys

    @classmethod
    def of(cls, *literals: Literal) -> "Clause":
        return cls(literals)

    def __iter__(self) -> Iterator[Literal]:
        return iter(self.literals)

    def __len__(self) -> int:
        return len(self.literals)

    def __contains__(self, lit) -> bool:
        return lit in self.literals

    def __eq__(self, other) -> bool:
        return (isinstance(other, Clause) and self._hash == other._hash
                and self.literals == other.literals)

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "Clause") -> bool:
        return self.sort_key() < other.sort_key()

    def sort_key(self) -> tuple:
        return (len(self.literals), tuple(l.key() for l in self.literals))

    @property
    def positive(self) -> tuple:
        return tuple(l for l in self.literals if l.positive)

    @property
    def negative(self) -> tuple:
        return tuple(l for l in self.literals if not l.positive)

    @property
    def is_horn(self) -> bool:
        if self._horn is None:
            self._horn = sum(1 for l in self.literals if l.positive) <= 1
        return self._horn

    def clashes_with(self, other: "Clause") -> bool:
        """Whether some positive literal here shares its predicate with a negative one there."""
        return any((False, p) in other.keys for positive, p in self.keys if positive)

    @property
    def is_empty(self) -> bool:
        return not self.literals

    @property
    def is_tautology(self) -> bool:
        pos = {l.atom for l in self.literals if l.positive}
        return any(l.atom in pos for l in self.literals if not l.positive)

    def variables(self) -> set:
        if self._vars is None:
            out = set()
            for l in self.literals:
                out |= l.atom.variables()
            self._vars = frozenset(out)
        return set(self._vars)

    @property
    def single_variable_literals(self) -> Optional[frozenset]:
        """The literal set when every argument is one and the same variable.

        Such clauses allow shortcuts: two of them unify or subsume only literally.
        A constant anywhere would be a second possible image of the variable.
        """
        if self._monadic is None:
            one = (len(self.variables()) == 1
                   and all(t.__class__ is Var for l in self.literals for t in l.atom.args))
            self._monadic = frozenset(self.literals) if one else False
        return self._monadic or None

    def predicates(self) -> set:
        return {l.atom.pred for l in self.literals}

    def has_functions(self) -> bool:
        return self._functions

    def __str__(self) -> str:
        if not self.literals:
            return "[]"
        return " | ".join(str(l) for l in self.literals)

    def __repr__(self) -> str:
        return f"Clause({self})"


# ---------------------------------------------------------------------------
# inferences

def rename_apart(c: Clause, avoid: set, prefix: str = "y") -> tuple:
    """Return (literals, renaming) of ``c`` with variables disjoint from ``avoid``."""
    ren = _apart(c, avoid, prefix)
    return [apply_literal(l, ren) for l in c.literals], ren




class Inference(NamedTuple):
    """A derived clause with the literals it was inferred on and the unifier."""

    clause: "Clause"
    left: Literal
    right: Literal
    unifier: dict


def _apart(c: Clause, avoid: set, prefix: str = "y") -> dict:
    ren = {}
    i = 0
    for v in sorted(c.variables(), key=lambda v: v.name):
        while Var(f"{prefix}{i}") in avoid:
            i += 1
        ren[v] = Var(f"{prefix}{i}")
        i += 1
    return ren


def _resolve(c1: Clause, pos: Literal, c2: Clause, neg: Literal) -> Optional[tuple]:
    m1, m2 = c1.single_variable_literals, c2.single_variable_literals
    if m1 is not None and m2 is not None:
        # both canonical over x0: the atoms unify iff they coincide
        if pos.atom != neg.atom:
            return None
        lits = (m1 - {pos}) | (m2 - {neg})
        return Clause(sorted(lits, key=Literal.key), canonical=True), {_Y0: _X0}
    ren = _apart(c2, c1.variables())
    s = unify(pos.atom, apply_atom(neg.atom, ren))
    if s is None:
        return None
    # renaming then unifier in one pass over the second premise
    through = {v: s.get(w, w) for v, w in ren.items()}
    try:
        rest = [apply_literal(l, s) for l in c1.literals if l != pos]
        rest += [apply_literal(l, through) for l in c2.literals if l != neg]
    except ValueError:
        return None
    return Clause(rest), s


def resolve(c1: Clause, pos: Literal, c2: Clause, neg: Literal) -> Optional[Clause]:
    """Binary resolvent of ``c1`` on positive ``pos`` with ``c2`` on negative ``neg``."""
    if not pos.positive or neg.positive or pos not in c1 or neg not in c2:
        raise ValueError("resolve expects a positive literal of c1 and a negative literal of c2")
    out = _resolve(c1, pos, c2, neg)
    return None if out is None else out[0]


def _factor(c: Clause, a: Literal, b: Literal) -> Optional[tuple]:
    s = unify(a.atom, b.atom)
    if s is None:
        return None
    try:
        return Clause(apply_literal(l, s) for l in c.literals if l != b), s
    except ValueError:
        return None


def factor(c: Clause, a: Literal, b: Literal) -> Optional[Clause]:
    """Positive factor of ``c`` merging ``a`` and ``b``."""
    if not (a.positive and b.positive) or a not in c or b not in c or a == b:
        raise ValueError("factor expects two distinct positive literals of the clause")
    out = _factor(c, a, b)
    return None if out is None else out[0]


def resolvents(c1: Clause, c2: Clause, eligible1=None, eligible2=None) -> Iterator[Inference]:
    """All binary resolvents with a positive literal from ``c1`` and a negative one from ``c2``.

    Optional ``eligible`` sets restrict which literals may take part.
    """
    for p in c1.literals:
        if not p.positive or (eligible1 is not None and p not in eligible1):
            continue
        for n in c2.literals_of(False, p.atom.pred):
            if eligible2 is not None and n not in eligible2:
                continue
            out = _resolve(c1, p, c2, n)
            if out is not None:
                yield Inference(out[0], p, n, out[1])


def factors(c: Clause, eligible=None) -> Iterator[Inference]:
    pos = [l for l in c.positive if eligible is None or l in eligible]
    for i in range(len(pos)):
        for j in range(i + 1, len(pos)):
            if pos[i].atom.pred != pos[j].atom.pred:
                continue
            out = _factor(c, pos[i], pos[j])
            if out is not None:
                yield Inference(out[0], pos[i], pos[j], out[1])


# ---------------------------------------------------------------------------
# subsumption

def _encode(lits: Iterable[Literal]) -> tuple:
    """Literals as ``((polarity, pred), args)`` with variables numbered from 0."""
    vidx: dict = {}

    def term(t):
        if isinstance(t, Var):
            return vidx.setdefault(t, len(vidx))
        if isinstance(t, Const):
            return ("c", t.name)
        return ("f", t.name, term(t.arg))

    enc = tuple(((l.positive, l.atom.pred), tuple(term(t) for t in l.atom.args)) for l in lits)
    return enc, len(vidx)


def _index(enc: tuple) -> tuple:
    """``(rows by key, rows by (key, position, value), row sets by key)``."""
    by_key: dict = {}
    by_pos: dict = {}
    for key, args in enc:
        by_key.setdefault(key, []).append(args)
        for i, a in enumerate(args):
            by_pos.setdefault((key, i, a), []).append(args)
    return by_key, by_pos, {key: set(rows) for key, rows in by_key.items()}


def _term_vars(p, out: set) -> None:
    if type(p) is int:
        out.add(p)
    elif p[0] == "f":
        _term_vars(p[2], out)


def _join_order(enc: tuple) -> tuple:
    """Pattern literals ordered so each one shares as many bound variables as possible
    with its predecessors; unary literals (the most selective) go first."""
    remaining = list(enc)
    lit_vars = []
    for _, args in remaining:
        vs: set = set()
        for a in args:
            _term_vars(a, vs)
        lit_vars.append(vs)
    pending = list(range(len(remaining)))
    bound: set = set()
    order = []
    while pending:
        def score(i):
            vs = lit_vars[i]
            return (len(vs & bound) - len(vs - bound), -len(remaining[i][1]), -i)
        best = max(pending, key=score)
        pending.remove(best)
        order.append(remaining[best])
        bound |= lit_vars[best]
    return tuple(order)


def _maps_into_flat(pattern: tuple, nvars: int, index: tuple) -> bool:
    """:func:`_maps_into` specialised to function-free patterns.

    Unary and binary literals (almost all of them in practice) take dedicated
    paths: a fully bound literal is a membership test, a half bound binary one
    walks the candidates indexed under its bound position.
    """
    by_key, by_pos, members = index
    binding = [None] * nvars
    n = len(pattern)

    def rec(i: int) -> bool:
        if i == n:
            return True
        key, args = pattern[i]
        if len(args) == 1:
            a = args[0]
            if type(a) is int:
                v = binding[a]
                if v is not None:
                    return (v,) in members[key] and rec(i + 1)
                for (t,) in by_key[key]:
                    binding[a] = t
                    if rec(i + 1):
                        return True
                binding[a] = None
                return False
            return (a,) in members[key] and rec(i + 1)
        if len(args) == 2:
            a, b = args
            va = binding[a] if type(a) is int else a
            vb = binding[b] if type(b) is int else b
            if va is not None and vb is not None:
                return (va, vb) in members[key] and rec(i + 1)
            if va is not None:
                for t in by_pos.get((key, 0, va), ()):
                    binding[b] = t[1]
                    if rec(i + 1):
                        return True
                binding[b] = None
                return False
            if vb is not None:
                for t in by_pos.get((key, 1, vb), ()):
                    binding[a] = t[0]
                    if rec(i + 1):
                        return True
                binding[a] = None
                return False
            for t in by_key[key]:
                if a == b:
                    if t[0] != t[1]:
                        continue
                    binding[a] = t[0]
                else:
                    binding[a], binding[b] = t
                if rec(i + 1):
                    return True
            binding[a] = binding[b] = None
            return False
        cands = None
        for pos, a in enumerate(args):
            v = binding[a] if type(a) is int else a
            if v is not None:
                found = by_pos.get((key, pos, v))
                if found is None:
                    return False
                if cands is None or len(found) < len(cands):
                    cands = found
        if cands is None:
            cands = by_key[key]
        for targs in cands:
            trail = []
            ok = True
            for p, t in zip(args, targs):
                if type(p) is int:
                    b = binding[p]
                    if b is None:
                        binding[p] = t
                        trail.append(p)
                    elif b != t:
                        ok = False
                        break
                elif p != t:
                    ok = False
                    break
            if ok and rec(i + 1):
                return True
            for v in trail:
                binding[v] = None
        return False

    return rec(0)


def _maps_into(pattern: tuple, nvars: int, index: tuple) -> bool:
    """Backtracking search for a substitution sending every pattern literal into the index.

    Literals are matched in the given order; candidates for each are looked up
    through its already-bound argument positions.
    """
    by_key, by_pos, _ = index
    if any(key not in by_key for key, _ in pattern):
        return False
    if all(type(a) is int or a[0] == "c" for _, args in pattern for a in args):
        return _maps_into_flat(pattern, nvars, index)
    binding = [None] * nvars
    n = len(pattern)

    def value(p):
        if type(p) is int:
            return binding[p]
        if p[0] == "c":
            return p
        inner = value(p[2])
        return None if inner is None else ("f", p[1], inner)

    def bind(p, t, trail) -> bool:
        if type(p) is int:
            b = binding[p]
            if b is None:
                binding[p] = t
                trail.append(p)
                return True
            return b == t
        if p[0] == "c":
            return p == t
        return type(t) is tuple and t[0] == "f" and t[1] == p[1] and bind(p[2], t[2], trail)

    def rec(i: int) -> bool:
        if i == n:
            return True
        key, args = pattern[i]
        cands = None
        for pos, a in enumerate(args):
            v = value(a)
            if v is not None:
                found = by_pos.get((key, pos, v))
                if found is None:
                    return False
                if cands is None or len(found) < len(cands):
                    cands = found
        if cands is None:
            cands = by_key[key]
        for targs in cands:
            trail: list = []
            if all(bind(p, t, trail) for p, t in zip(args, targs)) and rec(i + 1):
                return True
            for v in trail:
                binding[v] = None
        return False

    return rec(0)


def subsumes(c: Clause, d: Clause) -> bool:
    """True iff some substitution maps every literal of ``c`` into ``d``."""
    if not c.keys <= d.keys:
        return False
    cs, ds = c.single_variable_literals, d.single_variable_literals
    if cs is not None and ds is not None:
        return cs <= ds     # both canonical over the same variable
    if c.has_functions():
        return _maps_into(c.join_order, c.encoded[1], d.index)
    return _maps_into_flat(c.join_order, c.encoded[1], d.index)


def theta_subsumes(c: Clause, d: Clause) -> bool:
    """Subsumption restricted to ``len(c) <= len(d)``."""
    if len(c) > len(d):
        return False
    return subsumes(c, d)


class SubsumptionIndex:
    """Clauses bucketed by (polarity, predicate) keys for subsumption candidate retrieval.

    A subsumer's keys are a subset of the subsumed clause's keys, so each
    clause is filed under one representative key for forward retrieval and
    under every key for backward retrieval.
    """

    def __init__(self, clauses: Iterable[Clause] = ()):
        self._order: dict = {}          # clause -> insertion number
        self._rep: dict = {}            # clause -> the key it is filed under
        self._by_rep: dict = {}
        self._by_key: dict = {}
        self._next = 0
        for c in clauses:
            self.add(c)

    def __contains__(self, c: Clause) -> bool:
        return c in self._order

    def __len__(self) -> int:
        return len(self._order)

    def __iter__(self) -> Iterator[Clause]:
        return iter(self._order)

    def add(self, c: Clause) -> None:
        if c in self._order:
            return
        self._order[c] = self._next
        self._next += 1
        # file under the currently least crowded key to keep forward buckets small
        rep = min(c.keys, key=lambda k: (len(self._by_rep.get(k, ())), k)) if c.keys else None
        self._rep[c] = rep
        self._by_rep.setdefault(rep, {})[c] = (len(c.literals), c.keys)
        for k in c.keys:
            self._by_key.setdefault(k, {})[c] = None

    def remove(self, c: Clause) -> None:
        if self._order.pop(c, None) is None:
            return
        del self._by_rep[self._rep.pop(c)][c]
        for k in c.keys:
            del self._by_key[k][c]

    def with_key(self, key: tuple) -> list:
        """Stored clauses with a literal of the given (polarity, predicate), oldest first."""
        return list(self._by_key.get(key, ()))

    def subsumer_candidates(self, c: Clause) -> list:
        """Stored clauses that might θ-subsume ``c``, shortest and oldest first."""
        n, keys = len(c.literals), c.keys
        out = list(self._by_rep.get(None, ()))
        for k in keys:
            out += [d for d, (m, dkeys) in self._by_rep.get(k, {}).items() if m <= n and dkeys <= keys]
        out.sort(key=lambda d: (len(d), self._order[d]))
        return out

    def subsumes_any(self, c: Clause) -> bool:
        return any(subsumes(d, c) for d in self.subsumer_candidates(c))

    def subsumed_by(self, c: Clause) -> list:
        """Stored clauses θ-subsumed by ``c``, oldest first."""
        if c.keys:
            pool = min((self._by_key.get(k, {}) for k in c.keys), key=len)
        else:
            pool = self._order
        n = len(c.literals)
        out = [d for d in pool if len(d.literals) >= n and subsumes(c, d)]
        out.sort(key=self._order.__getitem__)
        return out


def is_variant(c: Clause, d: Clause) -> bool:
    return c == d


def condense(c: Clause) -> Clause:
    """Smallest subclause of ``c`` that ``c`` subsumes (unique up to renaming)."""
    lits = list(c.literals)
    changed = True
    while changed:
        changed = False
        enc, n = _encode(lits)
        order = _join_order(enc)
        for i in range(len(lits)):
            rest = enc[:i] + enc[i + 1:]
            if _maps_into(order, n, _index(rest)):
                lits = lits[:i] + lits[i + 1:]
                changed = True
                break
    if len(lits) == len(c):
        return c
    return Clause(lits)


def is_redundant(c: Clause, store: Iterable[Clause]) -> bool:
    """Tautology, or θ-subsumed by a member of ``store``."""
    if c.is_tautology:
        return True
    return any(theta_subsumes(d, c) for d in store)
