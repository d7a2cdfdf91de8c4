"""Concept syntax for ALCQI: AST, parsing, NNF, negation, axiom internalization.

Concepts are immutable and compare structurally.  And/Or nodes keep their
children flattened, deduplicated and sorted under a fixed total order, so a
set of concepts behaves like a set in every cache and comparison downstream.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator


class ConceptSyntaxError(ValueError):
    """Raised on malformed concept text; carries a character offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


@dataclass(frozen=True)
class Role:
    """A role name with an inversion marker.  inverse() is an involution."""

    base: str
    inverted: bool = False

    def inverse(self) -> "Role":
        return Role(self.base, not self.inverted)

    def __str__(self) -> str:
        return f"(inv {self.base})" if self.inverted else self.base


class Concept:
    """Base class for all concept nodes."""

    __slots__ = ()


@dataclass(frozen=True)
class Top(Concept):
    def __str__(self) -> str:
        return "top"


@dataclass(frozen=True)
class Bottom(Concept):
    """The negation of top; the only non-atomic negation kept in NNF."""

    def __str__(self) -> str:
        return "bottom"


@dataclass(frozen=True)
class Atom(Concept):
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class NegAtom(Concept):
    name: str

    def __str__(self) -> str:
        return f"(not {self.name})"


@dataclass(frozen=True)
class Not(Concept):
    """Unrestricted negation; appears only before NNF conversion."""

    sub: Concept

    def __str__(self) -> str:
        return f"(not {self.sub})"


@dataclass(frozen=True)
class And(Concept):
    parts: tuple[Concept, ...]

    def __str__(self) -> str:
        return "(and " + " ".join(str(p) for p in self.parts) + ")"


@dataclass(frozen=True)
class Or(Concept):
    parts: tuple[Concept, ...]

    def __str__(self) -> str:
        return "(or " + " ".join(str(p) for p in self.parts) + ")"


@dataclass(frozen=True)
class AtMost(Concept):
    """Upper cardinality bound on role neighbors satisfying the filler.

    bound -1 is constructible internally (bound adjustment against the tree
    parent) and is trivially unsatisfiable; the parser rejects it.
    """

    bound: int
    role: Role
    filler: Concept

    def __str__(self) -> str:
        return f"(atmost {self.bound} {self.role} {self.filler})"


@dataclass(frozen=True)
class AtLeast(Concept):
    bound: int
    role: Role
    filler: Concept

    def __str__(self) -> str:
        return f"(atleast {self.bound} {self.role} {self.filler})"


TOP = Top()
BOTTOM = Bottom()

MODAL_TYPES = (AtMost, AtLeast)


@lru_cache(maxsize=None)
def concept_key(c: Concept) -> tuple:
    """Total order key.  Atoms and negated atoms interleave by name so that
    A < (not A) < B; quantified constraints order by role, sense, bound,
    then filler."""
    if isinstance(c, Top):
        return (0,)
    if isinstance(c, Bottom):
        return (1,)
    if isinstance(c, Atom):
        return (2, c.name, 0)
    if isinstance(c, NegAtom):
        return (2, c.name, 1)
    if isinstance(c, AtMost):
        return (3, c.role.base, c.role.inverted, concept_key(c.filler), 0, c.bound)
    if isinstance(c, AtLeast):
        return (3, c.role.base, c.role.inverted, concept_key(c.filler), 1, c.bound)
    if isinstance(c, And):
        return (4, tuple(concept_key(p) for p in c.parts))
    if isinstance(c, Or):
        return (5, tuple(concept_key(p) for p in c.parts))
    if isinstance(c, Not):
        return (6, concept_key(c.sub))
    raise TypeError(f"unknown concept node: {c!r}")


def sorted_concepts(concepts: Iterable[Concept]) -> list[Concept]:
    return sorted(concepts, key=concept_key)


def _gather(parts: Iterable[Concept], cls: type) -> list[Concept]:
    out: list[Concept] = []
    for p in parts:
        if isinstance(p, cls):
            out.extend(p.parts)  # type: ignore[attr-defined]
        else:
            out.append(p)
    # dedupe, then canonical order
    return sorted_concepts(set(out))


def conj(parts: Iterable[Concept]) -> Concept:
    """Conjunction with flattening, deduplication and canonical ordering.
    Empty conjunction is top; a singleton collapses to its element."""
    flat = _gather(parts, And)
    if not flat:
        return TOP
    if len(flat) == 1:
        return flat[0]
    return And(tuple(flat))


def disj(parts: Iterable[Concept]) -> Concept:
    """Disjunction, same normalization as conj.  Empty disjunction is bottom."""
    flat = _gather(parts, Or)
    if not flat:
        return BOTTOM
    if len(flat) == 1:
        return flat[0]
    return Or(tuple(flat))


def is_literal(c: Concept) -> bool:
    """True for the shapes a propositional branch may contain."""
    return isinstance(c, (Top, Bottom, Atom, NegAtom, AtMost, AtLeast))


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(r"\(|\)|[^\s()]+")
_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
_KEYWORDS = {"top", "bottom", "not", "and", "or", "atleast", "atmost", "inv"}


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = [(m.group(0), m.start()) for m in _TOKEN_RE.finditer(text)]
    return tokens


class _TokenStream:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> tuple[str, int] | None:
        if self.pos < len(self.tokens):
            return self.tokens[self.pos]
        return None

    def next(self, expect: str | None = None) -> tuple[str, int]:
        tok = self.peek()
        if tok is None:
            raise ConceptSyntaxError("unexpected end of input", len(self.text))
        if expect is not None and tok[0] != expect:
            raise ConceptSyntaxError(f"expected '{expect}', found '{tok[0]}'", tok[1])
        self.pos += 1
        return tok

    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)


def _parse_role(ts: _TokenStream) -> Role:
    tok, at = ts.next()
    if tok == "(":
        ts2, at2 = ts.next()
        if ts2 != "inv":
            raise ConceptSyntaxError(f"expected 'inv', found '{ts2}'", at2)
        nxt = ts.peek()
        if nxt is not None and nxt[0] == "(":
            inner = _parse_role_group(ts)
        else:
            name, nat = ts.next()
            if not _NAME_RE.match(name):
                raise ConceptSyntaxError(f"invalid role name '{name}'", nat)
            inner = Role(name)
        ts.next(")")
        return inner.inverse()
    if not _NAME_RE.match(tok):
        raise ConceptSyntaxError(f"invalid role name '{tok}'", at)
    return Role(tok)


def _parse_role_group(ts: _TokenStream) -> Role:
    # nested (inv (inv R)) normalizes through Role.inverse
    ts.next("(")
    tok, at = ts.next()
    if tok != "inv":
        raise ConceptSyntaxError(f"expected 'inv', found '{tok}'", at)
    nxt = ts.peek()
    if nxt is not None and nxt[0] == "(":
        inner = _parse_role_group(ts)
    else:
        name, nat = ts.next()
        if not _NAME_RE.match(name):
            raise ConceptSyntaxError(f"invalid role name '{name}'", nat)
        inner = Role(name)
    ts.next(")")
    return inner.inverse()


def _parse_bound(ts: _TokenStream) -> int:
    tok, at = ts.next()
    if tok.lstrip("-").isdigit():
        value = int(tok)
        if value < 0:
            raise ConceptSyntaxError("number restriction bound must be non-negative", at)
        return value
    raise ConceptSyntaxError(f"expected a non-negative integer, found '{tok}'", at)


def _parse_expr(ts: _TokenStream) -> Concept:
    tok, at = ts.next()
    if tok == ")":
        raise ConceptSyntaxError("unexpected ')'", at)
    if tok != "(":
        if tok == "top":
            return TOP
        if tok == "bottom":
            return BOTTOM
        if tok in _KEYWORDS:
            raise ConceptSyntaxError(f"keyword '{tok}' needs parentheses", at)
        if not _NAME_RE.match(tok):
            raise ConceptSyntaxError(f"invalid concept name '{tok}'", at)
        return Atom(tok)
    head, hat = ts.next()
    if head == "not":
        sub = _parse_expr(ts)
        ts.next(")")
        if isinstance(sub, Atom):
            return NegAtom(sub.name)
        return Not(sub)
    if head in ("and", "or"):
        parts = []
        while True:
            nxt = ts.peek()
            if nxt is None:
                raise ConceptSyntaxError("unexpected end of input", len(ts.text))
            if nxt[0] == ")":
                ts.next()
                break
            parts.append(_parse_expr(ts))
        if len(parts) < 2:
            raise ConceptSyntaxError(f"'{head}' needs at least two arguments", hat)
        return conj(parts) if head == "and" else disj(parts)
    if head in ("atleast", "atmost"):
        bound = _parse_bound(ts)
        role = _parse_role(ts)
        filler = _parse_expr(ts)
        ts.next(")")
        node = AtLeast if head == "atleast" else AtMost
        return node(bound, role, filler)
    raise ConceptSyntaxError(f"unknown keyword '{head}'", hat)


def parse_concept(text: str) -> Concept:
    """Parse a concept from s-expression text.  Echoes structure: negation is
    kept as written, not pushed to NNF."""
    ts = _TokenStream(text)
    c = _parse_expr(ts)
    if not ts.at_end():
        tok, at = ts.tokens[ts.pos]
        raise ConceptSyntaxError(f"trailing input '{tok}'", at)
    return c


def concept_to_text(c: Concept) -> str:
    return str(c)


# ---------------------------------------------------------------------------
# NNF and negation
# ---------------------------------------------------------------------------


def negate(c: Concept) -> Concept:
    """Negation of an NNF concept, in NNF.  Structural dual: top/bottom swap,
    atom polarity flips, De Morgan on and/or, bounds shift on at-most/at-least."""
    if isinstance(c, Top):
        return BOTTOM
    if isinstance(c, Bottom):
        return TOP
    if isinstance(c, Atom):
        return NegAtom(c.name)
    if isinstance(c, NegAtom):
        return Atom(c.name)
    if isinstance(c, And):
        return disj(negate(p) for p in c.parts)
    if isinstance(c, Or):
        return conj(negate(p) for p in c.parts)
    if isinstance(c, AtMost):
        return AtLeast(c.bound + 1, c.role, c.filler)
    if isinstance(c, AtLeast):
        if c.bound == 0:
            # at-least 0 is a tautology, so its negation is bottom
            return BOTTOM
        return AtMost(c.bound - 1, c.role, c.filler)
    if isinstance(c, Not):
        return to_nnf(c.sub)
    raise TypeError(f"unknown concept node: {c!r}")


def to_nnf(c: Concept) -> Concept:
    """Push negation down to concept names.  Also rewrites the tautology
    at-least-0 to top, so every bound in NNF output is meaningful."""
    if isinstance(c, (Top, Bottom, Atom, NegAtom)):
        return c
    if isinstance(c, Not):
        return negate(to_nnf(c.sub))
    if isinstance(c, And):
        return conj(to_nnf(p) for p in c.parts)
    if isinstance(c, Or):
        return disj(to_nnf(p) for p in c.parts)
    if isinstance(c, AtLeast):
        if c.bound == 0:
            return TOP
        return AtLeast(c.bound, c.role, to_nnf(c.filler))
    if isinstance(c, AtMost):
        return AtMost(c.bound, c.role, to_nnf(c.filler))
    raise TypeError(f"unknown concept node: {c!r}")


def internalize(axioms: list[tuple[Concept, Concept]]) -> Concept:
    """Fold inclusion axioms lhs => rhs into one conjunction of clausal forms
    (not lhs or rhs), each in NNF.  Empty input gives top; a bottom/top
    disjunct from a top-shaped lhs is simplified away."""
    clauses: list[Concept] = []
    for lhs, rhs in axioms:
        clause = to_nnf(disj((Not(lhs), rhs)))
        if isinstance(clause, Or):
            clause = disj(p for p in clause.parts if not isinstance(p, Bottom))
        if isinstance(clause, Top):
            continue
        clauses.append(clause)
    return conj(clauses)


# ---------------------------------------------------------------------------
# modal closure and cut formulas
# ---------------------------------------------------------------------------


def modal_subformulae(*concepts: Concept) -> frozenset[tuple[Role, Concept, str, int]]:
    """Every at-most/at-least subterm, recursively including those nested in
    fillers.  Entries are (role, filler, sense, bound) with sense 'atmost' or
    'atleast'."""
    found: set[tuple[Role, Concept, str, int]] = set()

    def walk(c: Concept) -> None:
        if isinstance(c, (And, Or)):
            for p in c.parts:
                walk(p)
        elif isinstance(c, Not):
            walk(c.sub)
        elif isinstance(c, AtMost):
            found.add((c.role, c.filler, "atmost", c.bound))
            walk(c.filler)
        elif isinstance(c, AtLeast):
            found.add((c.role, c.filler, "atleast", c.bound))
            walk(c.filler)

    for c in concepts:
        walk(c)
    return frozenset(found)


@dataclass(frozen=True)
class CutFormula:
    """One filler-decision formula: for the (role, filler) pair of a number
    restriction, every node either has no inverse(role)-successor (the guard)
    or decides the filler one way or the other."""

    role: Role
    filler: Concept
    guard: AtMost
    formula: Concept


def cut_table(goal: Concept, axiom: Concept) -> tuple[CutFormula, ...]:
    """One cut formula per distinct (role, filler) pair among the number
    restrictions of goal and axiom, in canonical order."""
    pairs = {(role, filler) for role, filler, _, _ in modal_subformulae(goal, axiom)}
    entries = []
    for role, filler in sorted(pairs, key=lambda p: (p[0].base, p[0].inverted, concept_key(p[1]))):
        guard = AtMost(0, role.inverse(), TOP)
        formula = disj((guard, filler, negate(filler)))
        entries.append(CutFormula(role, filler, guard, formula))
    return tuple(entries)


def cut_formulae(goal: Concept, axiom: Concept) -> frozenset[Concept]:
    return frozenset(cf.formula for cf in cut_table(goal, axiom))


# ---------------------------------------------------------------------------
# problems
# ---------------------------------------------------------------------------


def signature_of(*concepts: Concept) -> tuple[frozenset[str], frozenset[str]]:
    """Atomic concept names and role base names occurring in the concepts."""
    atoms: set[str] = set()
    roles: set[str] = set()

    def walk(c: Concept) -> None:
        if isinstance(c, (Atom, NegAtom)):
            atoms.add(c.name)
        elif isinstance(c, Not):
            walk(c.sub)
        elif isinstance(c, (And, Or)):
            for p in c.parts:
                walk(p)
        elif isinstance(c, (AtMost, AtLeast)):
            roles.add(c.role.base)
            walk(c.filler)

    for c in concepts:
        walk(c)
    return frozenset(atoms), frozenset(roles)


@dataclass(frozen=True)
class Problem:
    """A satisfiability problem: goal concept, internalized axiom, and the
    cut formulas derived from both (all in NNF)."""

    goal: Concept
    axiom: Concept
    cuts: tuple[CutFormula, ...]
    atom_names: frozenset[str]
    role_names: frozenset[str]

    @property
    def cut_concepts(self) -> frozenset[Concept]:
        return frozenset(cf.formula for cf in self.cuts)


def build_problem(goal: Concept, axioms: Iterable[tuple[Concept, Concept]] = ()) -> Problem:
    e = to_nnf(goal)
    g = internalize(list(axioms))
    atoms, roles = signature_of(e, g)
    return Problem(goal=e, axiom=g, cuts=cut_table(e, g), atom_names=atoms, role_names=roles)


def walk_concepts(c: Concept) -> Iterator[Concept]:
    """Yield every node of the AST, parents before children."""
    yield c
    if isinstance(c, (And, Or)):
        for p in c.parts:
            yield from walk_concepts(p)
    elif isinstance(c, Not):
        yield from walk_concepts(c.sub)
    elif isinstance(c, (AtMost, AtLeast)):
        yield from walk_concepts(c.filler)
