"""Propositional branches of a node label, and their bound adjustment.

A branch is one disjunct of the label's disjunctive normal form, with number
restrictions treated as opaque propositions.  Branches are plain frozensets
of literal concepts, so equality and subset tests are set semantics.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator

from .syntax import (
    And,
    AtLeast,
    AtMost,
    Bottom,
    Concept,
    CutFormula,
    Or,
    Role,
    Top,
    negate,
    sorted_concepts,
)

Branch = frozenset  # frozenset[Concept]


class ClashKind(Enum):
    FALSUM = "falsum"                       # bottom among the literals
    COMPLEMENT = "complementary-pair"       # both C and its negation
    NEGATIVE_AT_MOST = "negative-at-most"   # at-most bound below zero


@dataclass(frozen=True)
class CutSet:
    """The filler decisions a parent's branch hands to a child across one
    edge.  Each entry (role, filler, holds) records whether the parent made
    the filler true (holds) or its negation (not holds).  Pairs where the
    parent chose the guard disjunct are absent."""

    choices: frozenset  # frozenset[tuple[Role, Concept, bool]]

    def lookup(self, role: Role, filler: Concept) -> bool | None:
        for r, f, holds in self.choices:
            if r == role and f == filler:
                return holds
        return None

    def choice_literals(self) -> frozenset:
        """The concepts the parent committed to: filler or negated filler
        per entry."""
        return frozenset(f if holds else negate(f) for _, f, holds in self.choices)

    def __bool__(self) -> bool:
        return bool(self.choices)


EMPTY_CUT_SET = CutSet(frozenset())


def enumerate_branches(label: Iterable[Concept]) -> Iterator[Branch]:
    """Lazily yield the DNF disjuncts of the conjunction of the label.

    Choices run depth-first over or-nodes in canonical child order, so the
    sequence is deterministic.  Disjuncts equal as sets are yielded once.
    Clashed disjuncts are not filtered here.
    """
    items = tuple(sorted_concepts(set(label)))
    seen: set[Branch] = set()

    def walk(work: tuple[Concept, ...], acc: frozenset) -> Iterator[Branch]:
        while work:
            head, work = work[0], work[1:]
            if isinstance(head, And):
                work = head.parts + work
            elif isinstance(head, Or):
                for part in head.parts:
                    yield from walk((part,) + work, acc)
                return
            else:
                acc = acc | {head}
        if acc not in seen:
            seen.add(acc)
            yield acc

    return walk(items, frozenset())


def branch_satisfies(branch: Branch, c: Concept) -> bool:
    """Whether the branch's literal set covers one DNF disjunct of c.  Top is
    always covered; other literals by membership."""
    if isinstance(c, Top):
        return True
    if isinstance(c, And):
        return all(branch_satisfies(branch, p) for p in c.parts)
    if isinstance(c, Or):
        return any(branch_satisfies(branch, p) for p in c.parts)
    return c in branch


def cut_set_for_child(
    parent_branch: Branch, edge_role: Role, cuts: tuple[CutFormula, ...]
) -> CutSet:
    """Extract the filler decisions relevant to a child reached over
    edge_role.

    A cut formula applies when its guard watches exactly this edge, which is
    the case for pairs on the inverse of the edge role.  If the parent's
    branch covers neither the filler nor its negation it chose the guard, and
    the pair is dropped: the guard's zero bound already forbids any child on
    this edge.
    """
    choices = set()
    for cf in cuts:
        if cf.guard.role != edge_role:
            continue
        if branch_satisfies(parent_branch, cf.filler):
            choices.add((cf.role, cf.filler, True))
        elif branch_satisfies(parent_branch, negate(cf.filler)):
            choices.add((cf.role, cf.filler, False))
    return CutSet(frozenset(choices))


def fine_tune(branch: Branch, cut: CutSet, edge_role: Role | None) -> Branch:
    """Discount the tree parent from the child's number restrictions.

    For every restriction over the inverse of the incoming edge whose filler
    the parent made true, the bound drops by one: the parent itself is one
    qualifying neighbor, so the children only owe the rest.  An at-most bound
    may reach -1 (a clash); an at-least bound stops at 0.
    """
    if edge_role is None or not cut:
        return branch
    back = edge_role.inverse()
    tuned = []
    for lit in branch:
        if isinstance(lit, (AtMost, AtLeast)) and lit.role == back:
            if cut.lookup(back, lit.filler) is True:
                if isinstance(lit, AtMost):
                    lit = AtMost(lit.bound - 1, lit.role, lit.filler)
                else:
                    lit = AtLeast(max(lit.bound - 1, 0), lit.role, lit.filler)
        tuned.append(lit)
    return frozenset(tuned)


def primitive_clash(branch: Branch) -> ClashKind | None:
    """First clash among: bottom present, a complementary literal pair, an
    at-most with a negative bound.  None when clash-free."""
    ordered = sorted_concepts(branch)
    for lit in ordered:
        if isinstance(lit, Bottom):
            return ClashKind.FALSUM
    for lit in ordered:
        if negate(lit) in branch:
            return ClashKind.COMPLEMENT
    for lit in ordered:
        if isinstance(lit, AtMost) and lit.bound < 0:
            return ClashKind.NEGATIVE_AT_MOST
    return None
