"""Successor arithmetic for one (node, role) pair.

The distinct fillers of the role's number restrictions split the possible
successors into 2^n - 1 sign-complete combinations (the all-negative one is
irrelevant, no restriction counts it).  Each combination is an unknown
non-negative integer multiplicity; each restriction becomes a subset-sum
inequality over the combinations containing its filler positively.
Feasibility of the system decides local consistency of the restrictions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .syntax import (
    AtLeast,
    AtMost,
    Concept,
    Role,
    negate,
    sorted_concepts,
)


class SolverLimitError(RuntimeError):
    """The feasibility search exceeded its step budget."""


@dataclass(frozen=True)
class AtomSet:
    """One sign assignment over the ordered filler list: bit k of mask set
    means filler k appears positively, clear means negated.  mask is never
    zero."""

    mask: int
    fillers: tuple[Concept, ...]

    def literals(self) -> frozenset:
        out = []
        for k, f in enumerate(self.fillers):
            out.append(f if (self.mask >> k) & 1 else negate(f))
        return frozenset(out)

    def concept(self) -> Concept:
        from .syntax import conj

        return conj(self.literals())


@dataclass(frozen=True)
class Row:
    """One inequality: sum of the variables whose atom contains the filler
    positively, compared against the bound."""

    coeff_mask: int          # bit j set means atom with mask j+1 participates
    is_at_most: bool
    bound: int
    source: Concept          # the restriction this row came from


@dataclass(frozen=True)
class LiiSystem:
    fillers: tuple[Concept, ...]
    rows: tuple[Row, ...]
    zeroed: frozenset = field(default_factory=frozenset)  # frozenset[int], atom masks

    @property
    def width(self) -> int:
        return len(self.fillers)

    def atom_masks(self) -> range:
        return range(1, 1 << self.width)

    def describe(self) -> str:
        lines = [f"fillers: {[str(f) for f in self.fillers]}"]
        for row in self.rows:
            terms = [
                f"v{m}" for m in self.atom_masks() if (row.coeff_mask >> (m - 1)) & 1
            ]
            op = "<=" if row.is_at_most else ">="
            lines.append(f"{' + '.join(terms) or '0'} {op} {row.bound}")
        if self.zeroed:
            lines.append(f"zeroed: {sorted(self.zeroed)}")
        return "\n".join(lines)


@dataclass(frozen=True)
class Solution:
    """Non-negative multiplicities per atom mask; absent masks are zero."""

    values: tuple  # tuple[tuple[int, int], ...] of (mask, value), value > 0

    def value(self, mask: int) -> int:
        for m, v in self.values:
            if m == mask:
                return v
        return 0

    def positive_masks(self) -> tuple[int, ...]:
        return tuple(m for m, v in self.values if v > 0)


def collect_fillers(branch: frozenset, role: Role) -> list[Concept]:
    """Distinct fillers of the restrictions on role in the branch, in first
    occurrence order under the canonical branch ordering."""
    out: list[Concept] = []
    for lit in sorted_concepts(branch):
        if isinstance(lit, (AtMost, AtLeast)) and lit.role == role:
            if lit.filler not in out:
                out.append(lit.filler)
    return out


def atomic_decomposition(fillers: list[Concept], lambda_max: int = 10) -> list[AtomSet]:
    """All 2^n - 1 sign-complete combinations, ascending by mask."""
    n = len(fillers)
    if n < 1:
        raise ValueError("need at least one filler")
    if n > lambda_max:
        raise SolverLimitError(
            f"{n} distinct fillers exceed the decomposition limit of {lambda_max}"
        )
    tup = tuple(fillers)
    return [AtomSet(mask, tup) for mask in range(1, 1 << n)]


def build_lii(branch: frozenset, role: Role) -> LiiSystem:
    """One row per restriction on the role; coefficients select the atoms
    containing the row's filler positively.  Nothing zeroed yet."""
    fillers = collect_fillers(branch, role)
    index = {f: k for k, f in enumerate(fillers)}
    rows = []
    for lit in sorted_concepts(branch):
        if not isinstance(lit, (AtMost, AtLeast)) or lit.role != role:
            continue
        k = index[lit.filler]
        coeff = 0
        for mask in range(1, 1 << len(fillers)):
            if (mask >> k) & 1:
                coeff |= 1 << (mask - 1)
        rows.append(
            Row(
                coeff_mask=coeff,
                is_at_most=isinstance(lit, AtMost),
                bound=lit.bound,
                source=lit,
            )
        )
    return LiiSystem(fillers=tuple(fillers), rows=tuple(rows))


def zero_column(system: LiiSystem, atom_mask: int) -> LiiSystem:
    """Force the atom's multiplicity to zero; returns a new system."""
    if not 1 <= atom_mask < (1 << system.width):
        raise ValueError(f"atom mask {atom_mask} out of range")
    return LiiSystem(
        fillers=system.fillers,
        rows=system.rows,
        zeroed=system.zeroed | {atom_mask},
    )


def feasible(system: LiiSystem, max_steps: int = 2_000_000) -> Solution | None:
    """Find a non-negative integer solution, or None when infeasible.

    Depth-first over atoms in ascending mask order, smallest value first, so
    the solution returned is deterministic.  Each variable is capped at the
    sum of the at-least bounds: at-most rows never force a value up, so a
    solution inside that box exists whenever any does.  Per-variable value
    ranges come from the rows, arithmetic on bounds rather than unary
    counting, which keeps large bounds cheap.
    """
    for row in system.rows:
        if row.bound < 0:
            raise ValueError("negative row bound; clash detection should run first")

    masks = [m for m in system.atom_masks() if m not in system.zeroed]
    cap = sum(row.bound for row in system.rows if not row.is_at_most)
    rows = system.rows
    n_rows = len(rows)
    # max the atoms after position i can still add to each row
    suffix_cap = [[0] * n_rows for _ in range(len(masks) + 1)]
    for i in range(len(masks) - 1, -1, -1):
        bit = 1 << (masks[i] - 1)
        for r in range(n_rows):
            extra = cap if (rows[r].coeff_mask & bit) else 0
            suffix_cap[i][r] = suffix_cap[i + 1][r] + extra

    sums = [0] * n_rows
    chosen: dict[int, int] = {}
    steps = 0

    def assign(i: int) -> bool:
        nonlocal steps
        steps += 1
        if steps > max_steps:
            raise SolverLimitError(f"feasibility search exceeded {max_steps} steps")
        if i == len(masks):
            return all(
                (s <= r.bound) if r.is_at_most else (s >= r.bound)
                for s, r in zip(sums, rows)
            )
        bit = 1 << (masks[i] - 1)
        lo, hi = 0, cap
        for r in range(n_rows):
            row = rows[r]
            if row.is_at_most:
                if row.coeff_mask & bit:
                    hi = min(hi, row.bound - sums[r])
                elif sums[r] > row.bound:
                    return False
            else:
                reachable = sums[r] + suffix_cap[i + 1][r]
                if row.coeff_mask & bit:
                    lo = max(lo, row.bound - reachable)
                elif reachable < row.bound:
                    return False
        if lo > hi:
            return False
        for value in range(lo, hi + 1):
            if value:
                for r in range(n_rows):
                    if rows[r].coeff_mask & bit:
                        sums[r] += value
            chosen[masks[i]] = value
            if assign(i + 1):
                return True
            if value:
                for r in range(n_rows):
                    if rows[r].coeff_mask & bit:
                        sums[r] -= value
        del chosen[masks[i]]
        return False

    if not assign(0):
        return None
    solution = Solution(values=tuple((m, v) for m, v in sorted(chosen.items()) if v > 0))
    _validate(system, solution)
    return solution


def _validate(system: LiiSystem, solution: Solution) -> None:
    for mask in system.zeroed:
        if solution.value(mask) != 0:
            raise AssertionError("solution assigns a zeroed atom")
    for row in system.rows:
        total = sum(
            v for m, v in solution.values if (row.coeff_mask >> (m - 1)) & 1
        )
        ok = total <= row.bound if row.is_at_most else total >= row.bound
        if not ok:
            raise AssertionError(f"solution violates row {row}")
