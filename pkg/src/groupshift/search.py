"""Exhaustive backtracking over cell labelings.

Cells are assigned in index order and letters in alphabet order, so
solutions come out in lexicographic order and the first one is the
lexicographically least.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

DEFAULT_BUDGET = 10_000_000


class BudgetExceeded(RuntimeError):
    """The search ran out of nodes before reaching a conclusion."""

    def __init__(self, budget: int):
        super().__init__(f"budget of {budget} nodes exhausted")
        self.budget = budget


def default_budget() -> int:
    value = os.environ.get("GROUPSHIFT_BUDGET")
    return int(value) if value else DEFAULT_BUDGET


@dataclass(frozen=True)
class Constraint:
    """The letters on ``cells`` must not form any tuple in ``forbidden``."""

    cells: tuple[int, ...]
    forbidden: frozenset


def reduce_constraint(cells: Sequence[int], forbidden: Iterable[tuple[int, ...]]) -> Constraint | None:
    """Collapse repeated cells; tuples that disagree on a repeated cell are dropped."""
    order: list[int] = []
    for c in cells:
        if c not in order:
            order.append(c)
    if len(order) == len(cells):
        return Constraint(tuple(cells), frozenset(forbidden))
    kept = set()
    for letters in forbidden:
        value: dict[int, int] = {}
        if all(value.setdefault(c, a) == a for c, a in zip(cells, letters)):
            kept.add(tuple(value[c] for c in order))
    if not kept:
        return None
    return Constraint(tuple(order), frozenset(kept))


def merge(constraints: Iterable[Constraint | None]) -> list[Constraint]:
    by_cells: dict[tuple[int, ...], set] = {}
    for c in constraints:
        if c is not None:
            by_cells.setdefault(c.cells, set()).update(c.forbidden)
    return [Constraint(cells, frozenset(f)) for cells, f in by_cells.items()]


@dataclass
class Search:
    n_cells: int
    n_letters: int
    constraints: list[Constraint]
    budget: int | None = None
    nodes: int = 0

    def __post_init__(self):
        if self.budget is None:
            self.budget = default_budget()
        self._due: list[list[Constraint]] = [[] for _ in range(self.n_cells)]
        for c in self.constraints:
            if c.cells:
                self._due[max(c.cells)].append(c)

    def solutions(self) -> Iterator[tuple[int, ...]]:
        """All legal labelings, lexicographically; raises ``BudgetExceeded``."""
        n, k = self.n_cells, self.n_letters
        if n == 0:
            yield ()
            return
        assign = [0] * n
        due = self._due
        pos = 0
        assign[0] = -1
        while pos >= 0:
            assign[pos] += 1
            if assign[pos] >= k:
                pos -= 1
                continue
            self.nodes += 1
            if self.nodes > self.budget:
                raise BudgetExceeded(self.budget)
            ok = True
            for con in due[pos]:
                if tuple(assign[c] for c in con.cells) in con.forbidden:
                    ok = False
                    break
            if not ok:
                continue
            if pos == n - 1:
                yield tuple(assign)
            else:
                pos += 1
                assign[pos] = -1

    def first(self) -> tuple[int, ...] | None:
        return next(iter(self.solutions()), None)
