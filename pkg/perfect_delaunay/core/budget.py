"""Work budgets for the backtracking searches."""

from __future__ import annotations

from perfect_delaunay.config import settings
from perfect_delaunay.exceptions import BudgetExceeded


class Budget:
    """
    Raise BudgetExceeded from tick() once the search has used up its nodes.

    A budget is given in nominal seconds and converted to a node allowance at
    `nodes_per_second`, so the verdict is the same on every run, machine and
    worker count. None means unlimited.
    """

    def __init__(self, seconds: float | None, what: str = "search", nodes_per_second: int | None = None) -> None:
        self.seconds = seconds
        self.what = what
        self.nodes = 0
        rate = settings.BUDGET_NODES_PER_SECOND if nodes_per_second is None else nodes_per_second
        self.max_nodes = None if seconds is None else max(0, int(seconds * rate))

    def tick(self) -> None:
        self.nodes += 1
        if self.max_nodes is not None and self.nodes > self.max_nodes:
            raise BudgetExceeded(self.what, f"{self.seconds:g}s")

    @classmethod
    def unlimited(cls, what: str = "search") -> "Budget":
        return cls(None, what)
