"""Cooperative work budgets for the enumerative solvers.

Every potentially explosive loop charges work units against a budget before
doing the work.  Exhausting the budget raises; callers map that to a distinct
"undecided" outcome (CLI exit code 3), never to a NO answer.
"""

from __future__ import annotations

import time

DEFAULT_WORK_LIMIT = 100_000_000


class BudgetExceededError(Exception):
    """Raised when a solver runs out of its work or time budget."""


class Budget:
    """Counts abstract work units and optionally watches a wall-clock deadline.

    The deadline is checked only every ``_TIME_CHECK_MASK + 1`` ticks to keep
    the per-tick cost down; enforcement is cooperative, never forced.
    """

    _TIME_CHECK_MASK = 0xFFF

    def __init__(self, limit: int | None = DEFAULT_WORK_LIMIT,
                 timeout_s: float | None = None):
        self.limit = limit
        self.used = 0
        self._deadline = time.monotonic() + timeout_s if timeout_s else None

    def tick(self, units: int = 1) -> None:
        self.used += units
        if self.limit is not None and self.used > self.limit:
            raise BudgetExceededError(
                f"work budget exceeded ({self.used} > {self.limit} units)")
        if self._deadline is not None and (self.used & self._TIME_CHECK_MASK) == 0:
            self.check_time()

    def check_time(self) -> None:
        if self._deadline is not None and time.monotonic() > self._deadline:
            raise BudgetExceededError("time budget exceeded")


def ensure_budget(budget: Budget | None, limit: int = DEFAULT_WORK_LIMIT) -> Budget:
    """Return the given budget, or a fresh one with the stated default limit."""
    return budget if budget is not None else Budget(limit)
