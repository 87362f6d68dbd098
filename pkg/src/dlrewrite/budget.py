"""Resource bounds for saturation loops that are not guaranteed to terminate."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

__all__ = ["Budget", "BudgetMeter", "DEFAULT_BUDGET", "UNBOUNDED"]


@dataclass(frozen=True)
class Budget:
    """Optional caps on loop iterations, clauses added and wall-clock seconds."""

    max_iterations: Optional[int] = None
    max_clauses: Optional[int] = None
    wall_clock_limit: Optional[float] = None

    @property
    def unbounded(self) -> bool:
        return self.max_iterations is None and self.max_clauses is None and self.wall_clock_limit is None

    def meter(self) -> "BudgetMeter":
        return BudgetMeter(self)


UNBOUNDED = Budget()
DEFAULT_BUDGET = Budget(max_clauses=10_000, wall_clock_limit=60.0)


@dataclass
class BudgetMeter:
    budget: Budget
    iterations: int = 0
    clauses: int = 0
    started: float = field(default_factory=time.monotonic)

    @property
    def elapsed(self) -> float:
        return time.monotonic() - self.started

    def exhausted(self) -> Optional[str]:
        """Name of the first exceeded bound, or ``None``."""
        b = self.budget
        if b.max_iterations is not None and self.iterations >= b.max_iterations:
            return "iterations"
        if b.max_clauses is not None and self.clauses >= b.max_clauses:
            return "clauses"
        if b.wall_clock_limit is not None and self.elapsed >= b.wall_clock_limit:
            return "wall_clock"
        return None
