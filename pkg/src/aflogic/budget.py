"""Explicit resource accounting: exhausting a budget raises, never silently degrades."""

from __future__ import annotations


class ResourceExhausted(RuntimeError):
    """The configured node budget was exceeded before an answer was reached."""


class Budget:
    """A mutable spend counter shared across one top-level computation."""

    __slots__ = ("limit", "spent")

    DEFAULT_LIMIT = 2_000_000

    def __init__(self, limit: int = DEFAULT_LIMIT):
        if limit <= 0:
            raise ValueError("budget limit must be positive")
        self.limit = limit
        self.spent = 0

    def spend(self, amount: int = 1) -> None:
        self.spent += amount
        if self.spent > self.limit:
            raise ResourceExhausted(
                f"budget exceeded: {self.spent} > {self.limit} nodes")

    @classmethod
    def ensure(cls, budget: "Budget | None") -> "Budget":
        return budget if budget is not None else cls()
