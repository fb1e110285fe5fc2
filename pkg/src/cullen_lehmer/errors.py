"""Exception types shared across the package."""


class FalsificationError(Exception):
    """A mechanically checked step that must hold arithmetically failed.

    Every raise site checks a fact that is a theorem for legal inputs, so
    reaching one means either a genuine counterexample or a checker bug.
    Both must abort loudly instead of degrading into a wrong verdict.
    """

    def __init__(self, stage: str, detail: str):
        super().__init__(f"{stage}: {detail}")
        self.stage = stage
        self.detail = detail


class BudgetError(RuntimeError):
    """A search ran out of its resource budget before reaching a verdict."""


class PrecisionError(RuntimeError):
    """An enclosure stayed ambiguous even at the maximum working precision."""
