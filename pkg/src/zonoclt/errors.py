"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """Arguments violate a documented precondition."""


class RankDeficiencyError(InvalidInputError):
    """A matrix expected to have full row rank is numerically singular."""


class BudgetExceededError(RuntimeError):
    """Exact enumeration would exceed the configured subset budget."""

    def __init__(self, count, limit, what="subsets"):
        self.count = count
        self.limit = limit
        super().__init__(f"C(N, n) = {count} {what} exceeds the budget of {limit}")
