"""Enumeration budgets shared by every brute-force routine."""

import os

DEFAULT_BUDGET = 10**7
ENV_VAR = "LEAKAGE_LAB_BUDGET"


class BudgetExceeded(RuntimeError):
    """An exhaustive enumeration would exceed its budget."""

    def __init__(self, what: str, size: int, budget: int):
        super().__init__(f"{what} too large: {size} > budget {budget} (raise it with --budget or ${ENV_VAR})")
        self.what = what
        self.size = size
        self.budget = budget


def get_budget(budget: int | None = None) -> int:
    if budget is not None:
        return int(budget)
    env = os.environ.get(ENV_VAR)
    return int(float(env)) if env else DEFAULT_BUDGET


def check(what: str, size: int, budget: int | None = None) -> None:
    limit = get_budget(budget)
    if size > limit:
        raise BudgetExceeded(what, size, limit)
