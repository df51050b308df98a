"""Exception types and the enumeration budget shared by every module."""

DEFAULT_BUDGET = 2_000_000


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class BudgetError(RuntimeError):
    """An enumeration would exceed the configured object budget."""


class NumericError(ArithmeticError):
    """A floating-point routine (root finding) failed to converge."""


def check_budget(count, budget, what):
    """Raise BudgetError if enumerating `count` objects exceeds `budget`.

    `what` names the limiting parameter so callers can report it.
    """
    if budget is not None and count > budget:
        raise BudgetError(f"{what} requires {count} objects, budget is {budget}")
    return count
