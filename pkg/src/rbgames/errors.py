"""Exception types shared across the package."""


class NumericalFailure(RuntimeError):
    """A solver stalled or lost precision and refuses to return an answer."""


class BudgetExhausted(RuntimeError):
    """A node/time budget ran out before the search finished.

    ``incumbent`` carries the best feasible object found so far, if any.
    """

    def __init__(self, message, incumbent=None):
        super().__init__(message)
        self.incumbent = incumbent


class EmptyUnion(ValueError):
    """Every piece handed to a hull construction was empty."""


class InfeasibleGame(RuntimeError):
    """Some player has an empty feasible set."""


class DocumentError(ValueError):
    """A document failed parsing or validation; ``path`` names the field."""

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path
