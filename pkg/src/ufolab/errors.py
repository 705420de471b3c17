"""Exception types shared across the package.

The CLI maps these onto exit codes: InputError -> 2, BudgetError -> 3,
RejectionError -> 1. Everything else is a bug.
"""


class UfolabError(Exception):
    pass


class InputError(UfolabError):
    """Malformed or inconsistent input (unknown symbol, overlapping sets, ...)."""


class BudgetError(UfolabError):
    """A ball construction exceeded the configured vertex budget."""


class MarginError(UfolabError):
    """A bounded graph is too small to answer a query exactly."""


class RejectionError(UfolabError):
    """A constructor's applicability check failed (e.g. a Folner ratio).

    Carries an explanation; semantically a 'no', not a crash.
    """

    def __init__(self, message, **data):
        super().__init__(message)
        self.data = data
