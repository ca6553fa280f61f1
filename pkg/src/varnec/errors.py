"""Exception hierarchy shared by every varnec module."""


class VarnecError(Exception):
    """Base class for all library errors."""


class UsageError(VarnecError, ValueError):
    """Caller passed arguments that violate an operation's contract."""


class DomainError(VarnecError, ValueError):
    """Inputs are well formed but the operation is undefined on them."""


class EnumerationLimitError(VarnecError):
    """An exhaustive search would exceed the configured subset budget."""

    def __init__(self, message: str, needed: int, limit: int):
        super().__init__(message)
        self.needed = needed
        self.limit = limit


class ConstructionError(VarnecError):
    """Randomized construction ran out of attempts."""

    def __init__(self, message: str, attempts: int):
        super().__init__(message)
        self.attempts = attempts


class FamilyError(VarnecError):
    """A rate-reduction step could not produce an MDS code."""

    def __init__(self, message: str, rate: int):
        super().__init__(message)
        self.rate = rate
