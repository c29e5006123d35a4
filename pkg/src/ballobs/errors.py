"""Exception types shared across the package."""


class UsageError(ValueError):
    """A caller violated a documented precondition."""


class DegenerateCaseError(UsageError):
    """The requested quantity is undefined for this input; callers must special-case."""


class LimitExceeded(RuntimeError):
    """A node or wall-clock budget ran out before a search finished.

    Carries whatever partial statistics and partially enumerated classes the
    search had accumulated, so callers can report an honest INCONCLUSIVE
    outcome instead of a wrong verdict.
    """

    def __init__(self, message, stats=None, partial_classes=()):
        super().__init__(message)
        self.stats = stats
        self.partial_classes = tuple(partial_classes)


class InternalCheckError(RuntimeError):
    """An internal consistency assertion failed; this is a bug, not bad input."""
