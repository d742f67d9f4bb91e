"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Input does not describe a valid compact metric measure space.

    ``indices`` holds the offending point indices (pair, triple or single
    index) when the problem can be localized.
    """

    def __init__(self, message, indices=()):
        super().__init__(message)
        self.indices = tuple(indices)


class KernelError(ArithmeticError):
    """A pair kernel raised or produced a non-finite value."""

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair
