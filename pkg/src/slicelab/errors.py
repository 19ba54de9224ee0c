"""Exception types shared across the package."""


class SlicelabError(Exception):
    """Base class for all errors raised by slicelab."""


class InvalidInput(SlicelabError, ValueError):
    """Parameters or documents that fail validation."""


class NonPrimeP(InvalidInput):
    pass


class ReducibleModulus(InvalidInput):
    pass


class UnsupportedSize(InvalidInput):
    pass


class DimensionMismatch(InvalidInput):
    pass


class DegreeTooLarge(InvalidInput):
    pass


class ArityMismatch(InvalidInput):
    pass


class EpsilonOutOfRange(InvalidInput):
    pass


class InvalidEquation(InvalidInput):
    pass


class NoAdmissibleSlot(SlicelabError):
    """A monomial exceeds the degree threshold in every slot."""


class SizeBudgetExceeded(SlicelabError):
    """The instance is beyond the configured enumeration or term budget."""

    def __init__(self, what, size, budget):
        self.what = what
        self.size = size
        self.budget = budget
        super().__init__(f"{what}: {size} exceeds budget {budget}")
