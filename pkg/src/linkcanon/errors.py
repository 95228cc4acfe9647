"""Exception hierarchy shared by all modules."""


class LinkcanonError(Exception):
    """Base class for every error raised by this package."""


class InvariantViolation(LinkcanonError):
    """An internal consistency check failed; indicates a bug upstream."""


# exact
class SingularMatrix(LinkcanonError):
    pass


class NotSymmetric(LinkcanonError):
    pass


class NotSaturated(LinkcanonError):
    pass


class NotOddPrime(LinkcanonError):
    pass


class BitSizeExceeded(LinkcanonError):
    """An intermediate integer grew beyond the configured bit cap."""


# canon
class NonIntegral(InvariantViolation):
    pass


class DegenerateLayer(InvariantViolation):
    pass


class WrongType(LinkcanonError):
    pass


class EvenDeterminant(InvariantViolation):
    pass


class CapExceeded(LinkcanonError):
    """The quotient group to enumerate is larger than the configured cap."""


class NoMatch(InvariantViolation):
    """A Gauss sum is not of the form sqrt(N) * zeta_8^u."""


class ParseError(LinkcanonError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


# dictionary
class BadFraction(LinkcanonError):
    pass


class UnrealizableU(LinkcanonError):
    def __init__(self, message: str, package=None):
        super().__init__(message)
        self.package = package


class RealizationMismatch(LinkcanonError):
    def __init__(self, message: str, expected=None, actual=None):
        super().__init__(message)
        self.expected = expected
        self.actual = actual


# kirby
class BadDestabilize(LinkcanonError):
    pass
