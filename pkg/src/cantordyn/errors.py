"""Exception hierarchy shared by all cantordyn modules."""


class CantorDynError(Exception):
    """Base class for every error raised by this package."""


class NoRealFixedPoint(CantorDynError):
    """The quadratic map x^2 + c has no real fixed point (c > 1/4)."""


class DomainError(CantorDynError):
    """An argument is outside the domain an operation is defined on."""


class RegimeError(CantorDynError):
    """The parameters are outside the certified Cantor-set regime."""


class SpecError(CantorDynError):
    """A Cantor-set specification or serialized document is malformed."""
