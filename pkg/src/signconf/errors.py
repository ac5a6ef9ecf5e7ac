"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the requested operation."""


class NumericError(ArithmeticError):
    """A numerical procedure failed to produce a usable answer."""


class UndersampledError(NumericError):
    """A Monte Carlo run produced no draws in the event of interest."""
