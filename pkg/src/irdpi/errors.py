"""Exception hierarchy shared by every irdpi module."""


class IRDPIError(Exception):
    """Base class for all errors raised by irdpi."""


class ValidationError(IRDPIError, ValueError):
    """Malformed probability data (negative mass, bad normalization, ...)."""


class UsageError(IRDPIError, ValueError):
    """An operation was called with arguments it does not accept."""


class UnsupportedConditionError(IRDPIError, ValueError):
    """Conditioning on an event of zero probability."""


class NumericalError(IRDPIError, ArithmeticError):
    """A numerical invariant failed beyond its tolerance."""


class CapacityError(IRDPIError):
    """A dense tensor or an enumeration exceeded its size cap."""


class ParseError(IRDPIError, ValueError):
    """A scenario or encoder file could not be parsed."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
