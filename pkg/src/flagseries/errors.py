class FlagSeriesError(Exception):
    """Base class for errors raised by this package."""


class RankMismatch(FlagSeriesError, ValueError):
    pass


class NotPositive(FlagSeriesError, ValueError):
    pass


class NotContained(FlagSeriesError, ValueError):
    pass


class InsufficientPrecision(FlagSeriesError, ArithmeticError):
    """A result depends on terms beyond the known precision."""


class ZeroDenominator(FlagSeriesError, ZeroDivisionError):
    pass


class NonSimpleRoot(FlagSeriesError, ArithmeticError):
    pass
