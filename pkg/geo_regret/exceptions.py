"""Exception hierarchy for the geometric regret matching toolkit."""


class GeoRegretError(Exception):
    """Base class for all errors raised by this package."""


class ShapeError(GeoRegretError, ValueError):
    """Raised when a strategy, profile or payoff tensor has the wrong shape."""


class SimplexError(GeoRegretError, ValueError):
    """Raised when weights do not describe a point of the probability simplex."""


class RuleError(GeoRegretError, ValueError):
    """Raised for invalid update rules, rates or rule spec strings."""


class GameFileError(GeoRegretError, ValueError):
    """Raised when a game, profile or trace file cannot be parsed."""


class GameTooLargeError(GeoRegretError, ValueError):
    """Raised when support enumeration is asked to solve a game beyond its guard."""


class NumericalError(GeoRegretError, ArithmeticError):
    """Raised when an iteration produces non-finite values."""


class UsageError(GeoRegretError, ValueError):
    """Raised for invalid command-line flag combinations."""
