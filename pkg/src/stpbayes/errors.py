"""Exception hierarchy shared by every module."""


class GameError(Exception):
    """Base class for all errors raised by stpbayes."""


class IndexOutOfRange(GameError, IndexError):
    pass


class ColumnMismatch(GameError, ValueError):
    pass


class DimensionMismatch(GameError, ValueError):
    pass


class InfinitePayoff(GameError, ValueError):
    """An operation that needs finite payoffs met a -inf cell."""


class NonpositiveWeight(GameError, ValueError):
    pass


class MissingEntry(GameError, ValueError):
    pass


class BadPrior(GameError, ValueError):
    pass


class ZeroProbabilityType(GameError, ValueError):
    """A belief was requested for a type that has zero marginal probability."""


class InfeasibleUpdate(GameError, ValueError):
    """Every candidate of some strategy update has payoff -inf."""


class NotApplicable(GameError, ValueError):
    """The finite region of a game is not a product of strategy sets."""


class ParseError(GameError, ValueError):
    pass


class ValidationError(GameError, ValueError):
    pass
