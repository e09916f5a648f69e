class GCDError(Exception):
    """Base class for errors raised by this package."""


class InvalidInputError(GCDError, ValueError):
    pass


class MoveUndefinedError(GCDError):
    """A coordinate move has no significant position to trade mass with."""


class DegenerateVectorError(GCDError, ValueError):
    pass


class EvaluationError(GCDError):
    """The objective returned a non-finite value.

    The offending block point is kept on ``self.point``.
    """

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class ConfigError(GCDError, ValueError):
    pass


class UnsupportedVariantError(GCDError, ValueError):
    pass
