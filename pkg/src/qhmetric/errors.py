"""Exception hierarchy shared by every module."""


class QHError(Exception):
    """Base class for errors raised by qhmetric."""


class PreconditionError(QHError, ValueError):
    """An argument violates an operation's precondition (e.g. point outside domain).

    ``param`` names the offending argument when it is known.
    """

    def __init__(self, message, param=None):
        super().__init__(message)
        self.param = param


class InvalidPathError(QHError, ValueError):
    pass


class SamplingError(QHError, RuntimeError):
    pass


class NoPathError(QHError, RuntimeError):
    pass


class CertificationError(QHError, RuntimeError):
    """A near-geodesic could not be certified; ``ratio`` holds the best achieved ratio."""

    def __init__(self, message, ratio, path=None):
        super().__init__(message)
        self.ratio = ratio
        self.path = path


class ChainOverflowError(QHError, RuntimeError):
    pass


class BranchError(QHError, ArithmeticError):
    pass


class UnsupportedImageError(QHError, NotImplementedError):
    pass


class DocumentError(QHError, ValueError):
    """A JSON document could not be parsed; ``field`` names the offending key."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field
