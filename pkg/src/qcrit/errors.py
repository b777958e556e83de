"""Exception hierarchy shared by every module."""


class QcritError(Exception):
    """Base class for all errors raised by this package."""


class ResourceLimit(QcritError):
    """An enumeration would exceed the configured cap."""


class InvalidInterval(QcritError):
    pass


class InvalidCoatom(QcritError):
    pass


class InvalidIndexSet(QcritError):
    pass


class SingularMatrix(QcritError):
    pass


class InvalidParams(QcritError):
    pass


class DegenerateCode(QcritError):
    pass


class ScalingMismatch(QcritError):
    pass


class ParseError(QcritError):
    """Malformed code, weighted-lattice or subspace file."""


class InconsistencyError(QcritError):
    """A computed quantity contradicts a guaranteed bound or an independent route."""
