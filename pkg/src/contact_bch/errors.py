"""Exception hierarchy shared by every module."""


class ChaError(Exception):
    """Base class for errors raised by contact_bch."""


class DimensionError(ChaError, ValueError):
    """Two elements (or an element and a matrix) have different n."""


class NumericError(ChaError, ArithmeticError):
    """Non-finite input or output."""


class ConvergenceError(ChaError, ArithmeticError):
    """The defining BCH series does not converge for the requested pair.

    ``diagnostics`` carries whatever was recorded before giving up, including
    the spectral margin that triggered the failure.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics
