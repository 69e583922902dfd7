"""Exception hierarchy shared by every module in the package."""


class PslrError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(PslrError, ValueError):
    """Malformed Matrix Market content."""


class UnsupportedFormat(PslrError, ValueError):
    """Matrix Market variant this reader does not handle (pattern, complex, array)."""


class DimensionError(PslrError, ValueError):
    pass


class InvalidInput(PslrError, ValueError):
    pass


class SingularMatrix(PslrError, ArithmeticError):
    pass


class PivotBreakdown(PslrError, ArithmeticError):
    """Incomplete factorization hit a zero or non-positive pivot."""


class CorrectionSingular(PslrError, ArithmeticError):
    """``I - H`` of the low-rank correction is numerically singular.

    This happens when the operator handed to Arnoldi has an eigenvalue at
    (or extremely close to) one.
    """


class ConfigError(PslrError, ValueError):
    pass


class MatrixIOError(PslrError, OSError):
    pass
