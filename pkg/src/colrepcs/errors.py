"""Exception hierarchy shared by all modules."""


class ColrepError(Exception):
    """Base class for every error raised by this package."""


class FieldMismatchError(ColrepError, ValueError):
    """Operands live in different finite fields."""


class FieldZeroDivisionError(ColrepError, ZeroDivisionError):
    pass


class NotPrimeError(ColrepError, ValueError):
    pass


class RankDeficiencyError(ColrepError, ValueError):
    """Generator rows are linearly dependent."""


class DegenerateCodeError(ColrepError, ValueError):
    pass


class PreconditionError(ColrepError, ValueError):
    pass


class CorrespondenceError(ColrepError, ValueError):
    """Pattern field order does not match the primary codebook size."""


class ReductionError(ColrepError, ValueError):
    pass


class NormalizationError(ColrepError, ValueError):
    pass


class DomainError(ColrepError, ValueError):
    pass


class PatternIndexError(ColrepError, IndexError):
    pass


class ConfigError(ColrepError, ValueError):
    pass


class MatrixFormatError(ColrepError, ValueError):
    pass
