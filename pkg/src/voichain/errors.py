"""Exception hierarchy."""


class VoiError(Exception):
    """Base class for all library errors."""


class NotPSD(VoiError):
    pass


class SingularSignalCovariance(VoiError):
    pass


class SingularOperator(VoiError):
    """Raised where an invertible posterior operator is required."""


class DimensionMismatch(VoiError, ValueError):
    pass


class UnsupportedSet(VoiError):
    pass


class InsufficientData(VoiError):
    pass


class MatrixFormatError(VoiError, ValueError):
    pass
