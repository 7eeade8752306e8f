"""Exception hierarchy. Every error raised by the library derives from QRenyiError."""


class QRenyiError(Exception):
    pass


class InputError(QRenyiError, ValueError):
    """Invalid user input (maps to CLI exit status 1)."""


class NonHermitian(InputError):
    pass


class NotPSD(InputError):
    pass


class ZeroOperator(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class DimensionCap(InputError):
    pass


class PartitionMismatch(InputError):
    pass


class UnknownLabel(InputError):
    pass


class InvalidAlphaRange(InputError):
    pass


class UnsupportedAlphaVariant(InputError):
    pass


class EmptySupportMeet(InputError):
    pass


class InfiniteDivergence(InputError):
    pass


class NonConvergence(QRenyiError, RuntimeError):
    """An optimizer stopped with its certificate gap above tolerance."""

    def __init__(self, message, gap=None, value=None):
        super().__init__(message)
        self.gap = gap
        self.value = value
