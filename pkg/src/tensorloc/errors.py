"""Exception hierarchy.

Two families matter to callers: :class:`InvalidInput` (malformed data,
CLI exit code 2) and :class:`PreconditionViolated` (well-formed data that
a bound or test does not apply to, CLI exit code 3).
"""


class TensorLocError(Exception):
    pass


class InvalidInput(TensorLocError, ValueError):
    pass


class IndexOutOfRange(InvalidInput, IndexError):
    pass


class DuplicateEntry(InvalidInput):
    pass


class StorageCapExceeded(InvalidInput):
    pass


class UnsortedKey(InvalidInput):
    pass


class DuplicateKey(InvalidInput):
    pass


class LengthMismatch(InvalidInput):
    pass


class WindowDegenerate(InvalidInput):
    pass


class TensorFormatError(InvalidInput):
    pass


class DimensionTooLargeForExhaustiveCheck(TensorLocError):
    pass


class PreconditionViolated(TensorLocError, ValueError):
    pass


class NotNonnegative(PreconditionViolated):
    pass


class NotZTensor(PreconditionViolated):
    pass


class NotConverged(TensorLocError):
    """Raised by the oracle in strict mode; carries the best estimate."""

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate
