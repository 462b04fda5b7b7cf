"""Exception hierarchy.

Every error raised by the library derives from :class:`CausalWaveletError`.
The three intermediate classes map onto the CLI exit codes: usage errors
exit with 1, data errors with 2, numeric errors with 3.
"""


class CausalWaveletError(Exception):
    exit_code = 3


class UsageError(CausalWaveletError, ValueError):
    exit_code = 1


class DataError(CausalWaveletError):
    exit_code = 2


class NumericError(CausalWaveletError, ArithmeticError):
    exit_code = 3


# parameters / configuration
class InvalidParam(UsageError):
    pass


class EmptyGrid(UsageError):
    pass


class ScaleOutOfRange(UsageError):
    pass


# numerics
class NonConvergence(NumericError):
    pass


class SupportUnbounded(NumericError):
    pass


# input data
class ParseError(DataError):
    def __init__(self, row, reason):
        self.row = row
        self.reason = reason
        super().__init__(f"row {row}: {reason}")


class NonMonotoneDates(DataError):
    pass


class EmptyFile(DataError):
    pass


class GapRunTooLong(DataError):
    def __init__(self, position, run_length, max_run):
        self.position = position
        self.run_length = run_length
        self.max_run = max_run
        super().__init__(
            f"gap run of {run_length} samples at index {position} exceeds max_run={max_run}"
        )


class GapFractionExceeded(DataError):
    pass


class GappySeries(DataError):
    pass


class LengthMismatch(DataError):
    pass


class NotNormalized(DataError):
    pass


class MalformedGrid(DataError):
    pass
