"""Exception classes shared across the package.

Each class carries a stable ``code`` string; the CLI maps codes to exit
codes (input errors -> 2, precondition errors -> 3, cap/limit errors -> 4).
"""


class TameTorusError(Exception):
    """Base class for all package-specific errors."""

    code = "ERROR"


class InputError(TameTorusError, ValueError):
    """Invalid user-supplied input (CLI exit code 2)."""

    code = "INPUT"


class MalformedInputError(InputError):
    code = "MALFORMED"


class DimensionInputError(InputError):
    code = "DIMENSION"


class NonIntegerInputError(InputError):
    code = "NONINTEGER"


class PreconditionError(TameTorusError, ValueError):
    """Operation undefined for this input (CLI exit code 3)."""

    code = "PRECONDITION"


class DeterminantNotUnitError(PreconditionError):
    """Cascade requested for a matrix with |det| != 1."""

    code = "DETERMINANT_NOT_UNIT"


class StreamExhaustedError(PreconditionError):
    """Vector stream could not supply enough admissible vectors."""

    code = "STREAM_EXHAUSTED"


class CapExceededError(TameTorusError, ValueError):
    """A documented cap or bound was exceeded (CLI exit code 4)."""

    code = "CAP_EXCEEDED"


class DimensionMismatchError(TameTorusError, ValueError):
    """Operands have incompatible dimensions."""

    code = "DIMENSION_MISMATCH"
