"""Exception types shared across the package.

Every error raised on purpose derives from CurlearnError so callers (and the
CLI) can tell contract violations apart from genuine bugs.
"""


class CurlearnError(Exception):
    """Base class for all deliberate errors raised by this package."""


class ParseError(CurlearnError):
    """A file could not be parsed; the message names the offending line."""


class ValidationError(CurlearnError):
    """Parsed content violates a documented constraint."""


class CoverageError(CurlearnError):
    """A required sample or column is missing from an input."""


class AlignmentError(CurlearnError):
    """Two inputs that must share sample ids and order do not."""


class ArgumentError(CurlearnError):
    """An argument is out of its documented range or otherwise unusable."""


class DegenerateInputError(CurlearnError):
    """An input is formally valid but leaves the operation undefined."""


class DegenerateBatchError(DegenerateInputError):
    """Every sample weight in a batch is zero."""


class UnsupportedInputError(CurlearnError):
    """The input is missing information a requested computation needs."""


class UndefinedTrendError(CurlearnError):
    """A trend slope was requested for fewer than two bins."""
