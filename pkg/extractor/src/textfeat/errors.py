"""Exception types for the extraction pipeline."""


class TextfeatError(Exception):
    """Base class for all deliberate errors raised by this package."""


class ParseError(TextfeatError):
    """An input file could not be parsed; the message names the line."""


class ValidationError(TextfeatError):
    """Parsed content violates the documented contract."""


class ArgumentError(TextfeatError):
    """An option or argument is out of its documented range."""
