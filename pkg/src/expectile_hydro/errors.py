"""Exception hierarchy.

Every error raised on bad input derives from :class:`ValidationError` so the
command line can map it to exit status 1; I/O problems stay ``OSError``.
"""


class ValidationError(ValueError):
    """Base class for input/contract violations."""


class InvalidArgumentError(ValidationError):
    pass


class EmptyInputError(ValidationError):
    pass


class DomainError(ValidationError):
    pass


class OrderingError(ValidationError):
    pass


class AlignmentError(ValidationError):
    pass


class CoverageError(ValidationError):
    pass


class ContiguityError(ValidationError):
    pass


class ParseError(ValidationError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class SplitError(ValidationError):
    def __init__(self, message, interval=None):
        if interval is not None:
            message = f"{interval}: {message}"
        super().__init__(message)
        self.interval = interval


class ScreeningError(ValidationError):
    pass


class ConfigError(ValidationError):
    pass
