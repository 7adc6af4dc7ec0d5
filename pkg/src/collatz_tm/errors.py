"""Exception types shared across the package."""


class CollatzTMError(Exception):
    """Base class for every error raised by this package."""


class InvalidInputError(CollatzTMError, ValueError):
    """A tape word or integer input is outside the accepted domain."""


class UsageError(CollatzTMError):
    """An operation was called in a state where it is not meaningful."""


class MachineDefinitionError(CollatzTMError, ValueError):
    """A machine description is syntactically or structurally invalid.

    ``line`` and ``column`` are 1-based and ``None`` when the problem is not
    tied to a position in a source text.
    """

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "")
            message = f"{where}: {message}"
        super().__init__(message)


class DomainError(CollatzTMError, ValueError):
    """An arithmetic function was applied outside its domain."""
