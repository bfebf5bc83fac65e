"""Exception types raised across the package."""


class ECMError(Exception):
    """Base class for all package errors."""


class ParseError(ECMError):
    def __init__(self, message: str, row: int | None = None, col: int | None = None):
        loc = []
        if row is not None:
            loc.append(f"row {row}")
        if col is not None:
            loc.append(f"col {col}")
        super().__init__(f"{message} ({', '.join(loc)})" if loc else message)
        self.row = row
        self.col = col


class DimensionMismatch(ECMError, ValueError):
    pass


class InvalidParams(ECMError, ValueError):
    pass


class InvalidSpec(ECMError, ValueError):
    pass


class InvalidConfig(ECMError, ValueError):
    pass


class UnknownName(ECMError, KeyError):
    pass


class UnknownParam(ECMError, KeyError):
    pass


class EmptyFront(ECMError, ValueError):
    pass


class TooFewPoints(ECMError, ValueError):
    pass


class LengthMismatch(ECMError, ValueError):
    pass


class MethodSetMismatch(ECMError, ValueError):
    pass
