"""Exception types shared across the package."""


class FieldMismatchError(ValueError):
    """Raised when values from different fields are combined."""


class UnsupportedError(ValueError):
    """Raised for unsupported dimension/field combinations."""


class ParseError(ValueError):
    """Malformed textual input. Carries an optional 1-based line and column."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class BudgetExceeded(RuntimeError):
    """The chromatic number exceeds the requested colour budget."""

    def __init__(self, max_k: int, upper_bound: int):
        self.max_k = max_k
        self.upper_bound = upper_bound
        super().__init__(f"budget exceeded: chi > {max_k} (best upper bound {upper_bound})")


class TilingError(ValueError):
    """Invalid tiling, or a point not covered by any polygon."""
