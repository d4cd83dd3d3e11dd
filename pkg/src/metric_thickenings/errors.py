"""Exception types shared across the package."""


class StructuralError(ValueError):
    """Inputs have incompatible shapes (matrix vs. labels, plan vs. measures)."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class PreconditionError(ValueError):
    """A documented precondition of the operation does not hold."""


class InputError(ValueError):
    """A data file could not be parsed.

    ``line`` and ``column`` are 1-based and may be ``None`` when the
    problem is not tied to a position.
    """

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)
