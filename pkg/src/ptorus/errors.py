"""Exception hierarchy; the CLI maps these onto exit codes."""


class PtorusError(Exception):
    """Base class for library errors."""


class DomainError(PtorusError, ValueError):
    """Input outside the domain of an operation (CLI exit code 2)."""


class EmptyLaminationError(DomainError):
    pass


class ParseError(DomainError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class ClassificationError(DomainError):
    """Operation requires a different Nielsen-Thurston type."""


class SolverError(PtorusError, ArithmeticError):
    """Numerical solver failed (CLI exit code 3)."""

    def __init__(self, message: str, trace=None):
        super().__init__(message)
        self.trace = list(trace or [])


class ToleranceError(SolverError):
    """An iterative estimate did not settle within tolerance."""
