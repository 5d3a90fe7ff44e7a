"""Exception hierarchy.

Every error raised on purpose by the package derives from :class:`OopsiError`.
The CLI maps the two families below onto its exit codes: input problems
(``ConfigError``, ``DomainError``, ``TraceFormatError``) exit with 2,
``NumericalError`` and its subclasses exit with 3.
"""


class OopsiError(Exception):
    """Base class for all package errors."""


class ConfigError(OopsiError, ValueError):
    """A configuration field violates its invariant."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class DomainError(OopsiError, ValueError):
    """An argument lies outside the domain of the operation."""


class DegenerateInputError(DomainError):
    """The input carries no usable information (e.g. a constant trace)."""


class DegenerateUpdateError(DegenerateInputError):
    """Parameter update undefined because the inferred train sums to zero."""


class TraceFormatError(OopsiError, ValueError):
    """A trace file could not be parsed."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where += f"{path}"
        if line is not None:
            where += f":{line}" if where else f"line {line}"
        super().__init__(f"{where}: {message}" if where else message)


class NumericalError(OopsiError, ArithmeticError):
    """The solver produced a non-finite value or otherwise broke down."""


class SingularMatrixError(NumericalError):
    """Zero pivot met during a tridiagonal solve."""


class InfeasibleError(NumericalError):
    """An iterate left the interior of the feasible set (MC <= 0)."""
