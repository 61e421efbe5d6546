"""Exception hierarchy shared by every layer of the library."""


class RecollemError(Exception):
    """Base class for all library errors."""


class SchemaError(RecollemError, ValueError):
    """Malformed input data (JSON files, structure constants, shapes)."""

    def __init__(self, message, path=None):
        self.path = path
        if path:
            message = f"{path}: {message}"
        super().__init__(message)


class ShapeError(RecollemError, ValueError):
    """Matrix dimensions do not compose."""


class FieldMismatchError(RecollemError, ArithmeticError):
    """Operands live over different ground fields."""


class MatrixSizeError(RecollemError):
    """A matrix exceeds the configured entry cap."""


class LookupFailure(RecollemError, KeyError):
    """Unknown object id or basis element."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class CategoryMismatchError(RecollemError, TypeError):
    """Representations or maps over different categories were combined."""


class InfiniteDimensionError(RecollemError):
    """A quiver presentation does not become finite within the nilpotency bound."""


class PreconditionError(RecollemError, ValueError):
    """An operation was called on inputs outside its domain."""


class StateError(RecollemError):
    """An operation was called before a required check was performed."""


class ResolutionLengthError(RecollemError):
    """A resolution did not terminate within the configured cap."""


class NonConvergenceError(RecollemError):
    """An iterative localization did not reach a fixpoint."""

    def __init__(self, message, steps=None):
        self.steps = steps
        super().__init__(message)


class InternalConsistencyError(RecollemError):
    """A mathematical identity that must hold failed; signals a bug, never bad input."""
