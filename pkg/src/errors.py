"""
Exception hierarchy shared by every toolkit module.
"""

from typing import Optional


class ToolkitError(Exception):
    """Base class for all toolkit failures"""


class InputError(ToolkitError):
    """A document or argument violates its schema or a type invariant"""

    def __init__(self, message: str, location: Optional[str] = None):
        self.location = location or ""
        self.message = message
        super().__init__(f"{self.location}: {message}" if location else message)

    def relocate(self, prefix: str) -> "InputError":
        """The same error with its location nested under ``prefix``."""
        return type(self)(self.message, prefix + self.location)


class QuiverError(InputError):
    """Invalid quiver: bad vertex, loop or oriented cycle"""


class AlgebraError(InputError):
    """Structure constants fail associativity or the unit axioms"""


class ModuleError(InputError):
    """Action matrices or maps fail their defining relations"""


class FieldMismatchError(ToolkitError):
    """Operands live over different fields"""


class AlgebraMismatchError(ToolkitError):
    """Operands are modules over different algebras"""


class UnsupportedFieldError(ToolkitError):
    """The operation is only available over finite prime fields"""


class PreconditionError(ToolkitError):
    """A theorem check was asked to run outside its hypotheses"""


class DecompositionError(ToolkitError):
    """No splitting element found within the trial budget"""


class BudgetExceeded(ToolkitError):
    """An enumeration visited more candidates than allowed"""
