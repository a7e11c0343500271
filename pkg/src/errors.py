"""Exception hierarchy shared by every noun2verb module.

The CLI maps these onto exit codes: usage problems exit 1, FormatError exits 2,
NumericalError exits 3.
"""

from typing import Optional


class Noun2VerbError(Exception):
    """Base class for all noun2verb errors."""


class ContractError(Noun2VerbError, ValueError):
    """A documented precondition of an operation was violated."""


class DimensionError(ContractError):
    """Tensor shapes do not agree."""


class TargetIndexError(ContractError, IndexError):
    """A class index lies outside the distribution it indexes."""


class FormatError(Noun2VerbError, ValueError):
    """An input file does not follow its documented grammar."""

    def __init__(self, message: str, path: Optional[str] = None, line_number: Optional[int] = None):
        self.path = path
        self.line_number = line_number
        location = ""
        if path is not None:
            location = f"{path}"
            if line_number is not None:
                location += f":{line_number}"
            location += ": "
        elif line_number is not None:
            location = f"line {line_number}: "
        super().__init__(f"{location}{message}")


class NumericalError(Noun2VerbError, ArithmeticError):
    """A computation produced NaN or infinite values."""
