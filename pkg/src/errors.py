"""Exception hierarchy shared by the pipeline, the sampler and the CLI.

Each family maps to one CLI exit code: validation failures exit with 2,
numerical aborts with 3, integrity and other I/O failures with 4.
"""
from typing import List, Optional


class BvarError(Exception):
    exit_code = 1


class ValidationFailure(BvarError, ValueError):
    exit_code = 2


class SchemaError(ValidationFailure):
    def __init__(self, message: str, mnemonic: Optional[str] = None):
        super().__init__(message)
        self.mnemonic = mnemonic


class ParseError(ValidationFailure):
    def __init__(self, message: str, row: Optional[int] = None, column: Optional[str] = None):
        location = []
        if row is not None:
            location.append(f"row {row}")
        if column is not None:
            location.append(f"column '{column}'")
        if location:
            message = f"{message} (at {', '.join(location)})"
        super().__init__(message)
        self.row = row
        self.column = column


class DomainError(ValidationFailure):
    def __init__(self, message: str, date: Optional[str] = None):
        super().__init__(message)
        self.date = date


class LengthError(ValidationFailure):
    pass


class CoverageError(ValidationFailure):
    def __init__(self, variable: str, span: str):
        super().__init__(f"Series '{variable}' does not cover the sample: missing {span}")
        self.variable = variable
        self.span = span


class DimensionError(ValidationFailure):
    pass


class SchemeError(ValidationFailure):
    def __init__(self, violations: List[str]):
        super().__init__("Restriction scheme is invalid:\n  - " + "\n  - ".join(violations))
        self.violations = violations


class NumericalAbort(BvarError, RuntimeError):
    exit_code = 3

    def __init__(self, iteration: int, block: str, detail: str = ""):
        message = f"Numerical failure at iteration {iteration} in block '{block}'"
        if detail:
            message += f": {detail}"
        super().__init__(message)
        self.iteration = iteration
        self.block = block


class IntegrityError(BvarError, OSError):
    exit_code = 4
