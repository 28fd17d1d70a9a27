"""Exception hierarchy shared by every module."""

from __future__ import annotations


class SumFreeError(Exception):
    """Base class for all package errors."""


class ValidationError(SumFreeError, ValueError):
    """Invalid parameters or malformed input data."""


class NotTameError(SumFreeError):
    """A scaled distribution failed one of the tameness conditions."""

    def __init__(self, message: str, report=None, level: int | None = None):
        super().__init__(message)
        self.report = report
        self.level = level


class ConvergenceError(SumFreeError):
    """An iterative procedure hit its iteration cap."""

    def __init__(self, message: str, residual: float, iterations: int):
        super().__init__(f"{message} (residual={residual:.3e}, iterations={iterations})")
        self.residual = residual
        self.iterations = iterations


class PrecisionError(SumFreeError):
    """A strict inequality holds with too little margin for the working precision."""


class ResourceCapError(SumFreeError):
    """An enumeration would exceed its configured size cap."""
