"""Exception types shared across the package."""

from __future__ import annotations


class NaselectError(Exception):
    """Base class for all package errors."""


class UsageError(NaselectError):
    """Bad command line (raised instead of argparse's SystemExit)."""


class ValidationError(NaselectError):
    """Malformed input: file contents, construction arguments, index ranges."""


class InstanceMismatchError(NaselectError):
    """Operands belong to different instances; values are never coerced."""


class BudgetExceededError(NaselectError):
    """An enumeration would exceed its configured budget."""


class InfeasibleError(NaselectError):
    """Step-by-step conditions fail: the composed multiselector has empty values.

    `empty_omegas` lists the offending disturbance indices; `witness` is the
    composed multiselector itself, kept for diagnosis.
    """

    def __init__(self, message: str, empty_omegas: tuple[int, ...] = (), witness=None):
        super().__init__(message)
        self.empty_omegas = empty_omegas
        self.witness = witness


class ProcedureStuckError(NaselectError):
    """A step-by-step run found no admissible trajectory at some step."""

    def __init__(self, message: str, step: int, omega: int):
        super().__init__(message)
        self.step = step
        self.omega = omega


class AdversaryError(NaselectError):
    """An adversary revealed a prefix no admissible disturbance matches."""
