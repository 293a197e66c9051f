"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: ConfigError -> 2, NumericalError -> 3,
BranchCapError -> 4.
"""

from __future__ import annotations


class MatgravError(Exception):
    """Base class for all package errors."""


class ConfigError(MatgravError):
    """Invalid run configuration; the message names the offending key."""

    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"config key '{key}': {message}")


class DimensionMismatchError(MatgravError, ValueError):
    """Operands live on incompatible spaces."""


class ValidationError(MatgravError, ValueError):
    """A domain value violates one of its type invariants."""


class NumericalError(MatgravError):
    """A numerical routine failed or produced an untrustworthy result."""


class EigensolverError(NumericalError):
    """Dense eigensolver did not converge (numerically invalid input)."""


class TraceDriftError(NumericalError):
    """Master-equation integration lost more trace than allowed."""


class BranchCapError(MatgravError):
    """Exhaustive branch enumeration would exceed the configured cap."""
