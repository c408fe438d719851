"""Exception hierarchy.

Physics-invariant violations and configuration problems are kept apart because
the CLI maps them to different exit codes (1 and 2 respectively).
"""


class SusyQMError(Exception):
    """Base class for all package errors."""


class PhysicsViolationError(SusyQMError):
    """A physical invariant failed beyond tolerance."""


class DegeneracyError(PhysicsViolationError):
    """Partner spectra failed to pair; carries the offending level."""

    def __init__(self, message, level=None):
        super().__init__(message)
        self.level = level


class SignConditionError(PhysicsViolationError):
    """Superpotential sign condition fails: no normalizable zero mode."""


class IndeterminateSignError(SignConditionError):
    """W vanishes at a boundary node, sign condition undecidable there."""


class ConfigError(SusyQMError):
    """Invalid or incomplete run configuration."""


class GridMismatchError(SusyQMError, ValueError):
    """Operands live on different grids."""


class ZeroNormError(SusyQMError, ValueError):
    """Cannot normalize a zero vector."""
