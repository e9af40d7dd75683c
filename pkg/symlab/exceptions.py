from __future__ import annotations

from json import dumps
from typing import Any

import numpy as np


class SymlabError(Exception):
    """Base exception for all symlab errors."""

    __slots__ = ("context",)

    context: Any
    """The context of the error."""

    def __init__(self, message: str, *, context: Any = None) -> None:
        self.context = context
        super().__init__(message)

    def _serialize_context(self, obj: Any) -> Any:
        """Recursively serialize context objects to ensure JSON compatibility."""
        if isinstance(obj, np.generic):
            return obj.item()
        if isinstance(obj, np.ndarray):
            return obj.tolist()
        if isinstance(obj, dict):
            return {k: self._serialize_context(v) for k, v in obj.items()}
        if isinstance(obj, (list, tuple)):
            return [self._serialize_context(x) for x in obj]
        if isinstance(obj, Exception):
            return {
                "type": obj.__class__.__name__,
                "message": str(obj),
            }
        return obj

    def __str__(self) -> str:
        """Return a string representation of the exception."""
        if self.context:
            serialized_context = self._serialize_context(self.context)
            ctx = f"\n\nContext: {dumps(serialized_context)}"
        else:
            ctx = ""

        return f"{self.__class__.__name__}: {super().__str__()}{ctx}"


class ValidationError(SymlabError):
    """Raised when an argument or value fails validation."""

    __slots__ = ()


class PreconditionViolationError(ValidationError):
    """Raised when a hypothesis required by an operation does not hold."""

    __slots__ = ()


class ConfigError(SymlabError):
    """Raised when an experiment configuration cannot be loaded."""

    __slots__ = ()


class ParseError(ConfigError):
    """Raised when a configuration file cannot be read or parsed."""

    __slots__ = ()


class SchemaError(ConfigError):
    """Raised when a configuration does not match the schema.

    The offending field path is available as ``context["path"]``.
    """

    __slots__ = ()

    @classmethod
    def at_path(cls, path: str, message: str, **extra: Any) -> SchemaError:
        """Creates a SchemaError that points at a configuration field.

        Args:
            path: The field path, e.g. ``$.break.r``.
            message: Human readable description of the problem.
            **extra: Additional context fields.

        Returns:
            SchemaError: The error, with the path stored in its context.
        """
        return cls(f"{message} (at `{path}`)", context={"path": path, **extra})


class IoError(SymlabError):
    """Raised when records cannot be written."""

    __slots__ = ()


class NumericalError(SymlabError):
    """Base class for failures of the numerical machinery."""

    __slots__ = ()


class AliasingError(NumericalError):
    """Raised when a grid is too coarse for the requested truncation order."""

    __slots__ = ()


class ResonantShiftError(NumericalError):
    """Raised when a resolvent shift lies on (or too close to) an eigenvalue j²."""

    __slots__ = ()


class BelowSpectrumError(NumericalError):
    """Raised when a shift lies below the lowest eigenvalue λ_0 = 0."""

    __slots__ = ()


class GapViolationError(NumericalError):
    """Raised when a derivative range is not pinched inside a single spectral gap."""

    __slots__ = ()


class MaxIterExceededError(NumericalError):
    """Raised when an iterative solver does not reach its tolerance."""

    __slots__ = ()


class StagnationError(NumericalError):
    """Raised when no damped Newton step decreases the residual."""

    __slots__ = ()


class SingularJacobianError(NumericalError):
    """Raised when the linearization is numerically singular."""

    __slots__ = ()


class PostHocRangeViolationError(NumericalError):
    """Raised when g'(u(t)) leaves the certified interval on a computed solution."""

    __slots__ = ()


class NoWindowError(NumericalError):
    """Raised when no certified window exists around a center point."""

    __slots__ = ()


class NoWitnessError(NumericalError):
    """Raised when g' never enters one of the two windows around an eigenvalue."""

    __slots__ = ()
