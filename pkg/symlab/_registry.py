from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import TYPE_CHECKING, Any, ClassVar

import numpy as np

from symlab._constants import FD_PROBES, FD_RELATIVE_TOL, FD_STEP
from symlab._trig import Nonlinearity
from symlab.exceptions import ValidationError

if TYPE_CHECKING:
    from collections.abc import Callable, Mapping

    from numpy.typing import NDArray

_PROBE_RADIUS = 4.0


def _log_cosh(x: NDArray[np.float64]) -> NDArray[np.float64]:
    return np.logaddexp(x, -x) - math.log(2.0)


def linear(alpha: float = 2.5) -> Nonlinearity:
    return Nonlinearity(
        g=lambda x: alpha * x,
        g_prime=lambda x: np.full_like(x, alpha),
        description=f"{alpha:g}*x",
        primitive=lambda x: alpha * x**2 / 2.0,
        coercive_primitive=alpha < 0,
    )


def mixed_sine(alpha: float = 2.5, beta: float = 0.5) -> Nonlinearity:
    return Nonlinearity(
        g=lambda x: alpha * x + beta * np.sin(x),
        g_prime=lambda x: alpha + beta * np.cos(x),
        description=f"{alpha:g}*x + {beta:g}*sin(x)",
        primitive=lambda x: alpha * x**2 / 2.0 + beta * (1.0 - np.cos(x)),
        coercive_primitive=alpha < 0,
    )


def sine(amplitude: float = 1.0) -> Nonlinearity:
    return Nonlinearity(
        g=lambda x: amplitude * np.sin(x),
        g_prime=lambda x: amplitude * np.cos(x),
        c_g=abs(amplitude),
        description=f"{amplitude:g}*sin(x)",
        primitive=lambda x: amplitude * (1.0 - np.cos(x)),
        coercive_primitive=False,
    )


def cubic(a: float = 1.0) -> Nonlinearity:
    return Nonlinearity(
        g=lambda x: a * x**3,
        g_prime=lambda x: 3.0 * a * x**2,
        description=f"{a:g}*x^3",
        primitive=lambda x: a * x**4 / 4.0,
        coercive_primitive=a < 0,
    )


def tanh(a: float = 1.0, b: float = 1.0) -> Nonlinearity:
    if b <= 0:
        raise ValidationError("tanh width b must be positive", context={"b": b})
    return Nonlinearity(
        g=lambda x: a * np.tanh(x / b),
        g_prime=lambda x: a / b / np.cosh(x / b) ** 2,
        c_g=abs(a),
        description=f"{a:g}*tanh(x/{b:g})",
        primitive=lambda x: a * b * _log_cosh(x / b),
        coercive_primitive=a < 0,
    )


def tanh_ramp(alpha: float = 3.0, beta: float = 3.0) -> Nonlinearity:
    """g(x) = αx + β log cosh x, so that g' = α + β tanh x sweeps (α - |β|, α + |β|)."""
    return Nonlinearity(
        g=lambda x: alpha * x + beta * _log_cosh(x),
        g_prime=lambda x: alpha + beta * np.tanh(x),
        description=f"{alpha:g}*x + {beta:g}*log(cosh(x))",
        coercive_primitive=alpha + abs(beta) < 0,
    )


def rational_decay(a: float = 1.0) -> Nonlinearity:
    """g(x) = -a x/(1+x²): bounded by |a|/2 with G(x) = -(a/2) ln(1+x²)."""
    return Nonlinearity(
        g=lambda x: -a * x / (1.0 + x**2),
        g_prime=lambda x: a * (x**2 - 1.0) / (1.0 + x**2) ** 2,
        c_g=abs(a) / 2.0,
        description=f"-{a:g}*x/(1+x^2)",
        primitive=lambda x: -a / 2.0 * np.log1p(x**2),
        coercive_primitive=a > 0,
    )


@dataclass(frozen=True, slots=True)
class NonlinearityFamily:
    """A named, parametrized family of nonlinearities."""

    name: str
    factory: Callable[..., Nonlinearity]
    defaults: Mapping[str, float] = field(default_factory=dict)

    def parameters(self, overrides: Mapping[str, float] | None = None) -> dict[str, float]:
        unknown = set(overrides or {}) - set(self.defaults)
        if unknown:
            raise ValidationError(
                f"Unknown parameters for {self.name!r}: {sorted(unknown)}",
                context={"name": self.name, "unknown": sorted(unknown), "known": sorted(self.defaults)},
            )
        return {**self.defaults, **{key: float(value) for key, value in (overrides or {}).items()}}


@dataclass(frozen=True, slots=True)
class NonlinearityRegistryEntry:
    """A family member with bound parameters."""

    name: str
    parameters: dict[str, float]
    nonlinearity: Nonlinearity

    @property
    def analytic_flags(self) -> dict[str, bool]:
        return {
            "bounded": self.nonlinearity.c_g is not None,
            "coercive_primitive": bool(self.nonlinearity.coercive_primitive),
        }

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "parameters": dict(sorted(self.parameters.items())),
            "analytic_flags": self.analytic_flags,
            "c_g": self.nonlinearity.c_g,
            "description": self.nonlinearity.description,
            "closed_form_primitive": self.nonlinearity.primitive is not None,
        }


@dataclass(frozen=True, slots=True)
class AuditReport:
    name: str
    max_relative_error: float
    worst_probe: float
    n_probes: int
    step: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_relative_error <= self.tol

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "max_relative_error": self.max_relative_error,
            "worst_probe": self.worst_probe,
            "n_probes": self.n_probes,
            "step": self.step,
            "tol": self.tol,
            "passed": self.passed,
        }


def finite_difference_audit(
    entry: NonlinearityRegistryEntry,
    *,
    step: float = FD_STEP,
    n_probes: int = FD_PROBES,
    tol: float = FD_RELATIVE_TOL,
) -> AuditReport:
    """Compare g' against centered differences of g at equispaced probes in [-4, 4].

    The error at a probe is |g' - (g(x+h) - g(x-h))/2h| / max(|g'|, 1).
    """
    nl = entry.nonlinearity
    probes = np.linspace(-_PROBE_RADIUS, _PROBE_RADIUS, n_probes)
    centered = (nl.evaluate(probes + step) - nl.evaluate(probes - step)) / (2.0 * step)
    exact = nl.derivative(probes)
    errors = np.abs(exact - centered) / np.maximum(np.abs(exact), 1.0)
    worst = int(np.argmax(errors))
    return AuditReport(
        name=entry.name,
        max_relative_error=float(errors[worst]),
        worst_probe=float(probes[worst]),
        n_probes=n_probes,
        step=step,
        tol=tol,
    )


class NonlinearityRegistry:
    """Named nonlinearity families available to experiments.

    Every entry is audited against finite differences the first time it is built; entries failing
    the audit are rejected.
    """

    _default_families: ClassVar[dict[str, NonlinearityFamily]] = {
        family.name: family
        for family in (
            NonlinearityFamily("linear", linear, {"alpha": 2.5}),
            NonlinearityFamily("mixed_sine", mixed_sine, {"alpha": 2.5, "beta": 0.5}),
            NonlinearityFamily("sine", sine, {"amplitude": 1.0}),
            NonlinearityFamily("cubic", cubic, {"a": 1.0}),
            NonlinearityFamily("tanh", tanh, {"a": 1.0, "b": 1.0}),
            NonlinearityFamily("tanh_ramp", tanh_ramp, {"alpha": 3.0, "beta": 3.0}),
            NonlinearityFamily("rational_decay", rational_decay, {"a": 1.0}),
        )
    }
    _registered_families: ClassVar[dict[str, NonlinearityFamily]] = {}

    @classmethod
    def names(cls) -> list[str]:
        return sorted({**cls._default_families, **cls._registered_families})

    @classmethod
    def get_family(cls, name: str) -> NonlinearityFamily:
        """Look up a family; registered families shadow the built-in ones.

        Raises:
            ValidationError: If no family has that name.
        """
        family = cls._registered_families.get(name) or cls._default_families.get(name)
        if family is None:
            raise ValidationError(
                f"Unknown nonlinearity {name!r}", context={"name": name, "available": cls.names()}
            )
        return family

    @classmethod
    def get(cls, name: str, params: Mapping[str, float] | None = None) -> NonlinearityRegistryEntry:
        """Build and audit a family member.

        Raises:
            ValidationError: If the family or a parameter is unknown, or g' fails the audit.
        """
        family = cls.get_family(name)
        return cls._build(name, tuple(sorted(family.parameters(params).items())))

    @classmethod
    @lru_cache
    def _build(cls, name: str, params: tuple[tuple[str, float], ...]) -> NonlinearityRegistryEntry:
        parameters = dict(params)
        entry = NonlinearityRegistryEntry(name, parameters, cls.get_family(name).factory(**parameters))
        audit = finite_difference_audit(entry)
        if not audit.passed:
            raise ValidationError(f"Derivative of {name!r} fails the finite-difference audit", context=audit.to_dict())
        return entry

    @classmethod
    def audit(cls, name: str, params: Mapping[str, float] | None = None) -> AuditReport:
        """Run the finite-difference audit without rejecting the entry."""
        family = cls.get_family(name)
        parameters = family.parameters(params)
        return finite_difference_audit(NonlinearityRegistryEntry(name, parameters, family.factory(**parameters)))

    @classmethod
    def add_family(cls, family: NonlinearityFamily) -> None:
        cls._registered_families[family.name] = family
        cls._build.cache_clear()

    @classmethod
    def remove_family(cls, name: str) -> None:
        if cls._registered_families.pop(name, None) is not None:
            cls._build.cache_clear()
