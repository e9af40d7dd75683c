"""Truncated real trigonometric series on [0, 2π] and their H¹/L² geometry.

A :class:`TrigPoly` of order J stores

    u(t) = a0 + Σ_{j=1..J} a_j cos(jt) + b_j sin(jt)

as real coefficient arrays. Inner products are evaluated in closed form via Parseval, and
pointwise compositions g∘u are computed pseudo-spectrally on an equispaced grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, Literal

import numpy as np
from scipy import fft, integrate

from symlab._constants import DEFAULT_GRID_SIZE, PERIODICITY_RELATIVE_TOL
from symlab.exceptions import AliasingError, ValidationError

if TYPE_CHECKING:
    from collections.abc import Callable, Mapping

    from numpy.typing import ArrayLike, NDArray

Which = Literal["g", "g_prime"]

CONSTANT: Literal["constant"] = "constant"


def _frozen_array(values: ArrayLike) -> NDArray[np.float64]:
    array = np.array(values, dtype=np.float64)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, slots=True, eq=False)
class TrigPoly:
    """A truncated real Fourier series of order J = len(cos_coeffs)."""

    a0: float
    """Coefficient of the constant mode."""
    cos_coeffs: NDArray[np.float64]
    """Entry j-1 is the coefficient of cos(jt)."""
    sin_coeffs: NDArray[np.float64]
    """Entry j-1 is the coefficient of sin(jt)."""

    def __post_init__(self) -> None:
        cos_coeffs = _frozen_array(self.cos_coeffs)
        sin_coeffs = _frozen_array(self.sin_coeffs)
        if cos_coeffs.ndim != 1 or cos_coeffs.shape != sin_coeffs.shape:
            raise ValidationError(
                "cos_coeffs and sin_coeffs must be 1-d arrays of identical length",
                context={"cos_shape": cos_coeffs.shape, "sin_shape": sin_coeffs.shape},
            )
        if cos_coeffs.size < 1:
            raise ValidationError("Truncation order J must be a positive integer")
        object.__setattr__(self, "a0", float(self.a0))
        object.__setattr__(self, "cos_coeffs", cos_coeffs)
        object.__setattr__(self, "sin_coeffs", sin_coeffs)

    @property
    def order(self) -> int:
        """The truncation order J."""
        return int(self.cos_coeffs.size)

    @property
    def modes(self) -> NDArray[np.int64]:
        """The mode indices 1..J."""
        return np.arange(1, self.order + 1)

    @classmethod
    def zeros(cls, order: int) -> TrigPoly:
        return cls(0.0, np.zeros(order), np.zeros(order))

    @classmethod
    def constant(cls, value: float, order: int = 1) -> TrigPoly:
        return cls(value, np.zeros(order), np.zeros(order))

    @classmethod
    def from_modes(
        cls,
        order: int,
        *,
        a0: float = 0.0,
        cos: Mapping[int, float] | None = None,
        sin: Mapping[int, float] | None = None,
    ) -> TrigPoly:
        """Build a series from sparse ``{j: coefficient}`` mappings.

        Args:
            order: The truncation order J.
            a0: The constant mode.
            cos: Coefficients of cos(jt), keyed by j.
            sin: Coefficients of sin(jt), keyed by j.

        Raises:
            ValidationError: If a mode index lies outside 1..J.

        Returns:
            The series.
        """
        cos_coeffs = np.zeros(order)
        sin_coeffs = np.zeros(order)
        for target, values in ((cos_coeffs, cos or {}), (sin_coeffs, sin or {})):
            for j, value in values.items():
                if not 1 <= j <= order:
                    raise ValidationError(f"Mode {j} is outside 1..{order}", context={"j": j, "J": order})
                target[j - 1] = value
        return cls(a0, cos_coeffs, sin_coeffs)

    @classmethod
    def from_vector(cls, vector: ArrayLike) -> TrigPoly:
        """Inverse of :meth:`to_vector`."""
        values = np.asarray(vector, dtype=np.float64)
        if values.ndim != 1 or values.size < 3 or values.size % 2 == 0:
            raise ValidationError("Coefficient vectors have odd length 2J+1 with J >= 1", context={"size": values.size})
        order = (values.size - 1) // 2
        return cls(values[0], values[1 : order + 1], values[order + 1 :])

    def to_vector(self) -> NDArray[np.float64]:
        """Coefficients in the layout ``[a0, a1..aJ, b1..bJ]``."""
        return np.concatenate(([self.a0], self.cos_coeffs, self.sin_coeffs))

    def pad(self, order: int) -> TrigPoly:
        """Return the same function represented at a larger truncation order."""
        if order < self.order:
            raise ValidationError(
                "Cannot pad to a smaller order", context={"current_order": self.order, "requested_order": order}
            )
        if order == self.order:
            return self
        extra = np.zeros(order - self.order)
        return TrigPoly(self.a0, np.concatenate((self.cos_coeffs, extra)), np.concatenate((self.sin_coeffs, extra)))

    def coefficient_magnitudes(self) -> NDArray[np.float64]:
        """Per-mode amplitudes hypot(a_j, b_j), j = 1..J."""
        return np.hypot(self.cos_coeffs, self.sin_coeffs)

    def to_dict(self) -> dict[str, Any]:
        return {
            "a0": self.a0,
            "cos": self.cos_coeffs.tolist(),
            "sin": self.sin_coeffs.tolist(),
            "J": self.order,
        }

    def __add__(self, other: TrigPoly) -> TrigPoly:
        u, v = _aligned(self, other)
        return TrigPoly(u.a0 + v.a0, u.cos_coeffs + v.cos_coeffs, u.sin_coeffs + v.sin_coeffs)

    def __sub__(self, other: TrigPoly) -> TrigPoly:
        u, v = _aligned(self, other)
        return TrigPoly(u.a0 - v.a0, u.cos_coeffs - v.cos_coeffs, u.sin_coeffs - v.sin_coeffs)

    def __neg__(self) -> TrigPoly:
        return TrigPoly(-self.a0, -self.cos_coeffs, -self.sin_coeffs)

    def __mul__(self, scalar: float) -> TrigPoly:
        return TrigPoly(scalar * self.a0, scalar * self.cos_coeffs, scalar * self.sin_coeffs)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        cos, sin = self.cos_coeffs.tolist(), self.sin_coeffs.tolist()
        return f"TrigPoly(J={self.order}, a0={self.a0!r}, cos={cos!r}, sin={sin!r})"


def _aligned(u: TrigPoly, v: TrigPoly) -> tuple[TrigPoly, TrigPoly]:
    order = max(u.order, v.order)
    return u.pad(order), v.pad(order)


def grid_points(n: int) -> NDArray[np.float64]:
    """The equispaced grid t_k = 2πk/N, k = 0..N-1."""
    return 2.0 * np.pi * np.arange(n) / n


def default_grid_size(order: int) -> int:
    """Grid used for pseudo-spectral work at order J: at least 4J points and never below 256."""
    n = max(DEFAULT_GRID_SIZE, 4 * order)
    return n + n % 2


def dealiased_grid_size(order: int, grid_size: int | None = None) -> int:
    """The requested grid, raised to at least 4J points (even) for pointwise products."""
    if grid_size is None:
        return default_grid_size(order)
    n = max(grid_size, 4 * order)
    return n + n % 2


@dataclass(frozen=True, slots=True, eq=False)
class GridFunction:
    """Samples of a periodic function on the equispaced grid of N points."""

    samples: NDArray[np.float64]

    def __post_init__(self) -> None:
        samples = _frozen_array(self.samples)
        if samples.ndim != 1 or samples.size < 2 or samples.size % 2:
            raise ValidationError("Grid functions need an even number N >= 2 of samples", context={"N": samples.size})
        object.__setattr__(self, "samples", samples)

    @property
    def n(self) -> int:
        return int(self.samples.size)

    @property
    def t(self) -> NDArray[np.float64]:
        return grid_points(self.n)

    @classmethod
    def from_function(cls, fn: Callable[[NDArray[np.float64]], ArrayLike], n: int = DEFAULT_GRID_SIZE) -> GridFunction:
        t = grid_points(n)
        return cls(np.broadcast_to(np.asarray(fn(t), dtype=np.float64), t.shape))

    def to_csv(self) -> str:
        """Two columns ``t,value`` with a header row and 17 significant digits."""
        lines = ["t,value"]
        lines.extend(f"{t:.17g},{value:.17g}" for t, value in zip(self.t, self.samples))
        return "\n".join(lines) + "\n"


@dataclass(frozen=True, slots=True)
class Nonlinearity:
    """The nonlinear term g of the periodic problem together with g' and, optionally, G."""

    g: Callable[[NDArray[np.float64]], ArrayLike]
    g_prime: Callable[[NDArray[np.float64]], ArrayLike]
    c_g: float | None = None
    """Claimed uniform bound on |g|, if any."""
    description: str = ""
    primitive: Callable[[NDArray[np.float64]], ArrayLike] | None = None
    """Closed form of G(t) = ∫_0^t g, if known."""
    coercive_primitive: bool | None = None
    """Analytic declaration that G(t) → -∞ as |t| → ∞ (None when undeclared)."""

    def evaluate(self, x: ArrayLike) -> NDArray[np.float64]:
        values = np.asarray(x, dtype=np.float64)
        return np.broadcast_to(np.asarray(self.g(values), dtype=np.float64), values.shape).copy()

    def derivative(self, x: ArrayLike) -> NDArray[np.float64]:
        values = np.asarray(x, dtype=np.float64)
        return np.broadcast_to(np.asarray(self.g_prime(values), dtype=np.float64), values.shape).copy()

    def primitive_at(self, t: float) -> float:
        """G(t), from the closed form when available and by adaptive quadrature otherwise."""
        if self.primitive is not None:
            return float(np.asarray(self.primitive(np.asarray(t, dtype=np.float64)), dtype=np.float64))
        value, _ = integrate.quad(lambda x: float(self.evaluate(x)), 0.0, t, limit=200)
        return float(value)

    def max_abs(self, probe_radius: float, n_samples: int) -> float:
        """Largest sampled |g| on [-R, R]."""
        probes = np.linspace(-probe_radius, probe_radius, n_samples)
        return float(np.max(np.abs(self.evaluate(probes))))

    def check_bounded(self, probe_radius: float = 50.0, n_samples: int = 10_001) -> bool:
        """Whether the sampled |g| stays below the claimed bound c_g (False when no bound is claimed)."""
        if self.c_g is None:
            return False
        return self.max_abs(probe_radius, n_samples) <= self.c_g + 1e-12

    def negated(self) -> Nonlinearity:
        """The nonlinearity -g."""
        primitive = self.primitive
        return Nonlinearity(
            g=lambda x: -np.asarray(self.g(x), dtype=np.float64),
            g_prime=lambda x: -np.asarray(self.g_prime(x), dtype=np.float64),
            c_g=self.c_g,
            description=f"-({self.description})",
            primitive=None if primitive is None else (lambda x: -np.asarray(primitive(x), dtype=np.float64)),
            coercive_primitive=False if self.coercive_primitive else None,
        )


def evaluate(u: TrigPoly, t: ArrayLike) -> Any:
    """Evaluate u at t; t is reduced modulo 2π first, so u(0) and u(2π) agree exactly."""
    tt = np.mod(np.asarray(t, dtype=np.float64), 2.0 * np.pi)
    phase = np.multiply.outer(tt, u.modes)
    values = u.a0 + np.cos(phase) @ u.cos_coeffs + np.sin(phase) @ u.sin_coeffs
    if np.ndim(values) == 0:
        return float(values)
    return values


def to_samples(u: TrigPoly, n: int | None = None) -> GridFunction:
    """Sample u on the grid of N points.

    Raises:
        AliasingError: If N < 2J+2.
    """
    n = default_grid_size(u.order) if n is None else n
    if n % 2 or n < 2 * u.order + 2:
        raise AliasingError(
            f"A grid of {n} points cannot represent order {u.order} without aliasing",
            context={"N": n, "J": u.order},
        )
    spectrum = np.zeros(n // 2 + 1, dtype=np.complex128)
    spectrum[0] = u.a0 * n
    spectrum[1 : u.order + 1] = (u.cos_coeffs - 1j * u.sin_coeffs) * (n / 2)
    return GridFunction(fft.irfft(spectrum, n=n))


def from_samples(gf: GridFunction, order: int) -> TrigPoly:
    """Trigonometric interpolation of the samples, truncated to order J.

    Raises:
        AliasingError: If N < 2J+2.
    """
    if order < 1:
        raise ValidationError("Truncation order J must be a positive integer", context={"J": order})
    if gf.n < 2 * order + 2:
        raise AliasingError(
            f"A grid of {gf.n} points cannot resolve order {order} without aliasing",
            context={"N": gf.n, "J": order},
        )
    spectrum = fft.rfft(gf.samples)
    low = spectrum[1 : order + 1]
    return TrigPoly(spectrum[0].real / gf.n, 2.0 * low.real / gf.n, -2.0 * low.imag / gf.n)


def differentiate(u: TrigPoly) -> TrigPoly:
    """u'; mode j maps (a_j, b_j) to (j·b_j, -j·a_j)."""
    j = u.modes
    return TrigPoly(0.0, j * u.sin_coeffs, -j * u.cos_coeffs)


def _inner(u: TrigPoly, v: TrigPoly, *, h1: bool) -> float:
    u, v = _aligned(u, v)
    weights = np.pi * (1.0 + u.modes**2) if h1 else np.full(u.order, np.pi)
    modes = np.dot(weights, u.cos_coeffs * v.cos_coeffs + u.sin_coeffs * v.sin_coeffs)
    return float(2.0 * np.pi * u.a0 * v.a0 + modes)


def l2_inner(u: TrigPoly, v: TrigPoly) -> float:
    """∫_0^{2π} u v dt."""
    return _inner(u, v, h1=False)


def l2_norm(u: TrigPoly) -> float:
    return math.sqrt(max(l2_inner(u, u), 0.0))


def h1_inner(u: TrigPoly, v: TrigPoly) -> float:
    """∫_0^{2π} (u'v' + uv) dt."""
    return _inner(u, v, h1=True)


def h1_norm(u: TrigPoly) -> float:
    return math.sqrt(max(h1_inner(u, u), 0.0))


def _symmetric_modes(u: TrigPoly, s: int) -> NDArray[np.bool_]:
    if s < 1:
        raise ValidationError("Symmetry order s must be a positive integer", context={"s": s})
    return np.asarray(u.modes % s == 0)


def project_Vs(u: TrigPoly, s: int) -> TrigPoly:  # noqa: N802
    """Orthogonal projection onto V_s, the 2π/s-periodic functions: modes divisible by s plus the constant."""
    keep = _symmetric_modes(u, s)
    return TrigPoly(u.a0, np.where(keep, u.cos_coeffs, 0.0), np.where(keep, u.sin_coeffs, 0.0))


def project_Vs_perp(u: TrigPoly, s: int) -> TrigPoly:  # noqa: N802
    """u - project_Vs(u, s)."""
    keep = _symmetric_modes(u, s)
    return TrigPoly(0.0, np.where(keep, 0.0, u.cos_coeffs), np.where(keep, 0.0, u.sin_coeffs))


def project_Ej(u: TrigPoly, j: int) -> TrigPoly:  # noqa: N802
    """Projection onto the eigenspace E_j = span{cos jt, sin jt} (E_0 = constants)."""
    if not 0 <= j <= u.order:
        raise ValidationError(f"Eigenspace index {j} is outside 0..{u.order}", context={"j": j, "J": u.order})
    if j == 0:
        return TrigPoly.constant(u.a0, u.order)
    keep = u.modes == j
    return TrigPoly(0.0, np.where(keep, u.cos_coeffs, 0.0), np.where(keep, u.sin_coeffs, 0.0))


def periodicity_index(u: TrigPoly, tol: float | None = None) -> int | Literal["constant"]:
    """The k for which 2π/k is the minimal period of u, or ``"constant"``.

    Args:
        u: The series.
        tol: Coefficient magnitudes at or below tol are ignored. Defaults to 1e-9·h1_norm(u).

    Raises:
        ValidationError: If an explicit tol is not positive.

    Returns:
        The gcd of all surviving mode indices, or ``"constant"`` when only the constant mode survives.
    """
    if tol is None:
        tol = PERIODICITY_RELATIVE_TOL * h1_norm(u)
    elif tol <= 0:
        raise ValidationError("Periodicity tolerance must be positive", context={"tol": tol})
    active = u.modes[u.coefficient_magnitudes() > tol]
    if active.size == 0:
        return CONSTANT
    return int(np.gcd.reduce(active))


def compose(u: TrigPoly, nl: Nonlinearity, which: Which = "g", grid_size: int | None = None) -> TrigPoly:
    """Pseudo-spectral composition g∘u (or g'∘u) re-interpolated at the order of u.

    Args:
        u: The series.
        nl: The nonlinearity.
        which: ``"g"`` or ``"g_prime"``.
        grid_size: Number of collocation points; defaults to :func:`default_grid_size`. Grids below
            4J points are raised to 4J.

    Raises:
        ValidationError: For an unknown ``which``.

    Returns:
        The composed series.
    """
    if which == "g":
        fn = nl.evaluate
    elif which == "g_prime":
        fn = nl.derivative
    else:
        raise ValidationError(f"Unknown composition target {which!r}", context={"which": which})
    samples = to_samples(u, dealiased_grid_size(u.order, grid_size)).samples
    return from_samples(GridFunction(fn(samples)), u.order)
