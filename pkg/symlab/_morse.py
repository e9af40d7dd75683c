"""Quadratic forms Q(h) = ∫ |h'|² - W |h|² on V_s⊥ and their Morse indices."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, Literal

import numpy as np
import structlog
from scipy import linalg

from symlab._constants import (
    DEFAULT_DELTA_MAX,
    DEGENERACY_RELATIVE_TOL,
    GOLDEN_RATIO,
    WINDOW_MARGIN,
    WINDOW_SAMPLES,
)
from symlab._trig import TrigPoly, compose, default_grid_size, grid_points, to_samples
from symlab.exceptions import NoWindowError, ValidationError

if TYPE_CHECKING:
    from collections.abc import Callable, Iterable

    from numpy.typing import NDArray

    from symlab._operator import SpectralGap
    from symlab._trig import Nonlinearity

logger = structlog.get_logger(__name__)

_BISECTION_STEPS = 40
_MAX_HALVINGS = 60


@dataclass(frozen=True, slots=True)
class BasisMode:
    kind: Literal["cos", "sin"]
    j: int

    @property
    def label(self) -> str:
        return f"{self.kind[0]}{self.j}"


def _require_complement(s: int) -> None:
    if s < 2:
        raise ValidationError("V_s⊥ is trivial unless s >= 2", context={"s": s})


def vs_perp_basis(s: int, order: int) -> list[BasisMode]:
    """Basis {cos jt, sin jt : 1 <= j <= J, s ∤ j} in ascending j, cos before sin."""
    _require_complement(s)
    return [BasisMode(kind, j) for j in range(1, order + 1) if j % s for kind in ("cos", "sin")]


@dataclass(frozen=True, slots=True)
class QuadraticForm:
    """Q(h) = ∫ |h'|² - W |h|² restricted to the order-J truncation of V_s⊥."""

    potential: TrigPoly
    s: int
    J: int  # noqa: N815

    def __post_init__(self) -> None:
        _require_complement(self.s)
        if self.J < 1:
            raise ValidationError("Truncation order J must be a positive integer", context={"J": self.J})

    @classmethod
    def constant(cls, c: float, s: int, order: int) -> QuadraticForm:
        return cls(TrigPoly.constant(c), s, order)

    @classmethod
    def at_profile(cls, nl: Nonlinearity, u: TrigPoly, s: int, order: int) -> QuadraticForm:
        """The form with W = g'(u(t)).

        The potential keeps the modes up to 2J, which is every mode the Galerkin matrix can see.
        """
        profile = u.pad(max(u.order, 2 * order))
        return cls(compose(profile, nl, "g_prime"), s, order)


def _basis_samples(basis: list[BasisMode], t: NDArray[np.float64]) -> NDArray[np.float64]:
    columns = [np.cos(mode.j * t) if mode.kind == "cos" else np.sin(mode.j * t) for mode in basis]
    return np.column_stack(columns) / math.sqrt(math.pi)


def assemble(form: QuadraticForm) -> NDArray[np.float64]:
    """Galerkin matrix of the form in the L²-normalized basis of :func:`vs_perp_basis`.

    The stiffness part is diag(j²). The potential part is integrated by the trapezoid rule, which
    is exact for the trigonometric integrands involved.
    """
    basis = vs_perp_basis(form.s, form.J)
    if not basis:
        return np.zeros((0, 0))
    n = default_grid_size(max(form.J, form.potential.order))
    weight = to_samples(form.potential, n).samples
    samples = _basis_samples(basis, grid_points(n))
    potential = (2.0 * np.pi / n) * samples.T @ (weight[:, None] * samples)
    stiffness = np.diag([float(mode.j**2) for mode in basis])
    matrix = stiffness - potential
    return (matrix + matrix.T) / 2.0


@dataclass(frozen=True, slots=True)
class MorseReport:
    index: int
    """Number of negative eigenvalues."""
    eigenvalues: tuple[float, ...]
    margin: float
    """Smallest |eigenvalue|."""
    basis_dim: int
    degenerate: bool
    s: int
    J: int  # noqa: N815

    def to_dict(self) -> dict[str, Any]:
        return {
            "index": self.index,
            "margin": self.margin,
            "relative_margin": self.relative_margin,
            "degenerate": self.degenerate,
            "basis_dim": self.basis_dim,
            "s": self.s,
            "J": self.J,
            "eigenvalues": list(self.eigenvalues),
        }

    @property
    def relative_margin(self) -> float:
        scale = max((abs(value) for value in self.eigenvalues), default=0.0)
        return self.margin / scale if scale > 0 else 0.0


def morse_index(form: QuadraticForm, degeneracy_tol: float = DEGENERACY_RELATIVE_TOL) -> MorseReport:
    """Signature of the assembled form.

    Args:
        form: The quadratic form.
        degeneracy_tol: The form is flagged degenerate when min|λ| < degeneracy_tol · max|λ|.

    Returns:
        The Morse report.
    """
    eigenvalues = linalg.eigvalsh(assemble(form))
    magnitudes = np.abs(eigenvalues)
    margin = float(np.min(magnitudes)) if eigenvalues.size else math.inf
    scale = float(np.max(magnitudes)) if eigenvalues.size else 0.0
    return MorseReport(
        index=int(np.count_nonzero(eigenvalues < 0)),
        eigenvalues=tuple(float(value) for value in eigenvalues),
        margin=margin,
        basis_dim=int(eigenvalues.size),
        degenerate=bool(eigenvalues.size > 0 and margin < degeneracy_tol * scale),
        s=form.s,
        J=form.J,
    )


def analytic_constant_index(c: float, s: int, order: int | None = None) -> int:
    """2·#{j >= 1 : s ∤ j, j² < c}, optionally restricted to j <= J."""
    _require_complement(s)
    top = math.isqrt(max(math.ceil(c), 0)) + 1
    if order is not None:
        top = min(top, order)
    return 2 * sum(1 for j in range(1, top + 1) if j % s and j * j < c)


@dataclass(frozen=True, slots=True)
class IndexStability:
    reports: dict[int, MorseReport]

    @property
    def stable(self) -> bool:
        return len({report.index for report in self.reports.values()}) <= 1


def index_stability(
    form_factory: Callable[[int], QuadraticForm],
    orders: Iterable[int] = (16, 32, 64),
    degeneracy_tol: float = DEGENERACY_RELATIVE_TOL,
) -> IndexStability:
    """Morse indices of the same form at several truncation orders."""
    return IndexStability({order: morse_index(form_factory(order), degeneracy_tol) for order in orders})


@dataclass(frozen=True, slots=True)
class WindowCertificate:
    """g' stays in the gap on [t_center - delta, t_center + delta] (sampled)."""

    t_center: float
    delta: float
    window_gap: SpectralGap
    min_gp: float
    max_gp: float

    def __post_init__(self) -> None:
        if self.delta <= 0:
            raise ValidationError("Window half-width must be positive", context={"delta": self.delta})
        if not self.window_gap.lo < self.min_gp <= self.max_gp < self.window_gap.hi:
            raise ValidationError(
                "Sampled derivative range leaves the window gap",
                context={"min_gp": self.min_gp, "max_gp": self.max_gp, "gap": self.window_gap.to_dict()},
            )

    def to_dict(self) -> dict[str, Any]:
        return {
            "t_center": self.t_center,
            "delta": self.delta,
            "gap": self.window_gap.to_dict(),
            "min_gp": self.min_gp,
            "max_gp": self.max_gp,
        }


def find_delta(
    nl: Nonlinearity,
    t_center: float,
    target_gap: SpectralGap,
    tol: float = WINDOW_MARGIN,
    *,
    delta_max: float = DEFAULT_DELTA_MAX,
    n_samples: int = WINDOW_SAMPLES,
) -> WindowCertificate:
    """Near-maximal δ such that g' stays inside the gap on [t_center - δ, t_center + δ].

    Starting from δ = min(1, delta_max), δ is halved until the window passes, then grown by the
    golden ratio up to delta_max and finally bisected against the first failing size. A window
    passes when every sampled g' keeps a distance of tol·width from both gap edges.

    Raises:
        NoWindowError: If g'(t_center) itself is outside the gap or within the margin of an edge.

    Returns:
        The window certificate.
    """
    margin = tol * target_gap.width
    center = float(nl.derivative(t_center))
    if not target_gap.contains(center, margin):
        raise NoWindowError(
            f"g'({t_center}) = {center} is not inside the gap with margin {margin}",
            context={"t_center": t_center, "g_prime": center, "gap": target_gap.to_dict(), "margin": margin},
        )

    def probe(delta: float) -> tuple[bool, float, float]:
        values = nl.derivative(np.linspace(t_center - delta, t_center + delta, n_samples))
        low, high = float(np.min(values)), float(np.max(values))
        return target_gap.contains(low, margin) and target_gap.contains(high, margin), low, high

    delta = min(1.0, delta_max)
    ok, low, high = probe(delta)
    halvings = 0
    while not ok:
        if halvings >= _MAX_HALVINGS:
            raise NoWindowError("No window passes around the center", context={"t_center": t_center})
        delta /= 2.0
        halvings += 1
        ok, low, high = probe(delta)

    failing: float | None = None
    while failing is None and delta < delta_max:
        candidate = min(delta * GOLDEN_RATIO, delta_max)
        passed, cand_low, cand_high = probe(candidate)
        if passed:
            delta, low, high = candidate, cand_low, cand_high
        else:
            failing = candidate

    if failing is not None:
        lower = delta
        for _ in range(_BISECTION_STEPS):
            middle = (lower + failing) / 2.0
            passed, mid_low, mid_high = probe(middle)
            if passed:
                lower, low, high = middle, mid_low, mid_high
            else:
                failing = middle
        delta = lower

    logger.debug("find_delta", t_center=t_center, delta=delta, min_gp=low, max_gp=high)
    return WindowCertificate(t_center=t_center, delta=delta, window_gap=target_gap, min_gp=low, max_gp=high)


def ustar(t_center: float, delta: float, s: int, order: int | None = None) -> TrigPoly:
    """The profile t_center + δ sin(st), which lies in V_s."""
    if s < 1:
        raise ValidationError("Symmetry order s must be a positive integer", context={"s": s})
    return TrigPoly.from_modes(max(s, order or s), a0=t_center, sin={s: delta})
