"""Nonresonant solvers for the periodic problem in canonical orientation.

The canonical residual is ``R(u) = Lu - g(u) - f``. When g' is pinched inside a spectral gap
``(i², (i+1)²)`` the map ``u ↦ (L - cI)⁻¹(f + g(u) - cu)`` with ``c = (p+q)/2`` is a contraction
with rate ``κ = ((p-q)/2) / dist(c, σ(L))``; :func:`contraction_solve` runs it with that
certified rate. :func:`newton_solve` is a damped Newton method on the same residual that does
not rely on the gap condition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, Literal

import numpy as np
import structlog
from scipy import linalg

from symlab._constants import (
    DEFAULT_MAX_ITER,
    DEFAULT_TOLERANCE,
    MAX_STEP_HALVINGS,
    SINGULAR_RELATIVE_TOL,
)
from symlab._operator import IN_SPECTRUM, SpectralGap, apply_L, gap_of, resolvent_apply, resolvent_norm_l2_to_h1
from symlab._trig import (
    Nonlinearity,
    TrigPoly,
    compose,
    dealiased_grid_size,
    grid_points,
    h1_norm,
    l2_norm,
    to_samples,
)
from symlab.exceptions import (
    BelowSpectrumError,
    GapViolationError,
    MaxIterExceededError,
    PostHocRangeViolationError,
    SingularJacobianError,
    StagnationError,
    ValidationError,
)

if TYPE_CHECKING:
    from numpy.typing import NDArray

logger = structlog.get_logger(__name__)

Orientation = Literal["minus", "plus"]
SolveMethod = Literal["contraction", "newton"]

_RANGE_SLACK = 1e-9
_STEP_FLOOR = 1e-12


@dataclass(frozen=True, slots=True)
class GapCertificate:
    """A verified pinching gap.lo < q <= p < gap.hi of the derivative range of g."""

    gap: SpectralGap
    q: float
    p: float

    def __post_init__(self) -> None:
        if not self.gap.lo < self.q <= self.p < self.gap.hi:
            raise GapViolationError(
                "Derivative range is not pinched strictly inside the gap",
                context={"q": self.q, "p": self.p, "gap": self.gap.to_dict()},
            )

    @property
    def c(self) -> float:
        """The shift (p+q)/2."""
        return (self.p + self.q) / 2.0

    @property
    def distance(self) -> float:
        """dist(c, σ(L)) = min(c - lo, hi - c)."""
        return min(self.c - self.gap.lo, self.gap.hi - self.c)

    @property
    def kappa(self) -> float:
        """Certified contraction rate."""
        return (self.p - self.q) / 2.0 / self.distance

    @property
    def lipschitz_l2(self) -> float:
        """Lipschitz constant of f ↦ u(f) from L² into L²."""
        return 1.0 / (self.distance * (1.0 - self.kappa))

    @property
    def lipschitz_h1(self) -> float:
        """Lipschitz constant of f ↦ u(f) from L² into H¹."""
        return resolvent_norm_l2_to_h1(self.c) * (1.0 + (self.p - self.q) / 2.0 * self.lipschitz_l2)

    def to_dict(self) -> dict[str, Any]:
        return {
            "gap": self.gap.to_dict(),
            "q": self.q,
            "p": self.p,
            "c": self.c,
            "kappa": self.kappa,
            "lipschitz_l2": self.lipschitz_l2,
            "lipschitz_h1": self.lipschitz_h1,
        }


@dataclass(frozen=True, slots=True)
class SolveReport:
    """Outcome of a converged solver run."""

    solution: TrigPoly
    residual_h1: float
    iterations: int
    observed_rate: float
    """Largest ratio of consecutive L² step norms from the second ratio on (0 when undefined)."""
    method: SolveMethod
    observed_rate_h1: float = 0.0
    certificate: GapCertificate | None = None
    range_checked: bool = False
    """Whether g'(u(t)) was verified to lie in [q, p] on the computed solution."""
    step_norms: tuple[float, ...] = field(default=(), repr=False)

    def to_dict(self) -> dict[str, Any]:
        return {
            "method": self.method,
            "solution": self.solution.to_dict(),
            "residual_h1": self.residual_h1,
            "iterations": self.iterations,
            "observed_rate": self.observed_rate,
            "observed_rate_h1": self.observed_rate_h1,
            "certificate": None if self.certificate is None else self.certificate.to_dict(),
            "range_checked": self.range_checked,
        }


def canonical_nonlinearity(nl: Nonlinearity, orientation: Orientation = "minus") -> Nonlinearity:
    """The g for which the problem reads Lu - g(u) = f.

    ``minus`` is the orientation -u'' - g(u) = f; ``plus`` is the literal -u'' + g(u) = f.
    """
    if orientation == "minus":
        return nl
    if orientation == "plus":
        return nl.negated()
    raise ValidationError(f"Unknown orientation {orientation!r}", context={"orientation": orientation})


def canonical_residual(
    u: TrigPoly,
    nl: Nonlinearity,
    f: TrigPoly,
    orientation: Orientation = "minus",
    grid_size: int | None = None,
) -> TrigPoly:
    """R(u) = Lu - g(u) - f for the canonical nonlinearity of the given orientation."""
    order = max(u.order, f.order)
    u = u.pad(order)
    return apply_L(u) - compose(u, canonical_nonlinearity(nl, orientation), "g", grid_size) - f.pad(order)


def derivative_range(nl: Nonlinearity, lo: float, hi: float, n_samples: int = 2001) -> tuple[float, float]:
    """Sampled (min, max) of g' on [lo, hi]; an estimate, not a proof.

    Raises:
        ValidationError: If lo >= hi or fewer than 64 samples are requested.
    """
    if lo >= hi:
        raise ValidationError("Empty sampling interval", context={"lo": lo, "hi": hi})
    if n_samples < 64:
        raise ValidationError("At least 64 samples are required", context={"n_samples": n_samples})
    values = nl.derivative(np.linspace(lo, hi, n_samples))
    return float(np.min(values)), float(np.max(values))


def certify_gap(q: float, p: float) -> GapCertificate:
    """Find the spectral gap containing [q, p].

    Raises:
        ValidationError: If q > p.
        GapViolationError: If q or p touches an eigenvalue, or [q, p] straddles one.

    Returns:
        The certificate with c = (p+q)/2 and its contraction rate.
    """
    if q > p:
        raise ValidationError("Lower derivative bound exceeds the upper one", context={"q": q, "p": p})
    try:
        gap_q = gap_of(q)
        gap_p = gap_of(p)
    except BelowSpectrumError as e:
        raise GapViolationError("Derivative range reaches below λ_0 = 0", context={"q": q, "p": p}) from e

    for value, gap in ((q, gap_q), (p, gap_p)):
        if gap == IN_SPECTRUM:
            j = round(math.sqrt(value))
            raise GapViolationError(
                f"Derivative bound {value} touches eigenvalue {j}²", context={"j": j, "value": value}
            )
    assert isinstance(gap_q, SpectralGap)  # noqa: S101
    assert isinstance(gap_p, SpectralGap)  # noqa: S101
    if gap_q.i != gap_p.i:
        j = gap_q.i + 1
        raise GapViolationError(
            f"Derivative range [{q}, {p}] straddles eigenvalue {j}²", context={"j": j, "q": q, "p": p}
        )
    return GapCertificate(gap=gap_q, q=q, p=p)


def check_solution_range(
    u: TrigPoly, nl: Nonlinearity, cert: GapCertificate, grid_size: int | None = None
) -> tuple[float, float]:
    """Verify that g'(u(t)) stays in [q, p] on the grid.

    Raises:
        PostHocRangeViolationError: If it does not; the certificate then did not apply.

    Returns:
        The sampled (min, max) of g'(u(t)).
    """
    values = nl.derivative(to_samples(u, dealiased_grid_size(u.order, grid_size)).samples)
    low, high = float(np.min(values)), float(np.max(values))
    slack = _RANGE_SLACK * max(1.0, abs(cert.p), abs(cert.q))
    if low < cert.q - slack or high > cert.p + slack:
        raise PostHocRangeViolationError(
            "g'(u(t)) leaves the certified interval on the computed solution",
            context={"min": low, "max": high, "q": cert.q, "p": cert.p},
        )
    return low, high


def _max_ratio(steps: list[float], reference: float) -> float:
    floor = _STEP_FLOOR * max(1.0, reference)
    ratios = [steps[k] / steps[k - 1] for k in range(2, len(steps)) if steps[k - 1] > floor]
    return max(ratios, default=0.0)


def _start(f: TrigPoly, u0: TrigPoly | None) -> tuple[TrigPoly, TrigPoly]:
    order = max(f.order, u0.order if u0 is not None else 1)
    u = TrigPoly.zeros(order) if u0 is None else u0.pad(order)
    return u, f.pad(order)


def contraction_solve(
    nl: Nonlinearity,
    f: TrigPoly,
    cert: GapCertificate,
    u0: TrigPoly | None = None,
    tol: float = DEFAULT_TOLERANCE,
    max_iter: int = DEFAULT_MAX_ITER,
    *,
    orientation: Orientation = "minus",
    grid_size: int | None = None,
    check_range: bool = True,
) -> SolveReport:
    """Solve R(u) = 0 by the certified fixed-point map u ↦ (L - cI)⁻¹(f + g(u) - cu).

    ``observed_rate`` is the largest ratio of successive step norms in L², where the certified rate
    bounds the map; the H¹ ratios are reported as ``observed_rate_h1``.

    Args:
        nl: The nonlinearity.
        f: The forcing.
        cert: Gap certificate for the derivative range of the canonical g.
        u0: Initial guess, zero by default.
        tol: Target H¹ norm of the residual.
        max_iter: Iteration budget.
        orientation: Sign convention of the problem.
        grid_size: Collocation grid for the composition.
        check_range: Verify g'(u(t)) ∈ [q, p] on the result.

    Raises:
        MaxIterExceededError: If the residual does not reach tol.
        PostHocRangeViolationError: If the certificate does not cover the computed solution.

    Returns:
        The solve report, with the certificate attached.
    """
    g = canonical_nonlinearity(nl, orientation)
    u, f = _start(f, u0)
    c = cert.c
    steps_l2: list[float] = []
    steps_h1: list[float] = []

    residual = h1_norm(canonical_residual(u, g, f, grid_size=grid_size))
    while residual > tol:
        if len(steps_l2) >= max_iter:
            raise MaxIterExceededError(
                "Contraction iteration did not converge",
                context={"max_iter": max_iter, "residual_h1": residual, "tol": tol, "kappa": cert.kappa},
            )
        u_next = resolvent_apply(c, f + compose(u, g, "g", grid_size) - c * u)
        step = u_next - u
        steps_l2.append(l2_norm(step))
        steps_h1.append(h1_norm(step))
        u = u_next
        residual = h1_norm(canonical_residual(u, g, f, grid_size=grid_size))
        logger.debug("contraction_step", iteration=len(steps_l2), step_l2=steps_l2[-1], residual_h1=residual)

    if check_range:
        check_solution_range(u, g, cert, grid_size)

    return SolveReport(
        solution=u,
        residual_h1=residual,
        iterations=len(steps_l2),
        observed_rate=_max_ratio(steps_l2, l2_norm(u)),
        observed_rate_h1=_max_ratio(steps_h1, h1_norm(u)),
        method="contraction",
        certificate=cert,
        range_checked=check_range,
        step_norms=tuple(steps_l2),
    )


def _basis_samples(order: int, t: NDArray[np.float64]) -> NDArray[np.float64]:
    phase = np.multiply.outer(t, np.arange(1, order + 1))
    return np.hstack((np.ones((t.size, 1)), np.cos(phase), np.sin(phase)))


def jacobian_matrix(u: TrigPoly, nl: Nonlinearity, grid_size: int | None = None) -> NDArray[np.float64]:
    """Matrix of h ↦ Lh - g'(u)h acting on coefficient vectors ``[a0, a1..aJ, b1..bJ]``.

    The product g'(u)h is formed on the collocation grid and re-interpolated, exactly as in
    :func:`symlab._trig.compose`, so the matrix is the derivative of the discrete residual.
    Conjugated by the diagonal of basis norms (√(2π), √π, ...) the matrix is symmetric.
    """
    order = u.order
    n = dealiased_grid_size(order, grid_size)
    t = grid_points(n)
    weight = nl.derivative(to_samples(u, n).samples)
    basis = _basis_samples(order, t)
    analysis = basis.T * np.concatenate(([1.0 / n], np.full(2 * order, 2.0 / n)))[:, None]
    multiplication = analysis @ (weight[:, None] * basis)
    squares = np.arange(1, order + 1, dtype=np.float64) ** 2
    return np.diag(np.concatenate(([0.0], squares, squares))) - multiplication


def _check_conditioning(jacobian: NDArray[np.float64], singular_tol: float) -> None:
    singular_values = linalg.svdvals(jacobian)
    smallest, largest = float(singular_values[-1]), float(singular_values[0])
    if smallest <= singular_tol * largest:
        raise SingularJacobianError(
            "Linearization is numerically singular",
            context={"smallest_singular_value": smallest, "largest_singular_value": largest},
        )


def newton_solve(
    nl: Nonlinearity,
    f: TrigPoly,
    u0: TrigPoly | None = None,
    tol: float = DEFAULT_TOLERANCE,
    max_iter: int = 50,
    *,
    orientation: Orientation = "minus",
    grid_size: int | None = None,
    singular_tol: float = SINGULAR_RELATIVE_TOL,
) -> SolveReport:
    """Damped Newton iteration on R(u) = Lu - g(u) - f.

    Each step halves the Newton increment (at most 30 times) until the L² norm of the residual
    decreases.

    Raises:
        SingularJacobianError: If the linearization is singular at an iterate.
        StagnationError: If no halving of the increment decreases the residual.
        MaxIterExceededError: If the residual does not reach tol.

    Returns:
        The solve report.
    """
    g = canonical_nonlinearity(nl, orientation)
    u, f = _start(f, u0)
    residual_poly = canonical_residual(u, g, f, grid_size=grid_size)
    residual = h1_norm(residual_poly)
    steps: list[float] = []

    while residual > tol:
        if len(steps) >= max_iter:
            raise MaxIterExceededError(
                "Newton iteration did not converge",
                context={"max_iter": max_iter, "residual_h1": residual, "tol": tol},
            )
        jacobian = jacobian_matrix(u, g, grid_size)
        _check_conditioning(jacobian, singular_tol)
        increment = TrigPoly.from_vector(linalg.solve(jacobian, -residual_poly.to_vector()))

        merit = l2_norm(residual_poly)
        alpha = 1.0
        for _ in range(MAX_STEP_HALVINGS):
            candidate_residual = canonical_residual(u + alpha * increment, g, f, grid_size=grid_size)
            if l2_norm(candidate_residual) < merit:
                break
            alpha *= 0.5
        else:
            raise StagnationError(
                "No damped Newton step decreases the residual",
                context={"iteration": len(steps), "residual_h1": residual, "halvings": MAX_STEP_HALVINGS},
            )

        candidate = u + alpha * increment
        steps.append(l2_norm(candidate - u))
        u, residual_poly = candidate, candidate_residual
        residual = h1_norm(residual_poly)
        logger.debug("newton_step", iteration=len(steps), damping=alpha, residual_h1=residual)

    return SolveReport(
        solution=u,
        residual_h1=residual,
        iterations=len(steps),
        observed_rate=_max_ratio(steps, l2_norm(u)),
        method="newton",
        step_norms=tuple(steps),
    )
