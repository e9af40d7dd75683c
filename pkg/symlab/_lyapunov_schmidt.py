"""Splitting along V_s ⊕ V_s⊥ and the symmetry-preservation experiment.

With P the orthogonal projection onto V_s, a solution u = v + w (v = Pu, w = (I-P)u) of the
canonical problem satisfies the coupled pair

    Lv - P g(v + w) = f,        Lw - (I-P) g(v + w) = 0,

whenever f ∈ V_s. Because g(v) ∈ V_s for v ∈ V_s, w = 0 always solves the second equation; under
a gap certificate the solution is unique, hence symmetric.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import TYPE_CHECKING, Any, Literal

import numpy as np
import structlog

from symlab._constants import DEFAULT_TOLERANCE, SYMMETRY_LEAKAGE_TOL
from symlab._group import SymmetryDefect, symmetry_defect
from symlab._mawhin import (
    GapCertificate,
    Orientation,
    SolveReport,
    canonical_residual,
    contraction_solve,
    newton_solve,
)
from symlab._trig import TrigPoly, h1_norm, l2_norm, periodicity_index, project_Vs, project_Vs_perp
from symlab._utils._seeding import derive_rng
from symlab._utils._sync import map_threaded, run_blocking, run_sync
from symlab.exceptions import PreconditionViolationError, ValidationError

if TYPE_CHECKING:
    from symlab._trig import Nonlinearity

logger = structlog.get_logger(__name__)

UNIQUENESS_LIMITATION = (
    "uniqueness and preservation are verified for the solutions found by the certified contraction "
    "and the multi-start probe only"
)

_PROBE_COMPONENT = "preservation_probe"


@dataclass(frozen=True, slots=True)
class SplitState:
    """u = v + w with v ∈ V_s and w ∈ V_s⊥."""

    v: TrigPoly
    w: TrigPoly
    s: int

    def __post_init__(self) -> None:
        if self.s < 1:
            raise ValidationError("Symmetry order s must be a positive integer", context={"s": self.s})
        leakage = max(h1_norm(project_Vs_perp(self.v, self.s)), h1_norm(project_Vs(self.w, self.s)))
        if leakage > 1e-12:
            raise ValidationError(
                "Split components leave their subspaces", context={"s": self.s, "leakage": leakage}
            )

    @property
    def u(self) -> TrigPoly:
        return self.v + self.w


def split(u: TrigPoly, s: int) -> SplitState:
    """Decompose u = Pu + (I-P)u along V_s."""
    return SplitState(v=project_Vs(u, s), w=project_Vs_perp(u, s), s=s)


def _require_symmetric_forcing(f: TrigPoly, s: int) -> None:
    leakage = h1_norm(project_Vs_perp(f, s))
    if leakage > SYMMETRY_LEAKAGE_TOL:
        raise PreconditionViolationError(
            f"Forcing is not 2π/{s}-periodic", context={"s": s, "leakage": leakage, "tol": SYMMETRY_LEAKAGE_TOL}
        )


def residual_pair(
    state: SplitState,
    nl: Nonlinearity,
    f: TrigPoly,
    orientation: Orientation = "minus",
    grid_size: int | None = None,
) -> tuple[TrigPoly, TrigPoly]:
    """The V_s and V_s⊥ parts of the canonical residual at u = v + w.

    Raises:
        PreconditionViolationError: If f ∉ V_s within 1e-10.

    Returns:
        (rv, rw) with rv + rw = R(v + w).
    """
    _require_symmetric_forcing(f, state.s)
    residual = canonical_residual(state.u, nl, f, orientation, grid_size)
    return project_Vs(residual, state.s), project_Vs_perp(residual, state.s)


def random_symmetric_forcing(
    s: int, order: int, rng: np.random.Generator, n_modes: int = 3, max_norm: float = 1.0
) -> TrigPoly:
    """Random f ∈ V_s on the constant and the modes s, 2s, ..., n_modes·s, with ‖f‖_{L²} <= max_norm."""
    cos: dict[int, float] = {}
    sin: dict[int, float] = {}
    for k in range(1, n_modes + 1):
        if k * s <= order:
            cos[k * s] = float(rng.standard_normal())
            sin[k * s] = float(rng.standard_normal())
    f = TrigPoly.from_modes(order, a0=float(rng.standard_normal()), cos=cos, sin=sin)
    return (max_norm * float(rng.uniform(0.05, 1.0)) / l2_norm(f)) * f


def random_start(order: int, rng: np.random.Generator, amplitude: float = 1.0) -> TrigPoly:
    """A random full-space initial guess with coefficients decaying like 1/(1+j²)."""
    decay = 1.0 / (1.0 + np.arange(1, order + 1, dtype=np.float64) ** 2)
    return TrigPoly(
        amplitude * float(rng.standard_normal()),
        amplitude * decay * rng.standard_normal(order),
        amplitude * decay * rng.standard_normal(order),
    )


@dataclass(frozen=True, slots=True)
class PreservationReport:
    """Outcome of the symmetry-preservation experiment for one forcing."""

    s: int
    J: int  # noqa: N815
    solve: SolveReport
    """The certified contraction solution."""
    defect: SymmetryDefect
    periodicity_index: int | Literal["constant"]
    probe_solutions: tuple[TrigPoly, ...] = field(repr=False)
    probe_residuals: tuple[float, ...]
    max_pairwise_distance: float
    max_probe_defect: float
    tol: float
    preserved: bool
    probed_unique: bool
    limitations: str = UNIQUENESS_LIMITATION

    @property
    def verdict(self) -> bool:
        return self.preserved and self.probed_unique

    def to_dict(self) -> dict[str, Any]:
        return {
            "s": self.s,
            "J": self.J,
            "solution": self.solve.to_dict(),
            "symmetry_defect": self.defect.defect,
            "relative_symmetry_defect": self.defect.relative_defect,
            "periodicity_index": self.periodicity_index,
            "n_probes": len(self.probe_solutions),
            "probe_residuals_h1": list(self.probe_residuals),
            "max_pairwise_distance": self.max_pairwise_distance,
            "max_probe_defect": self.max_probe_defect,
            "tol": self.tol,
            "preserved": self.preserved,
            "probed_unique": self.probed_unique,
            "limitations": self.limitations,
        }


async def preservation_check(
    nl: Nonlinearity,
    f: TrigPoly,
    s: int,
    cert: GapCertificate,
    n_starts: int = 10,
    seed: int = 0,
    tol: float = DEFAULT_TOLERANCE,
    *,
    orientation: Orientation = "minus",
    grid_size: int | None = None,
    max_workers: int | None = None,
) -> PreservationReport:
    """Solve with the certified contraction, probe uniqueness by multi-start Newton, and measure symmetry.

    Args:
        nl: The nonlinearity.
        f: Forcing in V_s.
        s: Symmetry order.
        cert: Gap certificate for the canonical g.
        n_starts: Number of random Newton starts.
        seed: Top-level seed; start k uses the stream (seed, "preservation_probe", k).
        tol: Solver tolerance; preservation means defect <= tol, uniqueness means distances <= 10·tol.
        orientation: Sign convention of the problem.
        grid_size: Collocation grid.
        max_workers: Concurrency limit of the Newton probes.

    Raises:
        PreconditionViolationError: If f ∉ V_s.

    Returns:
        The preservation report.
    """
    _require_symmetric_forcing(f, s)
    solve = await run_sync(
        contraction_solve, nl, f, cert, None, tol, orientation=orientation, grid_size=grid_size
    )
    order = solve.solution.order

    def probe(index: int) -> SolveReport:
        u0 = random_start(order, derive_rng(seed, _PROBE_COMPONENT, index))
        return newton_solve(nl, f, u0, tol, orientation=orientation, grid_size=grid_size)

    probes: list[SolveReport] = await map_threaded(probe, list(range(n_starts)), max_workers)

    solutions = [solve.solution, *(report.solution for report in probes)]
    max_distance = max((h1_norm(a - b) for a, b in combinations(solutions, 2)), default=0.0)
    max_probe_defect = max((symmetry_defect(report.solution, s).defect for report in probes), default=0.0)
    defect = symmetry_defect(solve.solution, s)

    report = PreservationReport(
        s=s,
        J=order,
        solve=solve,
        defect=defect,
        periodicity_index=periodicity_index(solve.solution),
        probe_solutions=tuple(report.solution for report in probes),
        probe_residuals=tuple(report.residual_h1 for report in probes),
        max_pairwise_distance=max_distance,
        max_probe_defect=max_probe_defect,
        tol=tol,
        preserved=defect.defect <= tol,
        probed_unique=max_distance <= 10 * tol,
    )
    logger.info(
        "preservation_check",
        s=s,
        defect=defect.defect,
        max_pairwise_distance=max_distance,
        preserved=report.preserved,
        probed_unique=report.probed_unique,
    )
    return report


def preservation_check_sync(
    nl: Nonlinearity,
    f: TrigPoly,
    s: int,
    cert: GapCertificate,
    n_starts: int = 10,
    seed: int = 0,
    tol: float = DEFAULT_TOLERANCE,
    *,
    orientation: Orientation = "minus",
    grid_size: int | None = None,
    max_workers: int | None = None,
) -> PreservationReport:
    """Synchronous version of :func:`preservation_check`."""
    return run_blocking(
        preservation_check,
        nl,
        f,
        s,
        cert,
        n_starts,
        seed,
        tol,
        orientation=orientation,
        grid_size=grid_size,
        max_workers=max_workers,
    )
