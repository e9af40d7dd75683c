"""Search for solutions outside V_s when g' crosses an eigenvalue r² with gcd(r, s) = 1.

The harness checks the growth hypotheses on g, locates a crossing λ_{r-1} < g'(t0) < λ_r <
g'(t1) < λ_{r+1}, plants the symmetric solution u* = t1 + δ1 sin(st) by setting f̂ = Lu* - g(u*),
and runs multi-start Newton from u* and its perturbations. Whether an asymmetric solution is
found is reported as a search outcome; it is never inferred.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, Literal

import numpy as np
import structlog

from symlab._constants import (
    CROSSING_MARGIN,
    DEFAULT_DEFECT_THRESHOLD,
    DEFAULT_DELTA_MAX,
    DEFAULT_TOLERANCE,
    DEGENERACY_RELATIVE_TOL,
    WINDOW_MARGIN,
)
from symlab._group import ZmAction, orbit_distance, shift_distance, symmetry_defect
from symlab._mawhin import Orientation, SolveReport, canonical_nonlinearity, canonical_residual, newton_solve
from symlab._morse import (
    IndexStability,
    MorseReport,
    QuadraticForm,
    WindowCertificate,
    analytic_constant_index,
    find_delta,
    index_stability,
    morse_index,
    ustar,
)
from symlab._operator import SpectralGap, apply_L
from symlab._trig import (
    TrigPoly,
    compose,
    h1_norm,
    l2_norm,
    periodicity_index,
    project_Vs_perp,
)
from symlab._utils._seeding import derive_rng
from symlab._utils._sync import map_threaded, run_blocking
from symlab.exceptions import NoWitnessError, NumericalError, PreconditionViolationError, ValidationError

if TYPE_CHECKING:
    from collections.abc import Sequence

    from numpy.typing import NDArray

    from symlab._trig import Nonlinearity

logger = structlog.get_logger(__name__)

Status = Literal["pass", "fail", "inconclusive"]

_START_COMPONENT = "break_start"
_GROWTH_FACTOR = 1.5
_DEDUP_RELATIVE_TOL = 1e-6
_CONSTANT_FORCING_RELATIVE_TOL = 1e-12
_CROSSING_BISECTION_STEPS = 60


@dataclass(frozen=True, slots=True)
class CrossingWitness:
    """(r-1)² < g'(t0) < r² < g'(t1) < (r+1)²."""

    r: int
    t0: float
    t1: float
    gp_t0: float
    gp_t1: float

    def __post_init__(self) -> None:
        r = self.r
        if r < 1 or not (r - 1) ** 2 < self.gp_t0 < r * r < self.gp_t1 < (r + 1) ** 2:
            raise ValidationError(
                "Crossing values are not ordered around r²",
                context={"r": r, "gp_t0": self.gp_t0, "gp_t1": self.gp_t1},
            )

    def to_dict(self) -> dict[str, Any]:
        return {"r": self.r, "t0": self.t0, "t1": self.t1, "gp_t0": self.gp_t0, "gp_t1": self.gp_t1}


@dataclass(frozen=True, slots=True)
class BreakingConfig:
    nl: Nonlinearity
    r: int
    s: int
    J: int = 32  # noqa: N815
    n_starts: int = 16
    seed: int = 0
    tol: float = DEFAULT_TOLERANCE
    defect_threshold: float = DEFAULT_DEFECT_THRESHOLD
    orientation: Orientation = "minus"
    search_lo: float = -10.0
    search_hi: float = 10.0
    n_samples: int = 4001
    delta_max: float = DEFAULT_DELTA_MAX
    eps: float = 0.1
    """Amplitude of the perturbations added to u*."""
    probe_radius: float = 50.0
    grid_size: int | None = None

    def __post_init__(self) -> None:
        if self.s < 2:
            raise PreconditionViolationError("Symmetry breaking needs s >= 2", context={"s": self.s})
        if self.r < 1:
            raise PreconditionViolationError("Crossing index r must be a positive integer", context={"r": self.r})
        if math.gcd(self.r, self.s) != 1:
            raise PreconditionViolationError(
                f"gcd(r, s) = {math.gcd(self.r, self.s)}; symmetry breaking requires gcd(r, s) = 1",
                context={"r": self.r, "s": self.s},
            )
        if self.J < max(self.r, self.s):
            raise ValidationError("Truncation order must resolve the modes r and s", context={"J": self.J})
        if self.n_starts < 1:
            raise ValidationError("At least one start is required", context={"n_starts": self.n_starts})


@dataclass(frozen=True, slots=True)
class HypothesisReport:
    """Sampled evidence for |g| <= c_g and G(t) → -∞ as |t| → ∞."""

    boundedness: Status
    max_abs_g: float
    c_g: float | None
    coercivity: Status
    primitive_samples: dict[str, float]
    coercive_declared: bool | None
    probe_radius: float
    notes: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return self.boundedness == "pass" and self.coercivity == "pass"

    @property
    def failed(self) -> bool:
        return "fail" in (self.boundedness, self.coercivity)

    def to_dict(self) -> dict[str, Any]:
        return {
            "boundedness": self.boundedness,
            "max_abs_g": self.max_abs_g,
            "c_g": self.c_g,
            "coercivity": self.coercivity,
            "coercivity_is_heuristic": True,
            "coercive_declared": self.coercive_declared,
            "primitive_samples": self.primitive_samples,
            "probe_radius": self.probe_radius,
            "notes": list(self.notes),
        }


def check_hypotheses(nl: Nonlinearity, probe_radius: float = 50.0, n_samples: int = 10_001) -> HypothesisReport:
    """Check boundedness of g and coercivity of its primitive by sampling.

    Boundedness compares max |g| on [-R, R] against the claimed c_g; without a claim it fails when
    max |g| keeps growing from [-R, R] to [-2R, 2R] and is otherwise inconclusive. Coercivity samples
    G at ±R/2, ±R, ±2R and requires strict decrease in |t|; it passes only when the nonlinearity also
    declares G → -∞ analytically.

    Raises:
        ValidationError: If probe_radius <= 0.

    Returns:
        The hypothesis report.
    """
    if probe_radius <= 0:
        raise ValidationError("Probe radius must be positive", context={"probe_radius": probe_radius})
    notes: list[str] = []

    max_abs = nl.max_abs(probe_radius, n_samples)
    boundedness: Status
    if nl.c_g is not None:
        boundedness = "pass" if max_abs <= nl.c_g + 1e-12 else "fail"
    elif nl.max_abs(2 * probe_radius, n_samples) >= _GROWTH_FACTOR * max_abs > 0:
        boundedness = "fail"
        notes.append("|g| grows with the probe radius and no bound c_g is declared")
    else:
        boundedness = "inconclusive"
        notes.append("no bound c_g is declared")

    radii = (probe_radius / 2, probe_radius, 2 * probe_radius)
    primitive_samples: dict[str, float] = {}
    decreasing = True
    for sign in (1.0, -1.0):
        values = [nl.primitive_at(sign * radius) for radius in radii]
        primitive_samples.update({f"{sign * radius:g}": value for radius, value in zip(radii, values)})
        decreasing = decreasing and values[0] > values[1] > values[2]

    coercivity: Status
    if not decreasing or nl.coercive_primitive is False:
        coercivity = "fail"
    elif nl.coercive_primitive:
        coercivity = "pass"
    else:
        coercivity = "inconclusive"
        notes.append("G decreases on the probes but G → -∞ is not declared analytically")

    return HypothesisReport(
        boundedness=boundedness,
        max_abs_g=max_abs,
        c_g=nl.c_g,
        coercivity=coercivity,
        primitive_samples=primitive_samples,
        coercive_declared=nl.coercive_primitive,
        probe_radius=probe_radius,
        notes=tuple(notes),
    )


def _window_point(
    nl: Nonlinearity, grid: NDArray[np.float64], values: NDArray[np.float64], gap: SpectralGap
) -> float | None:
    """Midpoint of the first run of grid points where g' lies inside the gap with margin."""
    inside = (values > gap.lo + CROSSING_MARGIN) & (values < gap.hi - CROSSING_MARGIN)
    hits = np.flatnonzero(inside)
    if hits.size == 0:
        return None
    start = int(hits[0])
    stop = start
    while stop + 1 < grid.size and inside[stop + 1]:
        stop += 1

    def is_inside(t: float) -> bool:
        return gap.contains(float(nl.derivative(t)), CROSSING_MARGIN)

    def refine(outer: float, inner: float) -> float:
        for _ in range(_CROSSING_BISECTION_STEPS):
            middle = (outer + inner) / 2.0
            if is_inside(middle):
                inner = middle
            else:
                outer = middle
        return inner

    left = refine(float(grid[start - 1]), float(grid[start])) if start > 0 else float(grid[start])
    right = refine(float(grid[stop + 1]), float(grid[stop])) if stop + 1 < grid.size else float(grid[stop])
    midpoint = (left + right) / 2.0
    if is_inside(midpoint):
        return midpoint
    run = np.arange(start, stop + 1)
    centre = (gap.lo + gap.hi) / 2.0
    return float(grid[run[np.argmin(np.abs(values[run] - centre))]])


def find_crossing(
    nl: Nonlinearity, r: int, search_lo: float = -10.0, search_hi: float = 10.0, n_samples: int = 4001
) -> CrossingWitness:
    """Locate t0 with g'(t0) ∈ ((r-1)², r²) and t1 with g'(t1) ∈ (r², (r+1)²).

    Each point is the midpoint of the first run of scan points inside its window, with run edges
    refined by bisection; both keep a distance of 1e-3 from the window edges.

    Raises:
        ValidationError: If the search interval is empty or r < 1.
        NoWitnessError: If g' never enters one of the windows.

    Returns:
        The crossing witness.
    """
    if search_lo >= search_hi:
        raise ValidationError("Empty search interval", context={"search_lo": search_lo, "search_hi": search_hi})
    if r < 1:
        raise ValidationError("Crossing index r must be a positive integer", context={"r": r})
    grid = np.linspace(search_lo, search_hi, n_samples)
    values = nl.derivative(grid)
    points = []
    for gap in (SpectralGap(r - 1), SpectralGap(r)):
        point = _window_point(nl, grid, values, gap)
        if point is None:
            raise NoWitnessError(
                f"g' never enters ({gap.lo:g}, {gap.hi:g}) on [{search_lo}, {search_hi}]",
                context={
                    "r": r,
                    "gap": gap.to_dict(),
                    "g_prime_min": float(values.min()),
                    "g_prime_max": float(values.max()),
                },
            )
        points.append(point)
    t0, t1 = points
    return CrossingWitness(r=r, t0=t0, t1=t1, gp_t0=float(nl.derivative(t0)), gp_t1=float(nl.derivative(t1)))


def construct_fhat(
    nl: Nonlinearity, witness: CrossingWitness, s: int, delta1: float, order: int = 32, grid_size: int | None = None
) -> tuple[TrigPoly, TrigPoly]:
    """The forcing f̂ = Lu* - g(u*) for the planted profile u* = t1 + δ1 sin(st).

    Both u* and g(u*) lie in V_s, hence so does f̂; u* solves the canonical problem with f̂ exactly.

    Returns:
        (f̂, u*).
    """
    u_star = ustar(witness.t1, delta1, s, order)
    fhat = apply_L(u_star) - compose(u_star, nl, "g", grid_size)
    return fhat, u_star


def initial_guesses(
    u_star: TrigPoly, r: int, s: int, n_starts: int, seed: int = 0, eps: float = 0.1
) -> list[TrigPoly]:
    """u*, u* ± ε cos(rt), u* ± ε sin(rt), then seeded random V_s⊥ perturbations of size ε."""
    order = u_star.order
    directions = [
        TrigPoly.from_modes(order, cos={r: eps}),
        TrigPoly.from_modes(order, sin={r: eps}),
    ]
    starts = [u_star]
    for direction in directions:
        starts.extend((u_star + direction, u_star - direction))

    index = 0
    while len(starts) < n_starts:
        rng = derive_rng(seed, _START_COMPONENT, index)
        noise = TrigPoly(0.0, rng.standard_normal(order), rng.standard_normal(order))
        perturbation = project_Vs_perp(noise, s)
        norm = h1_norm(perturbation)
        if norm > 0:
            starts.append(u_star + (eps / norm) * perturbation)
        index += 1
    return starts[:n_starts]


@dataclass(frozen=True, slots=True)
class StartOutcome:
    index: int
    converged: bool
    iterations: int = 0
    residual_h1: float | None = None
    orbit_class_id: int | None = None
    error: dict[str, Any] | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "index": self.index,
            "converged": self.converged,
            "iterations": self.iterations,
            "residual_h1": self.residual_h1,
            "orbit_class_id": self.orbit_class_id,
            "error": self.error,
        }


@dataclass(frozen=True, slots=True)
class SolutionRecord:
    """Representative of one orbit class of computed solutions."""

    orbit_class_id: int
    solution: TrigPoly
    residual_h1: float
    defect: float
    relative_defect: float
    asymmetric: bool
    periodicity_index: int | Literal["constant"]
    start_indices: tuple[int, ...]

    def to_dict(self) -> dict[str, Any]:
        return {
            "orbit_class_id": self.orbit_class_id,
            "residual_h1": self.residual_h1,
            "symmetry_defect": self.defect,
            "relative_symmetry_defect": self.relative_defect,
            "asymmetric": self.asymmetric,
            "periodicity_index": self.periodicity_index,
            "start_indices": list(self.start_indices),
            "solution": self.solution.to_dict(),
        }


def _solve_start(
    nl: Nonlinearity, f: TrigPoly, u0: TrigPoly, tol: float, orientation: Orientation, grid_size: int | None
) -> SolveReport | NumericalError:
    try:
        return newton_solve(nl, f, u0, tol, orientation=orientation, grid_size=grid_size)
    except NumericalError as e:
        return e


def is_constant_forcing(f: TrigPoly) -> bool:
    """Whether f is constant up to roundoff, which makes the problem invariant under every translation."""
    return h1_norm(f - TrigPoly.constant(f.a0)) <= _CONSTANT_FORCING_RELATIVE_TOL * h1_norm(f)


def _same_orbit(u: TrigPoly, v: TrigPoly, action: ZmAction, *, continuous: bool) -> bool:
    tolerance = _DEDUP_RELATIVE_TOL * max(1.0, h1_norm(v))
    if orbit_distance(u, v, action) <= tolerance:
        return True
    return continuous and shift_distance(u, v) <= tolerance


async def search_solutions(
    nl: Nonlinearity,
    f: TrigPoly,
    starts: Sequence[TrigPoly],
    s: int,
    *,
    tol: float = DEFAULT_TOLERANCE,
    defect_threshold: float = DEFAULT_DEFECT_THRESHOLD,
    orientation: Orientation = "minus",
    grid_size: int | None = None,
    max_workers: int | None = None,
) -> tuple[list[SolutionRecord], list[StartOutcome]]:
    """Newton from every start, deduplicated into Z_s orbit classes and classified by symmetry defect.

    Solutions are grouped by orbit distance under Z_s. When f is constant the problem is invariant
    under every translation and classes are merged up to continuous shifts as well.

    Returns:
        The orbit-class representatives (in order of first discovery) and one outcome per start.
    """
    results = await map_threaded(
        lambda u0: _solve_start(nl, f, u0, tol, orientation, grid_size), list(starts), max_workers
    )

    action = ZmAction(s)
    continuous = is_constant_forcing(f)
    representatives: list[SolveReport] = []
    members: list[list[int]] = []
    outcomes: list[StartOutcome] = []
    for index, result in enumerate(results):
        if isinstance(result, NumericalError):
            outcomes.append(
                StartOutcome(
                    index=index,
                    converged=False,
                    error={"type": type(result).__name__, "message": str(result)},
                )
            )
            logger.debug("start_failed", index=index, error=type(result).__name__)
            continue
        class_id = next(
            (
                k
                for k, rep in enumerate(representatives)
                if _same_orbit(result.solution, rep.solution, action, continuous=continuous)
            ),
            None,
        )
        if class_id is None:
            class_id = len(representatives)
            representatives.append(result)
            members.append([])
        members[class_id].append(index)
        outcomes.append(
            StartOutcome(
                index=index,
                converged=True,
                iterations=result.iterations,
                residual_h1=result.residual_h1,
                orbit_class_id=class_id,
            )
        )

    records = []
    for class_id, rep in enumerate(representatives):
        defect = symmetry_defect(rep.solution, s)
        records.append(
            SolutionRecord(
                orbit_class_id=class_id,
                solution=rep.solution,
                residual_h1=rep.residual_h1,
                defect=defect.defect,
                relative_defect=defect.relative_defect,
                asymmetric=defect.relative_defect > defect_threshold,
                periodicity_index=periodicity_index(rep.solution),
                start_indices=tuple(members[class_id]),
            )
        )
    return records, outcomes


@dataclass(frozen=True, slots=True)
class BreakingRunRecord:
    r: int
    s: int
    J: int  # noqa: N815
    seed: int
    n_starts: int
    defect_threshold: float
    hypotheses: HypothesisReport
    witness: CrossingWitness
    window0: WindowCertificate
    window1: WindowCertificate
    morse0: MorseReport
    morse1: MorseReport
    fhat: TrigPoly
    u_star: TrigPoly
    u_star_residual_h1: float
    solutions: tuple[SolutionRecord, ...]
    starts: tuple[StartOutcome, ...] = field(repr=False)

    @property
    def m0(self) -> int:
        return self.morse0.index

    @property
    def m1(self) -> int:
        return self.morse1.index

    @property
    def broke_symmetry(self) -> bool:
        """Whether some computed solution has relative defect above the threshold."""
        return any(record.asymmetric for record in self.solutions)

    @property
    def fhat_leakage(self) -> float:
        """Relative coefficient mass of f̂ on modes outside V_s."""
        norm = l2_norm(self.fhat)
        return l2_norm(project_Vs_perp(self.fhat, self.s)) / norm if norm > 0 else 0.0

    def to_dict(self) -> dict[str, Any]:
        return {
            "r": self.r,
            "s": self.s,
            "J": self.J,
            "seed": self.seed,
            "n_starts": self.n_starts,
            "defect_threshold": self.defect_threshold,
            "hypotheses": self.hypotheses.to_dict(),
            "witness": self.witness.to_dict(),
            "window0": self.window0.to_dict(),
            "window1": self.window1.to_dict(),
            "m0": self.m0,
            "m1": self.m1,
            "morse0": self.morse0.to_dict(),
            "morse1": self.morse1.to_dict(),
            "fhat": self.fhat.to_dict(),
            "fhat_leakage": self.fhat_leakage,
            "u_star": self.u_star.to_dict(),
            "u_star_residual_h1": self.u_star_residual_h1,
            "broke_symmetry": self.broke_symmetry,
            "n_orbit_classes": len(self.solutions),
            "solutions": [record.to_dict() for record in self.solutions],
            "starts": [outcome.to_dict() for outcome in self.starts],
        }


async def break_search(cfg: BreakingConfig, *, max_workers: int | None = None) -> BreakingRunRecord:
    """Run the symmetry-breaking pipeline for one configuration.

    Raises:
        PreconditionViolationError: If a growth hypothesis on g fails.
        NoWitnessError: If g' does not cross r².
        NoWindowError: If no window certifies around t0 or t1.

    Returns:
        The run record; individual start failures are recorded, not raised.
    """
    nl = canonical_nonlinearity(cfg.nl, cfg.orientation)
    hypotheses = check_hypotheses(nl, cfg.probe_radius)
    if hypotheses.failed:
        raise PreconditionViolationError("Nonlinearity fails a growth hypothesis", context=hypotheses.to_dict())
    if not hypotheses.passed:
        logger.warning("hypotheses_inconclusive", **hypotheses.to_dict())

    witness = find_crossing(nl, cfg.r, cfg.search_lo, cfg.search_hi, cfg.n_samples)
    window0 = find_delta(nl, witness.t0, SpectralGap(cfg.r - 1), WINDOW_MARGIN, delta_max=cfg.delta_max)
    window1 = find_delta(nl, witness.t1, SpectralGap(cfg.r), WINDOW_MARGIN, delta_max=cfg.delta_max)

    u0_star = ustar(window0.t_center, window0.delta, cfg.s, cfg.J)
    morse0 = morse_index(QuadraticForm.at_profile(nl, u0_star, cfg.s, cfg.J))
    fhat, u_star = construct_fhat(nl, witness, cfg.s, window1.delta, cfg.J, cfg.grid_size)
    morse1 = morse_index(QuadraticForm.at_profile(nl, u_star, cfg.s, cfg.J))
    u_star_residual = h1_norm(canonical_residual(u_star, nl, fhat, grid_size=cfg.grid_size))

    starts = initial_guesses(u_star, cfg.r, cfg.s, cfg.n_starts, cfg.seed, cfg.eps)
    solutions, outcomes = await search_solutions(
        nl,
        fhat,
        starts,
        cfg.s,
        tol=cfg.tol,
        defect_threshold=cfg.defect_threshold,
        grid_size=cfg.grid_size,
        max_workers=max_workers,
    )

    record = BreakingRunRecord(
        r=cfg.r,
        s=cfg.s,
        J=cfg.J,
        seed=cfg.seed,
        n_starts=cfg.n_starts,
        defect_threshold=cfg.defect_threshold,
        hypotheses=hypotheses,
        witness=witness,
        window0=window0,
        window1=window1,
        morse0=morse0,
        morse1=morse1,
        fhat=fhat,
        u_star=u_star,
        u_star_residual_h1=u_star_residual,
        solutions=tuple(solutions),
        starts=tuple(outcomes),
    )
    logger.info(
        "break_search",
        r=cfg.r,
        s=cfg.s,
        m0=record.m0,
        m1=record.m1,
        n_orbit_classes=len(solutions),
        broke_symmetry=record.broke_symmetry,
    )
    return record


def break_search_sync(cfg: BreakingConfig, *, max_workers: int | None = None) -> BreakingRunRecord:
    """Synchronous version of :func:`break_search`."""
    return run_blocking(break_search, cfg, max_workers=max_workers)


@dataclass(frozen=True, slots=True)
class MorseExperiment:
    """Morse indices of the two profile forms across truncation orders, with their constant references."""

    r: int
    s: int
    witness: CrossingWitness
    window0: WindowCertificate
    window1: WindowCertificate
    stability0: IndexStability
    stability1: IndexStability
    reference0: int
    """Index of the constant form at c = g'(t0)."""
    reference1: int

    @property
    def stable(self) -> bool:
        return self.stability0.stable and self.stability1.stable

    @property
    def nondegenerate(self) -> bool:
        reports = [*self.stability0.reports.values(), *self.stability1.reports.values()]
        return not any(report.degenerate for report in reports)

    def to_dict(self) -> dict[str, Any]:
        return {
            "r": self.r,
            "s": self.s,
            "witness": self.witness.to_dict(),
            "window0": self.window0.to_dict(),
            "window1": self.window1.to_dict(),
            "profile0": {str(order): report.to_dict() for order, report in self.stability0.reports.items()},
            "profile1": {str(order): report.to_dict() for order, report in self.stability1.reports.items()},
            "reference0": self.reference0,
            "reference1": self.reference1,
            "stable": self.stable,
            "nondegenerate": self.nondegenerate,
        }


def morse_experiment(
    cfg: BreakingConfig,
    orders: Sequence[int] = (16, 32, 64),
    degeneracy_tol: float = DEGENERACY_RELATIVE_TOL,
) -> MorseExperiment:
    """Indices of Q(h) = ∫ |h'|² - g'(u*_i)|h|² on V_s⊥ for the window profiles around t0 and t1.

    Raises:
        NoWitnessError: If g' does not cross r².
        NoWindowError: If no window certifies around t0 or t1.

    Returns:
        The experiment record.
    """
    nl = canonical_nonlinearity(cfg.nl, cfg.orientation)
    witness = find_crossing(nl, cfg.r, cfg.search_lo, cfg.search_hi, cfg.n_samples)
    windows = [
        find_delta(nl, center, SpectralGap(i), WINDOW_MARGIN, delta_max=cfg.delta_max)
        for center, i in ((witness.t0, cfg.r - 1), (witness.t1, cfg.r))
    ]

    def stability(window: WindowCertificate) -> IndexStability:
        def form(order: int) -> QuadraticForm:
            return QuadraticForm.at_profile(nl, ustar(window.t_center, window.delta, cfg.s, order), cfg.s, order)

        return index_stability(form, orders, degeneracy_tol)

    return MorseExperiment(
        r=cfg.r,
        s=cfg.s,
        witness=witness,
        window0=windows[0],
        window1=windows[1],
        stability0=stability(windows[0]),
        stability1=stability(windows[1]),
        reference0=analytic_constant_index(witness.gp_t0, cfg.s),
        reference1=analytic_constant_index(witness.gp_t1, cfg.s),
    )
