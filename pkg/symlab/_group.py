"""The Z_m translation representation T(g)u = u(· + 2πg/m) on periodic series."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from symlab._trig import TrigPoly, h1_norm, project_Vs_perp
from symlab.exceptions import ValidationError

_SHIFT_SCAN_POINTS = 64


@dataclass(frozen=True, slots=True)
class ZmAction:
    """The cyclic group Z_m acting by translation through multiples of 2π/m."""

    m: int

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValidationError("Group order m must be a positive integer", context={"m": self.m})

    def elements(self) -> range:
        return range(self.m)


@dataclass(frozen=True, slots=True)
class SymmetryDefect:
    """H¹ distance of a function to V_s."""

    s: int
    defect: float
    relative_defect: float
    """defect / h1_norm(u), or 0 when u = 0."""


def translate(u: TrigPoly, theta: float) -> TrigPoly:
    """The shifted function u(· + θ)."""
    phase = u.modes * theta
    cos_phase = np.cos(phase)
    sin_phase = np.sin(phase)
    return TrigPoly(
        u.a0,
        u.cos_coeffs * cos_phase + u.sin_coeffs * sin_phase,
        -u.cos_coeffs * sin_phase + u.sin_coeffs * cos_phase,
    )


def act(action: ZmAction, g: int, u: TrigPoly) -> TrigPoly:
    """Apply T(g) for the group element g (reduced mod m)."""
    element = g % action.m
    if element == 0:
        return u
    return translate(u, 2.0 * np.pi * element / action.m)


def is_fixed(action: ZmAction, u: TrigPoly, tol: float = 1e-12) -> bool:
    """Whether T(g)u = u for every g in Z_m, up to tol in H¹."""
    return all(h1_norm(act(action, g, u) - u) <= tol for g in action.elements())


def symmetry_defect(u: TrigPoly, s: int) -> SymmetryDefect:
    defect = h1_norm(project_Vs_perp(u, s))
    norm = h1_norm(u)
    return SymmetryDefect(s=s, defect=defect, relative_defect=defect / norm if norm > 0 else 0.0)


def orbit_distance(u: TrigPoly, v: TrigPoly, action: ZmAction) -> float:
    """min over g in Z_m of ‖u - T(g)v‖_{H¹}."""
    return min(h1_norm(u - act(action, g, v)) for g in action.elements())


def shift_distance(u: TrigPoly, v: TrigPoly) -> float:
    """min over θ in [0, 2π) of ‖u - v(· + θ)‖_{H¹}.

    A coarse scan locates the best bracket, which is then refined by bounded golden-section search.
    """
    step = 2.0 * np.pi / _SHIFT_SCAN_POINTS
    thetas = step * np.arange(_SHIFT_SCAN_POINTS)
    distances = [h1_norm(u - translate(v, theta)) for theta in thetas]
    best = int(np.argmin(distances))
    result = optimize.minimize_scalar(
        lambda theta: h1_norm(u - translate(v, theta)),
        bounds=(thetas[best] - step, thetas[best] + step),
        method="bounded",
        options={"xatol": 1e-12},
    )
    refined = float(result.fun) if result.success else math.inf
    return min(refined, distances[best])
