"""The operator L = -d²/dt² with periodic conditions, represented spectrally."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Literal

import numpy as np

from symlab._constants import RESONANCE_MARGIN
from symlab._trig import TrigPoly
from symlab.exceptions import BelowSpectrumError, ResonantShiftError, ValidationError

IN_SPECTRUM: Literal["in_spectrum"] = "in_spectrum"


@dataclass(frozen=True, slots=True)
class SpectralGap:
    """The open interval (i², (i+1)²) between consecutive eigenvalues of L."""

    i: int

    def __post_init__(self) -> None:
        if self.i < 0:
            raise ValidationError("Gap index must be nonnegative", context={"i": self.i})

    @property
    def lo(self) -> float:
        return float(self.i**2)

    @property
    def hi(self) -> float:
        return float((self.i + 1) ** 2)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, value: float, margin: float = 0.0) -> bool:
        """Whether lo + margin < value < hi - margin."""
        return self.lo + margin < value < self.hi - margin

    def to_dict(self) -> dict[str, Any]:
        return {"i": self.i, "lo": self.lo, "hi": self.hi}


def eigenvalue(j: int) -> float:
    """λ_j = j²."""
    if j < 0:
        raise ValidationError("Eigenvalue index must be nonnegative", context={"j": j})
    return float(j * j)


def multiplicity(j: int) -> int:
    """λ_0 is simple, every other eigenvalue is double."""
    if j < 0:
        raise ValidationError("Eigenvalue index must be nonnegative", context={"j": j})
    return 1 if j == 0 else 2


def spectrum_table(max_j: int) -> list[dict[str, Any]]:
    return [{"j": j, "lambda": eigenvalue(j), "multiplicity": multiplicity(j)} for j in range(max_j + 1)]


def apply_L(u: TrigPoly) -> TrigPoly:  # noqa: N802
    """Lu = -u''; mode j is scaled by j²."""
    squares = u.modes.astype(np.float64) ** 2
    return TrigPoly(0.0, squares * u.cos_coeffs, squares * u.sin_coeffs)


def resolvent_apply(c: float, rhs: TrigPoly) -> TrigPoly:
    """(L - cI)⁻¹ rhs, computed mode by mode.

    Raises:
        ResonantShiftError: If |j² - c| < 1e-9 for some 0 <= j <= J.
    """
    squares = np.arange(rhs.order + 1, dtype=np.float64) ** 2
    shifted = squares - c
    nearest = int(np.argmin(np.abs(shifted)))
    if abs(shifted[nearest]) < RESONANCE_MARGIN:
        raise ResonantShiftError(
            f"Shift {c} is resonant with eigenvalue {nearest}²",
            context={"c": c, "j": nearest, "margin": RESONANCE_MARGIN},
        )
    return TrigPoly(rhs.a0 / shifted[0], rhs.cos_coeffs / shifted[1:], rhs.sin_coeffs / shifted[1:])


def resolvent_norm_l2_to_h1(c: float) -> float:
    """max_j √(1+j²)/|j² - c|, the operator norm of (L - cI)⁻¹ from L² into H¹.

    The maximum is attained next to c, so only the modes up to the gap above c are scanned.
    """
    top = math.isqrt(max(math.ceil(c), 0)) + 3
    j = np.arange(top, dtype=np.float64)
    return float(np.max(np.sqrt(1.0 + j**2) / np.abs(j**2 - c)))


def gap_of(c: float) -> SpectralGap | Literal["in_spectrum"]:
    """Locate c relative to σ(L) = {j²}.

    Raises:
        BelowSpectrumError: If c < 0, i.e. c lies in the unbounded gap (-∞, λ_0).

    Returns:
        The gap containing c, or ``"in_spectrum"`` when c is within 1e-9 of some j².
    """
    if c < -RESONANCE_MARGIN:
        raise BelowSpectrumError(f"Value {c} lies below the spectrum of L", context={"c": c})
    root = math.sqrt(max(c, 0.0))
    nearest = round(root)
    if abs(nearest * nearest - c) < RESONANCE_MARGIN:
        return IN_SPECTRUM
    i = math.floor(root)
    if i * i > c:
        i -= 1
    elif (i + 1) ** 2 < c:
        i += 1
    return SpectralGap(i)
