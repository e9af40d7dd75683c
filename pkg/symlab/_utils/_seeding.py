"""Reproducible random streams keyed by (seed, component, index)."""

from __future__ import annotations

import zlib

import numpy as np


def component_key(component: str) -> int:
    """Stable 32-bit key of a component name (independent of PYTHONHASHSEED)."""
    return zlib.crc32(component.encode())


def derive_rng(seed: int, component: str, index: int = 0) -> np.random.Generator:
    """Independent generator for one stochastic component.

    Streams for different (component, index) pairs are statistically independent, so work can be
    distributed over threads without changing any result.
    """
    return np.random.default_rng([seed, component_key(component), index])
