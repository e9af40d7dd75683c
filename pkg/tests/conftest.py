from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np
import pytest

from symlab._registry import linear, mixed_sine, rational_decay
from symlab._trig import Nonlinearity, TrigPoly

if TYPE_CHECKING:
    from collections.abc import Callable, Generator


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240601)


@pytest.fixture(scope="session")
def pinched() -> Nonlinearity:
    """g(x) = 2.5x + 0.5 sin x, with g' in [2, 3] inside the gap (1, 4)."""
    return mixed_sine(2.5, 0.5)


@pytest.fixture(scope="session")
def linear_25() -> Nonlinearity:
    return linear(2.5)


@pytest.fixture(scope="session")
def crossing_23() -> Nonlinearity:
    """Bounded g with coercive primitive whose derivative crosses 4 = 2²."""
    return rational_decay(40.0)


@pytest.fixture(scope="session")
def square() -> Nonlinearity:
    return Nonlinearity(g=lambda x: x**2, g_prime=lambda x: 2.0 * x, description="x^2")


@pytest.fixture
def random_poly(rng: np.random.Generator) -> Callable[[int], TrigPoly]:
    def build(order: int) -> TrigPoly:
        return TrigPoly(float(rng.standard_normal()), rng.standard_normal(order), rng.standard_normal(order))

    return build


@pytest.fixture
def reset_logging() -> Generator[None, None, None]:
    import structlog

    yield
    structlog.reset_defaults()
