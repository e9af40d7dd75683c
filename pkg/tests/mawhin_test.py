from __future__ import annotations

import math
from itertools import combinations
from typing import TYPE_CHECKING

import numpy as np
import pytest

from symlab._constants import RATE_SLACK
from symlab._mawhin import (
    GapCertificate,
    canonical_nonlinearity,
    canonical_residual,
    certify_gap,
    check_solution_range,
    contraction_solve,
    derivative_range,
    jacobian_matrix,
    newton_solve,
)
from symlab._operator import SpectralGap
from symlab._registry import cubic, linear, mixed_sine
from symlab._trig import Nonlinearity, TrigPoly, h1_norm, l2_norm
from symlab.exceptions import (
    GapViolationError,
    MaxIterExceededError,
    PostHocRangeViolationError,
    SingularJacobianError,
    StagnationError,
    ValidationError,
)

if TYPE_CHECKING:
    from collections.abc import Callable


def random_forcing(rng: np.random.Generator, order: int, scale: float = 1.0) -> TrigPoly:
    decay = 1.0 / (1.0 + np.arange(1, order + 1) ** 2)
    return TrigPoly(
        scale * float(rng.standard_normal()),
        scale * decay * rng.standard_normal(order),
        scale * decay * rng.standard_normal(order),
    )


class TestDerivativeRange:
    def test_mixed_sine(self, pinched: Nonlinearity) -> None:
        q, p = derivative_range(pinched, -10, 10)
        assert q == pytest.approx(2.0, abs=1e-3)
        assert p == pytest.approx(3.0, abs=1e-3)

    def test_linear(self) -> None:
        assert derivative_range(linear(1.7), -1, 1) == (1.7, 1.7)

    def test_cubic(self) -> None:
        q, p = derivative_range(cubic(), -1, 1)
        assert q == pytest.approx(0.0, abs=1e-5)
        assert p == pytest.approx(3.0)

    def test_invalid_interval(self, pinched: Nonlinearity) -> None:
        with pytest.raises(ValidationError):
            derivative_range(pinched, 1, 1)
        with pytest.raises(ValidationError):
            derivative_range(pinched, 0, 1, n_samples=10)


class TestCertifyGap:
    def test_rate(self) -> None:
        cert = certify_gap(1.2, 3.8)
        assert cert.gap == SpectralGap(1)
        assert cert.c == pytest.approx(2.5)
        assert cert.kappa == pytest.approx(1.3 / 1.5)

    def test_linear_pinching(self) -> None:
        assert certify_gap(2.5, 2.5).kappa == 0.0

    def test_straddling(self) -> None:
        with pytest.raises(GapViolationError) as exc_info:
            certify_gap(3.0, 6.0)
        assert exc_info.value.context["j"] == 2

    def test_touching_an_eigenvalue(self) -> None:
        with pytest.raises(GapViolationError) as exc_info:
            certify_gap(1.0, 3.0)
        assert exc_info.value.context["j"] == 1

    def test_below_spectrum(self) -> None:
        with pytest.raises(GapViolationError):
            certify_gap(-0.5, 0.5)

    def test_reversed_bounds(self) -> None:
        with pytest.raises(ValidationError):
            certify_gap(3.0, 2.0)

    def test_certificate_validates_itself(self) -> None:
        with pytest.raises(GapViolationError):
            GapCertificate(SpectralGap(1), 0.5, 2.0)

    def test_lipschitz_constants(self) -> None:
        cert = certify_gap(2.0, 3.0)
        assert cert.kappa == pytest.approx(1.0 / 3.0)
        assert cert.lipschitz_l2 == pytest.approx(1.0)
        assert cert.lipschitz_h1 == pytest.approx(math.sqrt(5) / 1.5 * 1.5)
        assert set(cert.to_dict()) >= {"gap", "q", "p", "c", "kappa", "lipschitz_l2", "lipschitz_h1"}


class TestCanonicalForm:
    def test_plus_orientation_negates(self, pinched: Nonlinearity) -> None:
        u = TrigPoly.from_modes(3, cos={1: 0.4}, sin={2: 0.1})
        f = TrigPoly.from_modes(3, cos={2: 1.0})
        minus = canonical_residual(u, pinched, f, "minus")
        plus = canonical_residual(u, pinched.negated(), f, "plus")
        assert h1_norm(minus - plus) <= 1e-12

    def test_unknown_orientation(self, pinched: Nonlinearity) -> None:
        with pytest.raises(ValidationError):
            canonical_nonlinearity(pinched, "sideways")  # type: ignore[arg-type]


class TestContraction:
    def test_linear_mode_solve(self, linear_25: Nonlinearity) -> None:
        f = TrigPoly.from_modes(1, cos={1: 1.0})
        report = contraction_solve(linear_25, f, certify_gap(2.5, 2.5))
        assert report.iterations == 1
        assert report.solution.cos_coeffs[0] == pytest.approx(-2.0 / 3.0)
        assert report.range_checked

    def test_zero_forcing(self, pinched: Nonlinearity) -> None:
        report = contraction_solve(pinched, TrigPoly.zeros(8), certify_gap(2.0, 3.0))
        assert report.iterations == 0
        assert h1_norm(report.solution) == 0.0

    def test_pinched_regime(self, pinched: Nonlinearity) -> None:
        cert = certify_gap(2.0, 3.0)
        f = TrigPoly.from_modes(16, cos={2: 1.0})
        report = contraction_solve(pinched, f, cert)
        assert report.residual_h1 <= 1e-10
        assert report.observed_rate <= 0.55
        assert report.observed_rate <= cert.kappa + RATE_SLACK
        assert report.observed_rate_h1 <= cert.kappa + RATE_SLACK
        newton = newton_solve(pinched, f)
        assert h1_norm(report.solution - newton.solution) <= 1e-9

    def test_observed_rate_bound(self, pinched: Nonlinearity, rng: np.random.Generator) -> None:
        cert = certify_gap(2.0, 3.0)
        for _ in range(5):
            report = contraction_solve(pinched, random_forcing(rng, 16), cert)
            assert report.observed_rate <= 0.39
            assert len(report.step_norms) == report.iterations

    def test_global_lipschitz(self, pinched: Nonlinearity, rng: np.random.Generator) -> None:
        cert = certify_gap(2.0, 3.0)
        for _ in range(20):
            f1, f2 = random_forcing(rng, 12, 2.0), random_forcing(rng, 12, 2.0)
            u1 = contraction_solve(pinched, f1, cert).solution
            u2 = contraction_solve(pinched, f2, cert).solution
            gap = l2_norm(f1 - f2)
            assert l2_norm(u1 - u2) <= cert.lipschitz_l2 * gap + 1e-8
            assert h1_norm(u1 - u2) <= cert.lipschitz_h1 * gap + 1e-8

    def test_start_independence(self, pinched: Nonlinearity, random_poly: Callable[[int], TrigPoly]) -> None:
        cert = certify_gap(2.0, 3.0)
        f = TrigPoly.from_modes(10, a0=0.3, cos={1: 0.5}, sin={3: -0.2})
        tol = 1e-10
        solutions = [contraction_solve(pinched, f, cert, random_poly(10), tol).solution for _ in range(10)]
        assert max(h1_norm(a - b) for a, b in combinations(solutions, 2)) <= 10 * tol

    def test_post_hoc_range_violation(self) -> None:
        # the solution has amplitude near 2, so g'(u) drops well below 2.9
        cert = certify_gap(2.9, 3.0)
        with pytest.raises(PostHocRangeViolationError) as exc_info:
            contraction_solve(mixed_sine(2.5, 0.5), TrigPoly.from_modes(4, cos={1: 3.0}), cert)
        assert exc_info.value.context["q"] == 2.9

    def test_range_check_can_be_skipped(self) -> None:
        cert = certify_gap(2.9, 3.0)
        report = contraction_solve(
            mixed_sine(2.5, 0.5), TrigPoly.from_modes(4, cos={1: 3.0}), cert, check_range=False
        )
        assert not report.range_checked

    def test_check_solution_range(self, pinched: Nonlinearity) -> None:
        low, high = check_solution_range(TrigPoly.from_modes(2, sin={1: math.pi}), pinched, certify_gap(2.0, 3.0))
        assert low == pytest.approx(2.0, abs=1e-3)
        assert high == pytest.approx(3.0)

    def test_iteration_budget(self, pinched: Nonlinearity) -> None:
        with pytest.raises(MaxIterExceededError) as exc_info:
            contraction_solve(pinched, TrigPoly.from_modes(4, cos={2: 1.0}), certify_gap(2.0, 3.0), max_iter=2)
        assert exc_info.value.context["max_iter"] == 2

    def test_plus_orientation(self, pinched: Nonlinearity) -> None:
        f = TrigPoly.from_modes(6, sin={2: 0.7})
        minus = contraction_solve(pinched, f, certify_gap(2.0, 3.0))
        plus = contraction_solve(pinched.negated(), f, certify_gap(2.0, 3.0), orientation="plus")
        assert h1_norm(minus.solution - plus.solution) <= 1e-12


class TestNewton:
    def test_manufactured_solution(self, pinched: Nonlinearity, rng: np.random.Generator) -> None:
        exact = TrigPoly.from_modes(8, sin={2: 0.3}, cos={5: 0.1})
        f = canonical_residual(exact, pinched, TrigPoly.zeros(8))
        noise = TrigPoly(0.0, 1e-3 * rng.standard_normal(8), 1e-3 * rng.standard_normal(8))
        report = newton_solve(pinched, f, exact + noise)
        assert h1_norm(report.solution - exact) <= 1e-9
        assert report.method == "newton"

    def test_linear_converges_in_one_step(self) -> None:
        report = newton_solve(linear(2.5), TrigPoly.from_modes(4, cos={1: 1.0, 3: 0.5}))
        assert report.iterations == 1

    def test_resonant_linearization(self) -> None:
        with pytest.raises(SingularJacobianError) as exc_info:
            newton_solve(linear(4.0), TrigPoly.from_modes(3, cos={1: 1.0}))
        assert exc_info.value.context["smallest_singular_value"] <= 1e-10

    def test_jacobian_is_symmetric_after_scaling(self, pinched: Nonlinearity) -> None:
        u = TrigPoly.from_modes(6, a0=0.2, cos={1: 0.5}, sin={4: -0.3})
        jacobian = jacobian_matrix(u, pinched)
        norms = np.sqrt(np.concatenate(([2 * np.pi], np.full(12, np.pi))))
        scaled = norms[:, None] * jacobian / norms[None, :]
        np.testing.assert_allclose(scaled, scaled.T, atol=1e-12)

    def test_jacobian_matches_finite_differences(self, pinched: Nonlinearity, rng: np.random.Generator) -> None:
        u = TrigPoly.from_modes(4, a0=0.1, cos={1: 0.5}, sin={2: 0.2})
        h = TrigPoly(0.0, rng.standard_normal(4), rng.standard_normal(4))
        zero = TrigPoly.zeros(4)
        step = 1e-6
        forward = canonical_residual(u + step * h, pinched, zero)
        backward = canonical_residual(u - step * h, pinched, zero)
        difference = (forward - backward) * (1 / (2 * step))
        np.testing.assert_allclose(jacobian_matrix(u, pinched) @ h.to_vector(), difference.to_vector(), atol=1e-7)

    def test_iteration_budget(self, pinched: Nonlinearity) -> None:
        with pytest.raises(MaxIterExceededError):
            newton_solve(pinched, TrigPoly.from_modes(4, cos={2: 5.0}), max_iter=1)

    def test_stagnation_is_reported(self) -> None:
        # with the wrong sign of g' every damped step on mode 1 grows the residual
        wrong_slope = Nonlinearity(g=lambda x: 2.5 * x, g_prime=lambda _: -5.0, description="skewed")
        f = TrigPoly.from_modes(2, cos={1: 1.0})
        with pytest.raises(StagnationError) as exc_info:
            newton_solve(wrong_slope, f)
        assert exc_info.value.context["iteration"] == 0
        assert exc_info.value.context["residual_h1"] == pytest.approx(h1_norm(f))
