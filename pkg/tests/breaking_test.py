from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np
import pytest

from symlab._breaking import (
    BreakingConfig,
    BreakingRunRecord,
    CrossingWitness,
    _same_orbit,
    break_search,
    break_search_sync,
    check_hypotheses,
    construct_fhat,
    find_crossing,
    initial_guesses,
    is_constant_forcing,
    morse_experiment,
    search_solutions,
)
from symlab._group import ZmAction, symmetry_defect
from symlab._mawhin import canonical_residual
from symlab._records import RunManifest, emit_record
from symlab._registry import linear, rational_decay, sine, tanh, tanh_ramp
from symlab._trig import Nonlinearity, TrigPoly, h1_norm, project_Vs_perp
from symlab._utils._serialization import encode_json
from symlab._utils._sync import run_blocking
from symlab.exceptions import NoWitnessError, PreconditionViolationError, ValidationError

if TYPE_CHECKING:
    from pathlib import Path


@pytest.fixture(scope="module")
def acceptance_config() -> BreakingConfig:
    return BreakingConfig(nl=rational_decay(40.0), r=2, s=3, J=16, n_starts=6, seed=0)


@pytest.fixture(scope="module")
def acceptance_record(acceptance_config: BreakingConfig) -> BreakingRunRecord:
    return break_search_sync(acceptance_config)


class TestBreakingConfig:
    def test_gcd_gate(self, crossing_23: Nonlinearity) -> None:
        with pytest.raises(PreconditionViolationError, match=r"gcd\(r, s\) = 1") as exc_info:
            BreakingConfig(nl=crossing_23, r=2, s=4)
        assert exc_info.value.context == {"r": 2, "s": 4}

    def test_trivial_symmetry(self, crossing_23: Nonlinearity) -> None:
        with pytest.raises(PreconditionViolationError):
            BreakingConfig(nl=crossing_23, r=2, s=1)

    def test_crossing_index(self, crossing_23: Nonlinearity) -> None:
        with pytest.raises(PreconditionViolationError):
            BreakingConfig(nl=crossing_23, r=0, s=3)

    def test_truncation_must_resolve_modes(self, crossing_23: Nonlinearity) -> None:
        with pytest.raises(ValidationError):
            BreakingConfig(nl=crossing_23, r=2, s=5, J=4)

    def test_needs_a_start(self, crossing_23: Nonlinearity) -> None:
        with pytest.raises(ValidationError):
            BreakingConfig(nl=crossing_23, r=2, s=3, n_starts=0)


class TestHypotheses:
    def test_rational_decay_passes(self) -> None:
        report = check_hypotheses(rational_decay(1.0))
        assert report.boundedness == "pass"
        assert report.coercivity == "pass"
        assert report.passed
        assert report.max_abs_g <= 0.5 + 1e-12

    def test_linear_growth_fails_boundedness(self) -> None:
        report = check_hypotheses(linear(1.0))
        assert report.boundedness == "fail"
        assert report.failed

    def test_periodic_primitive_fails_coercivity(self) -> None:
        report = check_hypotheses(sine())
        assert report.boundedness == "pass"
        assert report.coercivity == "fail"

    def test_declared_non_coercive(self) -> None:
        assert check_hypotheses(tanh(1.0)).coercivity == "fail"

    def test_undeclared_bounded_decay_is_inconclusive(self) -> None:
        nl = Nonlinearity(g=lambda x: -np.tanh(x), g_prime=lambda x: -1.0 / np.cosh(x) ** 2)
        report = check_hypotheses(nl)
        assert report.boundedness == "inconclusive"
        assert report.coercivity == "inconclusive"
        assert not report.passed
        assert not report.failed
        assert report.notes

    def test_primitive_samples(self) -> None:
        report = check_hypotheses(rational_decay(1.0), probe_radius=10.0)
        assert set(report.primitive_samples) == {"5", "10", "20", "-5", "-10", "-20"}
        assert report.to_dict()["coercivity_is_heuristic"] is True

    def test_probe_radius(self) -> None:
        with pytest.raises(ValidationError):
            check_hypotheses(sine(), probe_radius=0.0)


class TestFindCrossing:
    def test_tanh_ramp(self) -> None:
        witness = find_crossing(tanh_ramp(3.0, 3.0), 2)
        assert 1.0 < witness.gp_t0 < 4.0 < witness.gp_t1 < 9.0
        assert witness.gp_t0 - 1.0 >= 1e-3
        assert witness.gp_t1 - 4.0 >= 1e-3

    def test_never_crosses(self, linear_25: Nonlinearity) -> None:
        with pytest.raises(NoWitnessError):
            find_crossing(linear_25, 2)

    def test_lower_window_missed(self, linear_25: Nonlinearity) -> None:
        with pytest.raises(NoWitnessError) as exc_info:
            find_crossing(linear_25, 1)
        assert exc_info.value.context["gap"]["lo"] == 0.0

    def test_empty_interval(self, linear_25: Nonlinearity) -> None:
        with pytest.raises(ValidationError):
            find_crossing(linear_25, 2, 1.0, -1.0)

    def test_witness_validation(self) -> None:
        with pytest.raises(ValidationError):
            CrossingWitness(r=2, t0=0.0, t1=1.0, gp_t0=4.5, gp_t1=5.0)


class TestConstructFhat:
    witness = CrossingWitness(r=2, t0=0.0, t1=0.7, gp_t0=2.5, gp_t1=5.0)

    def test_linear_closed_form(self, linear_25: Nonlinearity) -> None:
        fhat, u_star = construct_fhat(linear_25, self.witness, 3, 0.3, order=8)
        expected = TrigPoly.from_modes(8, a0=-2.5 * 0.7, sin={3: 0.3 * (9 - 2.5)})
        assert h1_norm(fhat - expected) <= 1e-12
        assert h1_norm(u_star - TrigPoly.from_modes(8, a0=0.7, sin={3: 0.3})) <= 1e-15

    def test_zero_width(self, linear_25: Nonlinearity) -> None:
        fhat, _ = construct_fhat(linear_25, self.witness, 3, 0.0, order=8)
        assert h1_norm(fhat - TrigPoly.constant(-2.5 * 0.7, 8)) <= 1e-12

    def test_support_on_multiples_of_s(self, crossing_23: Nonlinearity) -> None:
        fhat, u_star = construct_fhat(crossing_23, self.witness, 3, 0.4, order=24)
        assert h1_norm(project_Vs_perp(fhat, 3)) <= 1e-12 * h1_norm(fhat)
        assert h1_norm(canonical_residual(u_star, crossing_23, fhat)) <= 1e-10


class TestInitialGuesses:
    def test_structure(self) -> None:
        u_star = TrigPoly.from_modes(8, a0=1.0, sin={3: 0.2})
        starts = initial_guesses(u_star, 2, 3, 9, seed=4, eps=0.1)
        assert len(starts) == 9
        assert starts[0] is u_star
        assert h1_norm(starts[1] - u_star - TrigPoly.from_modes(8, cos={2: 0.1})) <= 1e-15
        assert h1_norm(starts[4] - u_star + TrigPoly.from_modes(8, sin={2: 0.1})) <= 1e-15
        for start in starts[5:]:
            perturbation = start - u_star
            assert h1_norm(perturbation) == pytest.approx(0.1)
            assert h1_norm(project_Vs_perp(perturbation, 3)) == pytest.approx(0.1)

    def test_truncated_to_request(self) -> None:
        assert len(initial_guesses(TrigPoly.zeros(4), 1, 2, 2)) == 2

    def test_seeded(self) -> None:
        first = initial_guesses(TrigPoly.zeros(6), 1, 2, 8, seed=1)
        second = initial_guesses(TrigPoly.zeros(6), 1, 2, 8, seed=1)
        other = initial_guesses(TrigPoly.zeros(6), 1, 2, 8, seed=2)
        assert all(np.array_equal(a.to_vector(), b.to_vector()) for a, b in zip(first, second, strict=True))
        assert not np.array_equal(first[-1].to_vector(), other[-1].to_vector())


class TestSearchSolutions:
    def test_planted_asymmetric_solution(self, pinched: Nonlinearity) -> None:
        planted = TrigPoly.from_modes(8, cos={1: 0.5}, sin={3: 0.1})
        f = canonical_residual(planted, pinched, TrigPoly.zeros(8))
        starts = [planted, planted + TrigPoly.from_modes(8, sin={2: 0.05})]
        records, outcomes = run_blocking(search_solutions, pinched, f, starts, 3)
        assert len(records) == 1
        assert records[0].asymmetric
        assert h1_norm(records[0].solution - planted) <= 1e-9
        assert records[0].start_indices == (0, 1)
        assert all(outcome.converged for outcome in outcomes)

    def test_symmetric_regime_has_one_symmetric_class(self, pinched: Nonlinearity) -> None:
        f = TrigPoly.from_modes(12, cos={3: 0.4})
        starts = initial_guesses(TrigPoly.zeros(12), 2, 3, 6, seed=0, eps=0.5)
        records, _ = run_blocking(search_solutions, pinched, f, starts, 3)
        assert len(records) == 1
        assert not records[0].asymmetric
        assert records[0].defect <= 1e-9

    def test_failures_are_recorded(self) -> None:
        records, outcomes = run_blocking(
            search_solutions, linear(4.0), TrigPoly.from_modes(3, cos={1: 1.0}), [TrigPoly.zeros(3)], 3
        )
        assert records == []
        assert not outcomes[0].converged
        assert outcomes[0].error is not None
        assert outcomes[0].error["type"] == "SingularJacobianError"

    def test_orbit_identification(self) -> None:
        sin1 = TrigPoly.from_modes(2, sin={1: 1.0})
        cos1 = TrigPoly.from_modes(2, cos={1: 1.0})
        assert _same_orbit(sin1, -sin1, ZmAction(2), continuous=False)
        assert not _same_orbit(cos1, sin1, ZmAction(2), continuous=False)
        assert _same_orbit(cos1, sin1, ZmAction(2), continuous=True)

    def test_constant_forcing_detection(self) -> None:
        assert is_constant_forcing(TrigPoly.zeros(4))
        assert is_constant_forcing(TrigPoly.constant(2.0, 4))
        assert is_constant_forcing(TrigPoly.from_modes(4, a0=2.0, sin={3: 1e-16}))
        assert not is_constant_forcing(TrigPoly.from_modes(4, a0=2.0, sin={3: 1e-3}))


class TestBreakSearch:
    def test_index_jump(self, acceptance_record: BreakingRunRecord) -> None:
        assert acceptance_record.m0 == 2
        assert acceptance_record.m1 == 4
        assert acceptance_record.m1 - acceptance_record.m0 == 2
        assert not acceptance_record.morse0.degenerate
        assert not acceptance_record.morse1.degenerate

    def test_planted_solution(self, acceptance_record: BreakingRunRecord) -> None:
        assert acceptance_record.fhat_leakage <= 1e-12
        assert acceptance_record.u_star_residual_h1 <= 1e-10
        assert symmetry_defect(acceptance_record.u_star, 3).defect <= 1e-12
        assert acceptance_record.hypotheses.passed

    def test_orbit_classes(self, acceptance_record: BreakingRunRecord) -> None:
        assert acceptance_record.solutions
        first = acceptance_record.solutions[0]
        assert 0 in first.start_indices
        assert not first.asymmetric
        assert len(acceptance_record.starts) == 6
        assert acceptance_record.broke_symmetry == any(record.asymmetric for record in acceptance_record.solutions)

    def test_record_is_deterministic(
        self, acceptance_config: BreakingConfig, acceptance_record: BreakingRunRecord, tmp_path: Path
    ) -> None:
        again = break_search_sync(acceptance_config, max_workers=1)
        assert encode_json(again.to_dict()) == encode_json(acceptance_record.to_dict())

        manifest = RunManifest(
            command="break-search",
            config_digest="ab" * 32,
            seed=0,
            J=16,
            N=256,
            orientation="minus",
            tool_version="test",
        )
        first = emit_record(acceptance_record, tmp_path / "first", manifest)
        second = emit_record(again, tmp_path / "second", manifest)
        assert len(first) == len(acceptance_record.solutions) + 2
        for a, b in zip(first[:-1], second[:-1], strict=True):
            assert a.name == b.name
            assert a.read_bytes() == b.read_bytes()

    def test_rejects_failing_hypotheses(self) -> None:
        with pytest.raises(PreconditionViolationError):
            break_search_sync(BreakingConfig(nl=sine(), r=2, s=3))

    @pytest.mark.anyio
    async def test_async_entry_point(self, acceptance_config: BreakingConfig) -> None:
        record = await break_search(acceptance_config, max_workers=2)
        assert record.m1 - record.m0 == 2


class TestMorseExperiment:
    def test_indices_are_stable(self, acceptance_config: BreakingConfig) -> None:
        experiment = morse_experiment(acceptance_config, orders=(16, 32, 64))
        assert experiment.stable
        assert experiment.nondegenerate
        assert {report.index for report in experiment.stability0.reports.values()} == {2}
        assert {report.index for report in experiment.stability1.reports.values()} == {4}
        assert (experiment.reference0, experiment.reference1) == (2, 4)
        assert set(experiment.to_dict()["profile1"]) == {"16", "32", "64"}

    @pytest.mark.parametrize(
        ("r", "s", "a", "expected_m0"),
        [(2, 3, 40.0, 2), (3, 2, 100.0, 2), (1, 2, 40.0, 0)],
    )
    def test_index_gap_at_order_32(self, r: int, s: int, a: float, expected_m0: int) -> None:
        # max g' = a/8, so a = 100 is needed to cross 9
        experiment = morse_experiment(BreakingConfig(nl=rational_decay(a), r=r, s=s, J=32), orders=(32,))
        m0 = experiment.stability0.reports[32].index
        m1 = experiment.stability1.reports[32].index
        assert (m0, m1) == (expected_m0, expected_m0 + 2)
        assert experiment.reference1 - experiment.reference0 == 2
        assert experiment.nondegenerate
