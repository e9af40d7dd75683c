from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np
import pytest

from symlab._registry import (
    NonlinearityFamily,
    NonlinearityRegistry,
    finite_difference_audit,
    rational_decay,
    tanh,
)
from symlab._trig import Nonlinearity
from symlab.exceptions import ValidationError

if TYPE_CHECKING:
    from collections.abc import Iterator


def _skewed(alpha: float = 2.0) -> Nonlinearity:
    return Nonlinearity(g=lambda x: alpha * x, g_prime=lambda x: np.full_like(x, 1.01 * alpha))


@pytest.fixture
def skewed_family() -> Iterator[NonlinearityFamily]:
    family = NonlinearityFamily("skewed", _skewed, {"alpha": 2.0})
    NonlinearityRegistry.add_family(family)
    yield family
    NonlinearityRegistry.remove_family(family.name)


def test_builtin_names() -> None:
    assert NonlinearityRegistry.names() == sorted(
        ["linear", "mixed_sine", "sine", "cubic", "tanh", "tanh_ramp", "rational_decay"]
    )


def test_get_binds_defaults() -> None:
    entry = NonlinearityRegistry.get("mixed_sine", {"beta": 0.25})
    assert entry.parameters == {"alpha": 2.5, "beta": 0.25}
    assert float(entry.nonlinearity.evaluate(np.pi / 2)) == pytest.approx(2.5 * np.pi / 2 + 0.25)
    assert NonlinearityRegistry.get("mixed_sine", {"beta": 0.25}) is entry


def test_entry_dict() -> None:
    data = NonlinearityRegistry.get("rational_decay", {"a": 4.0}).to_dict()
    assert data["analytic_flags"] == {"bounded": True, "coercive_primitive": True}
    assert data["c_g"] == 2.0
    assert data["closed_form_primitive"] is True


def test_unknown_family() -> None:
    with pytest.raises(ValidationError, match="Unknown nonlinearity") as exc_info:
        NonlinearityRegistry.get("nope")
    assert "linear" in exc_info.value.context["available"]


def test_unknown_parameter() -> None:
    with pytest.raises(ValidationError) as exc_info:
        NonlinearityRegistry.get("linear", {"beta": 1.0})
    assert exc_info.value.context["unknown"] == ["beta"]


def test_invalid_parameter_value() -> None:
    with pytest.raises(ValidationError):
        NonlinearityRegistry.get("tanh", {"b": 0.0})


@pytest.mark.parametrize(
    ("name", "params"),
    [
        ("linear", {"alpha": 3.0}),
        ("mixed_sine", {}),
        ("sine", {}),
        ("cubic", {}),
        ("tanh", {"a": -2.0, "b": 0.5}),
        ("tanh_ramp", {}),
        ("rational_decay", {"a": 40.0}),
    ],
)
def test_builtin_families_pass_audit(name: str, params: dict[str, float]) -> None:
    report = NonlinearityRegistry.audit(name, params)
    assert report.passed
    assert report.max_relative_error <= report.tol


def test_wrong_derivative_is_rejected(skewed_family: NonlinearityFamily) -> None:
    report = NonlinearityRegistry.audit(skewed_family.name)
    assert not report.passed
    assert report.max_relative_error == pytest.approx(0.01 / 1.01)
    with pytest.raises(ValidationError, match="finite-difference audit") as exc_info:
        NonlinearityRegistry.get(skewed_family.name)
    assert exc_info.value.context["passed"] is False


def test_registered_family_shadows_builtin() -> None:
    family = NonlinearityFamily("linear", lambda alpha: tanh(alpha), {"alpha": 1.0})
    NonlinearityRegistry.add_family(family)
    try:
        assert NonlinearityRegistry.get("linear").nonlinearity.c_g == 1.0
    finally:
        NonlinearityRegistry.remove_family("linear")
    assert NonlinearityRegistry.get("linear").nonlinearity.c_g is None


def test_audit_report_fields() -> None:
    entry = NonlinearityRegistry.get("rational_decay")
    report = finite_difference_audit(entry, n_probes=11)
    assert report.n_probes == 11
    assert -4.0 <= report.worst_probe <= 4.0
    assert report.to_dict()["passed"] is True


def test_rational_decay_bound() -> None:
    nl = rational_decay(3.0)
    probes = np.linspace(-20.0, 20.0, 4001)
    assert np.max(np.abs(nl.evaluate(probes))) <= 1.5 + 1e-12
    assert nl.primitive_at(2.0) == pytest.approx(-1.5 * np.log(5.0))
