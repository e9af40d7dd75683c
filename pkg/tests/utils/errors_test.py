"""Tests for error handling utilities."""

from __future__ import annotations

from typing import TYPE_CHECKING

from symlab._utils._errors import create_error_context
from symlab.exceptions import SingularJacobianError

if TYPE_CHECKING:
    from pathlib import Path

    from pytest_mock import MockerFixture


def test_create_error_context_basic() -> None:
    assert create_error_context(operation="solve") == {"operation": "solve"}


def test_create_error_context_with_config(tmp_path: Path) -> None:
    config = tmp_path / "symlab.toml"
    config.write_text("seed = 1\n")
    context = create_error_context(operation="solve", config_path=config)
    assert context["config"] == {"path": str(config), "name": "symlab.toml", "exists": True}


def test_create_error_context_with_missing_config() -> None:
    context = create_error_context(operation="solve", config_path="/nonexistent/symlab.toml")
    assert context["config"]["exists"] is False


def test_create_error_context_with_error() -> None:
    error = SingularJacobianError("Jacobian is singular", context={"sigma_min": 0.0})
    context = create_error_context(operation="break_search", error=error, start=3)
    assert context["error"]["type"] == "SingularJacobianError"
    assert context["error"]["message"] == str(error)
    assert context["error"]["traceback"]
    assert context["start"] == 3
    assert "system" not in context


def test_create_error_context_resource_error() -> None:
    context = create_error_context(operation="break_search", error=MemoryError("cannot allocate"))
    assert "system" in context
    assert context["system"]["cpu_count"] >= 1
    assert context["system"]["memory_available_mb"] > 0


def test_create_error_context_psutil_failure(mocker: MockerFixture) -> None:
    mocker.patch("symlab._utils._errors.psutil.virtual_memory", side_effect=OSError("no /proc"))
    context = create_error_context(operation="solve", error=RuntimeError("thread exhausted"))
    assert "system" not in context
    assert context["error"]["type"] == "RuntimeError"
