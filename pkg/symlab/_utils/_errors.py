"""Error context helpers."""

from __future__ import annotations

import platform
import traceback
from pathlib import Path
from typing import Any

import psutil

_SYSTEM_ERROR_KEYWORDS = frozenset({"memory", "resource", "thread", "allocate"})


def create_error_context(
    *,
    operation: str,
    config_path: Path | str | None = None,
    error: Exception | None = None,
    **extra: Any,
) -> dict[str, Any]:
    """Create error context for CLI reports.

    Args:
        operation: The operation being performed (e.g., "solve", "break_search").
        config_path: The experiment configuration, if any.
        error: The original exception, if any.
        **extra: Additional context fields.

    Returns:
        Dictionary with the error context; resource-flavoured errors also carry system figures.
    """
    context: dict[str, Any] = {"operation": operation}

    if config_path:
        path = Path(config_path)
        context["config"] = {"path": str(path), "name": path.name, "exists": path.exists()}

    if error:
        context["error"] = {
            "type": type(error).__name__,
            "message": str(error),
            "traceback": traceback.format_exception_only(type(error), error),
        }

    if error and (
        isinstance(error, MemoryError) or any(keyword in str(error).lower() for keyword in _SYSTEM_ERROR_KEYWORDS)
    ):
        try:
            mem = psutil.virtual_memory()
            context["system"] = {
                "memory_available_mb": mem.available / 1024 / 1024,
                "memory_percent": mem.percent,
                "cpu_count": psutil.cpu_count(),
                "platform": platform.platform(),
            }
        except Exception:  # noqa: BLE001
            pass

    context.update(extra)

    return context
