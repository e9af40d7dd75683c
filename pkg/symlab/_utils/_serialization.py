"""Deterministic serialization built on msgspec."""

from __future__ import annotations

from typing import Any

import msgspec
import numpy as np

_DICT_METHOD_NAMES = ("to_dict", "tolist")


def encode_hook(obj: Any) -> Any:
    """Custom encoder for numpy values, records and exceptions."""
    if isinstance(obj, np.generic):
        return obj.item()

    if isinstance(obj, Exception):
        return {"message": str(obj), "type": type(obj).__name__}

    for attr_name in _DICT_METHOD_NAMES:
        method = getattr(obj, attr_name, None)
        if method is not None and callable(method):
            return method()

    raise TypeError(f"Unsupported type: {type(obj)!r}")


def to_builtins(value: Any) -> Any:
    """Convert a value to JSON-compatible builtins with deterministic key order."""
    return msgspec.to_builtins(value, enc_hook=encode_hook, order="deterministic")


def encode_json(value: Any, *, indent: int = 2) -> bytes:
    """Encode a value as JSON; equal inputs give byte-identical output.

    Raises:
        ValueError: If the value cannot be serialized.
    """
    try:
        raw = msgspec.json.encode(value, enc_hook=encode_hook, order="deterministic")
    except (msgspec.MsgspecError, TypeError) as e:
        raise ValueError(f"Failed to serialize {type(value).__name__}: {e}") from e
    return msgspec.json.format(raw, indent=indent) + b"\n" if indent else raw
