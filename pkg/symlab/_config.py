"""Experiment configuration discovery and loading.

Experiments are described by TOML files: either a ``symlab.toml`` document or the ``[tool.symlab]``
table of a ``pyproject.toml``. Loading converts the document into frozen dataclasses through
msgspec, fills defaults, validates cross-field rules, and fingerprints the result with a digest of
its canonical JSON.
"""

from __future__ import annotations

import hashlib
import math
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, Any, Literal

import msgspec

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib  # type: ignore[import-not-found]

from symlab._constants import (
    DEFAULT_DEFECT_THRESHOLD,
    DEFAULT_DELTA_MAX,
    DEFAULT_GRID_SIZE,
    DEFAULT_MAX_ITER,
    DEFAULT_ORDER,
    DEFAULT_TOLERANCE,
    DEGENERACY_RELATIVE_TOL,
    SCHEMA_VERSION,
)
from symlab._registry import NonlinearityRegistry, NonlinearityRegistryEntry
from symlab._trig import TrigPoly
from symlab.exceptions import ParseError, SchemaError, ValidationError

if TYPE_CHECKING:
    from collections.abc import Mapping

CONFIG_FILE_NAME = "symlab.toml"

_PATH_PATTERN = re.compile(r"at `(\$[^`]*)`")
_SECTION_ALIASES = {"break": "breaking"}


@dataclass(frozen=True, slots=True)
class NonlinearityConfig:
    name: str = "mixed_sine"
    params: dict[str, float] = field(default_factory=dict)


@dataclass(frozen=True, slots=True)
class ForcingConfig:
    """f = a0 + Σ cos[j-1]·cos(jt) + sin[j-1]·sin(jt)."""

    a0: float = 0.0
    cos: list[float] = field(default_factory=list)
    sin: list[float] = field(default_factory=list)

    def to_trig(self, order: int) -> TrigPoly:
        cos_coeffs = [*self.cos, *([0.0] * (order - len(self.cos)))]
        sin_coeffs = [*self.sin, *([0.0] * (order - len(self.sin)))]
        return TrigPoly(self.a0, cos_coeffs, sin_coeffs)


@dataclass(frozen=True, slots=True)
class SolveSection:
    method: Literal["contraction", "newton"] = "contraction"
    forcing: ForcingConfig = field(default_factory=ForcingConfig)
    q: float | None = None
    """Declared lower bound of g'; sampled on [-range_radius, range_radius] when absent."""
    p: float | None = None
    range_radius: float = 10.0
    max_iter: int = DEFAULT_MAX_ITER


@dataclass(frozen=True, slots=True)
class PreserveSection:
    s: int = 2
    n_starts: int = 10
    forcing: ForcingConfig = field(default_factory=lambda: ForcingConfig(cos=[0.0, 0.4]))
    q: float | None = None
    p: float | None = None
    range_radius: float = 10.0


@dataclass(frozen=True, slots=True)
class BreakSection:
    r: int = 2
    s: int = 3
    n_starts: int = 16
    defect_threshold: float = DEFAULT_DEFECT_THRESHOLD
    search_lo: float = -10.0
    search_hi: float = 10.0
    n_samples: int = 4001
    delta_max: float = DEFAULT_DELTA_MAX
    eps: float = 0.1
    probe_radius: float = 50.0


@dataclass(frozen=True, slots=True)
class MorseSection:
    orders: list[int] = field(default_factory=lambda: [16, 32, 64])
    degeneracy_tol: float = DEGENERACY_RELATIVE_TOL


@dataclass(frozen=True, slots=True)
class ExperimentConfig:
    schema_version: int = SCHEMA_VERSION
    seed: int = 0
    J: int = DEFAULT_ORDER  # noqa: N815
    N: int = DEFAULT_GRID_SIZE  # noqa: N815
    tol: float = DEFAULT_TOLERANCE
    orientation: Literal["minus", "plus"] = "minus"
    nonlinearity: NonlinearityConfig = field(default_factory=NonlinearityConfig)
    solve: SolveSection = field(default_factory=SolveSection)
    preserve: PreserveSection = field(default_factory=PreserveSection)
    breaking: BreakSection = field(default_factory=BreakSection)
    morse: MorseSection = field(default_factory=MorseSection)

    @property
    def digest(self) -> str:
        """SHA-256 of the canonical JSON of the configuration."""
        return config_digest(self)

    def nonlinearity_entry(self) -> NonlinearityRegistryEntry:
        return NonlinearityRegistry.get(self.nonlinearity.name, self.nonlinearity.params)


def config_digest(config: ExperimentConfig) -> str:
    return hashlib.sha256(msgspec.json.encode(config, order="deterministic")).hexdigest()


def load_config_from_file(config_path: Path) -> dict[str, Any]:
    """Load the raw configuration table from a TOML file.

    Args:
        config_path: Path to ``symlab.toml`` or to a ``pyproject.toml`` with a ``[tool.symlab]`` table.

    Raises:
        ParseError: If the file cannot be read or parsed.

    Returns:
        Dictionary containing the loaded configuration.
    """
    try:
        with config_path.open("rb") as f:
            data = tomllib.load(f)
    except (FileNotFoundError, IsADirectoryError) as e:
        raise ParseError(f"Configuration file not found: {config_path}", context={"path": str(config_path)}) from e
    except tomllib.TOMLDecodeError as e:
        raise ParseError(f"Invalid TOML in configuration file: {e}", context={"path": str(config_path)}) from e

    if config_path.name == "pyproject.toml":
        return data.get("tool", {}).get("symlab", {})  # type: ignore[no-any-return]
    return data


def find_config_file(start_path: Path | None = None) -> Path | None:
    """Find a configuration file by searching up the directory tree.

    ``symlab.toml`` wins over a ``pyproject.toml`` with a ``[tool.symlab]`` section in the same directory.

    Args:
        start_path: Directory to start searching from. Defaults to current working directory.

    Returns:
        Path to the configuration file or None if not found.
    """
    current = start_path or Path.cwd()

    while current != current.parent:
        symlab_toml = current / CONFIG_FILE_NAME
        if symlab_toml.exists():
            return symlab_toml

        pyproject_toml = current / "pyproject.toml"
        if pyproject_toml.exists():
            try:
                with pyproject_toml.open("rb") as f:
                    data = tomllib.load(f)
                if "tool" in data and "symlab" in data["tool"]:
                    return pyproject_toml
            except Exception:  # noqa: BLE001
                pass

        current = current.parent
    return None


def merge_configs(base: dict[str, Any], override: dict[str, Any]) -> dict[str, Any]:
    """Merge two configuration dictionaries recursively.

    Args:
        base: Base configuration dictionary.
        override: Configuration dictionary to override base values.

    Returns:
        Merged configuration dictionary.
    """
    result = base.copy()
    for key, value in override.items():
        if isinstance(value, dict) and key in result and isinstance(result[key], dict):
            result[key] = merge_configs(result[key], value)
        else:
            result[key] = value
    return result


def _public_path(path: str) -> str:
    for table, attribute in _SECTION_ALIASES.items():
        path = path.replace(f"$.{attribute}", f"$.{table}", 1)
    return path


def _validate(config: ExperimentConfig) -> None:
    if config.schema_version != SCHEMA_VERSION:
        raise SchemaError.at_path(
            "$.schema_version", f"Unsupported schema version {config.schema_version}", supported=SCHEMA_VERSION
        )
    if config.seed < 0:
        raise SchemaError.at_path("$.seed", "Seed must be nonnegative", value=config.seed)
    if config.J < 1:
        raise SchemaError.at_path("$.J", "Truncation order must be a positive integer", value=config.J)
    if config.N % 2 or config.N < 4 * config.J:
        raise SchemaError.at_path("$.N", "Grid size must be even and at least 4J", N=config.N, J=config.J)
    if not config.tol > 0:
        raise SchemaError.at_path("$.tol", "Tolerance must be positive", value=config.tol)

    try:
        config.nonlinearity_entry()
    except ValidationError as e:
        path = "$.nonlinearity.name" if "available" in (e.context or {}) else "$.nonlinearity.params"
        raise SchemaError.at_path(path, str(e.args[0]), **(e.context or {})) from e

    for section in ("solve", "preserve"):
        forcing: ForcingConfig = getattr(config, section).forcing
        if max(len(forcing.cos), len(forcing.sin)) > config.J:
            raise SchemaError.at_path(f"$.{section}.forcing", "Forcing has modes above the truncation order J")

    if config.preserve.s < 1:
        raise SchemaError.at_path("$.preserve.s", "Symmetry order must be a positive integer", value=config.preserve.s)

    breaking = config.breaking
    if breaking.s < 2:
        raise SchemaError.at_path("$.break.s", "Symmetry breaking needs s >= 2", value=breaking.s)
    if breaking.r < 1:
        raise SchemaError.at_path("$.break.r", "Crossing index r must be a positive integer", value=breaking.r)
    if math.gcd(breaking.r, breaking.s) != 1:
        raise SchemaError.at_path(
            "$.break.s",
            f"gcd(r, s) = {math.gcd(breaking.r, breaking.s)} violates the symmetry-breaking hypothesis gcd(r, s) = 1",
            r=breaking.r,
            s=breaking.s,
        )
    if not 0 < breaking.defect_threshold < 1:
        raise SchemaError.at_path("$.break.defect_threshold", "Defect threshold must lie in (0, 1)")


def build_config_from_dict(config_dict: Mapping[str, Any]) -> ExperimentConfig:
    """Convert and validate a raw configuration dictionary.

    Raises:
        SchemaError: If a field has the wrong type or value; the field path is in the error context.

    Returns:
        The validated configuration with defaults filled in.
    """
    data = {_SECTION_ALIASES.get(key, key): value for key, value in config_dict.items()}
    try:
        config = msgspec.convert(data, type=ExperimentConfig, strict=False)
    except msgspec.ValidationError as e:
        message = str(e)
        match = _PATH_PATTERN.search(message)
        raise SchemaError.at_path(_public_path(match.group(1)) if match else "$", message) from e
    _validate(config)
    return config


def load_config(config_path: Path | str, overrides: Mapping[str, Any] | None = None) -> ExperimentConfig:
    """Load, merge, and validate an experiment configuration.

    Args:
        config_path: Path to the configuration file.
        overrides: Values merged over the file contents, e.g. ``{"seed": 7}``.

    Raises:
        ParseError: If the file cannot be read or parsed.
        SchemaError: If the configuration is invalid.

    Returns:
        The validated configuration.
    """
    config_dict = load_config_from_file(Path(config_path))
    if overrides:
        config_dict = merge_configs(config_dict, dict(overrides))
    return build_config_from_dict(config_dict)
