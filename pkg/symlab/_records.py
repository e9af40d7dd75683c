"""Run manifests and on-disk records.

A run writes ``<command>-<digest[:8]>.json`` (manifest and record), one CSV grid per solution, and a
sidecar ``<command>-<digest[:8]>.timing.json`` with the wall time, so the JSON record itself is
byte-identical across repeated runs of the same configuration.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib.metadata import PackageNotFoundError, version
from typing import TYPE_CHECKING, Any, Literal

from symlab._breaking import BreakingRunRecord
from symlab._lyapunov_schmidt import PreservationReport
from symlab._mawhin import SolveReport
from symlab._trig import to_samples
from symlab._utils._serialization import encode_json, to_builtins
from symlab.exceptions import IoError

if TYPE_CHECKING:
    from pathlib import Path

    from symlab._config import ExperimentConfig
    from symlab._trig import TrigPoly


def tool_version() -> str:
    try:
        return version("symlab")
    except PackageNotFoundError:
        return "0+unknown"


@dataclass(frozen=True, slots=True)
class RunManifest:
    command: str
    config_digest: str
    seed: int
    J: int  # noqa: N815
    N: int  # noqa: N815
    orientation: Literal["minus", "plus"]
    tool_version: str
    wall_time_ms: int = 0

    @classmethod
    def from_config(cls, command: str, config: ExperimentConfig, wall_time_ms: int = 0) -> RunManifest:
        return cls(
            command=command,
            config_digest=config.digest,
            seed=config.seed,
            J=config.J,
            N=config.N,
            orientation=config.orientation,
            tool_version=tool_version(),
            wall_time_ms=wall_time_ms,
        )

    @property
    def stem(self) -> str:
        return f"{self.command}-{self.config_digest[:8]}"

    def to_dict(self) -> dict[str, Any]:
        """Manifest fields that enter the deterministic record (everything but the wall time)."""
        return {
            "command": self.command,
            "config_digest": self.config_digest,
            "seed": self.seed,
            "J": self.J,
            "N": self.N,
            "orientation": self.orientation,
            "tool_version": self.tool_version,
        }


def solution_curves(report: Any) -> list[tuple[str, TrigPoly]]:
    """The (label, solution) pairs of a report that are written as CSV grids."""
    if isinstance(report, SolveReport):
        return [("solution", report.solution)]
    if isinstance(report, PreservationReport):
        return [("solution", report.solve.solution)]
    if isinstance(report, BreakingRunRecord):
        return [(f"class{record.orbit_class_id}", record.solution) for record in report.solutions]
    return []


def record_payload(report: Any, manifest: RunManifest) -> dict[str, Any]:
    record = report.to_dict() if callable(getattr(report, "to_dict", None)) else report
    return {"manifest": manifest.to_dict(), "record": to_builtins(record)}


def emit_record(report: Any, out_dir: Path, manifest: RunManifest) -> list[Path]:
    """Write the JSON record, its CSV grids, and the timing sidecar.

    Args:
        report: A report with ``to_dict()`` or a plain mapping.
        out_dir: Output directory, created if missing.
        manifest: The run manifest.

    Raises:
        IoError: If the directory or a file cannot be written.

    Returns:
        The written paths: JSON record first, then the CSV grids, then the timing sidecar.
    """
    stem = manifest.stem
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        record_path = out_dir / f"{stem}.json"
        record_path.write_bytes(encode_json(record_payload(report, manifest)))
        paths = [record_path]
        for label, solution in solution_curves(report):
            csv_path = out_dir / f"{stem}-{label}.csv"
            grid = max(manifest.N, 2 * solution.order + 2)
            csv_path.write_text(to_samples(solution, grid).to_csv(), encoding="utf-8")
            paths.append(csv_path)
        timing_path = out_dir / f"{stem}.timing.json"
        timing_path.write_bytes(encode_json({"command": manifest.command, "wall_time_ms": manifest.wall_time_ms}))
        paths.append(timing_path)
    except OSError as e:
        raise IoError(f"Cannot write records to {out_dir}: {e}", context={"out_dir": str(out_dir)}) from e
    return paths
