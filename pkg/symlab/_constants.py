from __future__ import annotations

from typing import Final

DEFAULT_ORDER: Final[int] = 64
DEFAULT_GRID_SIZE: Final[int] = 256
DEFAULT_TOLERANCE: Final[float] = 1e-10
DEFAULT_MAX_ITER: Final[int] = 200

RESONANCE_MARGIN: Final[float] = 1e-9
PERIODICITY_RELATIVE_TOL: Final[float] = 1e-9
SYMMETRY_LEAKAGE_TOL: Final[float] = 1e-10

RATE_SLACK: Final[float] = 0.05
MAX_STEP_HALVINGS: Final[int] = 30
SINGULAR_RELATIVE_TOL: Final[float] = 1e-12

DEGENERACY_RELATIVE_TOL: Final[float] = 1e-8
WINDOW_MARGIN: Final[float] = 1e-3
WINDOW_SAMPLES: Final[int] = 513
DEFAULT_DELTA_MAX: Final[float] = 1.0
GOLDEN_RATIO: Final[float] = 1.618033988749895

CROSSING_MARGIN: Final[float] = 1e-3
DEFAULT_DEFECT_THRESHOLD: Final[float] = 0.05

FD_STEP: Final[float] = 1e-5
FD_RELATIVE_TOL: Final[float] = 1e-6
FD_PROBES: Final[int] = 64

SCHEMA_VERSION: Final[int] = 1
