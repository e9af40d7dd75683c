from importlib.metadata import version

from symlab._breaking import (
    BreakingConfig,
    BreakingRunRecord,
    CrossingWitness,
    HypothesisReport,
    MorseExperiment,
    SolutionRecord,
    break_search,
    break_search_sync,
    check_hypotheses,
    construct_fhat,
    find_crossing,
    initial_guesses,
    morse_experiment,
    search_solutions,
)
from symlab._config import ExperimentConfig, find_config_file, load_config
from symlab._group import ZmAction, act, is_fixed, orbit_distance, shift_distance, symmetry_defect, translate
from symlab._lyapunov_schmidt import (
    PreservationReport,
    SplitState,
    preservation_check,
    preservation_check_sync,
    residual_pair,
    split,
)
from symlab._mawhin import (
    GapCertificate,
    SolveReport,
    canonical_residual,
    certify_gap,
    contraction_solve,
    derivative_range,
    newton_solve,
)
from symlab._morse import (
    MorseReport,
    QuadraticForm,
    WindowCertificate,
    analytic_constant_index,
    find_delta,
    index_stability,
    morse_index,
    ustar,
)
from symlab._operator import SpectralGap, apply_L, eigenvalue, gap_of, multiplicity, resolvent_apply
from symlab._records import RunManifest, emit_record
from symlab._registry import NonlinearityRegistry
from symlab._trig import (
    GridFunction,
    Nonlinearity,
    TrigPoly,
    compose,
    from_samples,
    h1_norm,
    l2_norm,
    periodicity_index,
    project_Vs,
    project_Vs_perp,
    to_samples,
)

from .exceptions import ConfigError, NumericalError, SymlabError, ValidationError

__version__ = version("symlab")

__all__ = [
    "BreakingConfig",
    "BreakingRunRecord",
    "ConfigError",
    "CrossingWitness",
    "ExperimentConfig",
    "GapCertificate",
    "GridFunction",
    "HypothesisReport",
    "MorseExperiment",
    "MorseReport",
    "Nonlinearity",
    "NonlinearityRegistry",
    "NumericalError",
    "PreservationReport",
    "QuadraticForm",
    "RunManifest",
    "SolutionRecord",
    "SolveReport",
    "SpectralGap",
    "SplitState",
    "SymlabError",
    "TrigPoly",
    "ValidationError",
    "WindowCertificate",
    "ZmAction",
    "__version__",
    "act",
    "analytic_constant_index",
    "apply_L",
    "break_search",
    "break_search_sync",
    "canonical_residual",
    "certify_gap",
    "check_hypotheses",
    "compose",
    "construct_fhat",
    "contraction_solve",
    "derivative_range",
    "eigenvalue",
    "emit_record",
    "find_config_file",
    "find_crossing",
    "find_delta",
    "from_samples",
    "gap_of",
    "h1_norm",
    "index_stability",
    "initial_guesses",
    "is_fixed",
    "l2_norm",
    "load_config",
    "morse_experiment",
    "morse_index",
    "multiplicity",
    "newton_solve",
    "orbit_distance",
    "periodicity_index",
    "preservation_check",
    "preservation_check_sync",
    "project_Vs",
    "project_Vs_perp",
    "residual_pair",
    "resolvent_apply",
    "search_solutions",
    "shift_distance",
    "split",
    "symmetry_defect",
    "to_samples",
    "translate",
    "ustar",
]
