"""Trajectory synthesis and classical transport simulation for tweezer-held atoms."""

__version__ = "0.1.0"

from .config import ConfigError, load_config, parse_path_file, parse_path_text
from .constants import RB87, PhysicalConstants
from .dynamics import (
    AtomState,
    IntegratorConfig,
    StepTooLarge,
    TransportOutcome,
    integrate,
    integrate_ensemble,
)
from .heating import (
    HeatingReport,
    RegimeWarning,
    ResolutionError,
    delta_n_at_capacity,
    delta_n_closed_form,
    delta_n_running_max,
    delta_n_spectral,
    l_max,
    scaling_table,
)
from .montecarlo import (
    BoundaryFit,
    EnsembleConfig,
    EnsembleResult,
    ShuttleResult,
    SweepGrid,
    boundary_coefficient,
    run_ensemble,
    sample_initial_state,
    shuttle,
    sweep,
)
from .thermometry import (
    FitFailure,
    PiecewiseFit,
    SurvivalCurve,
    TemperatureFit,
    fit_temperature,
    mb_cdf,
    piecewise_linear_compare,
    sample_mb_energies,
    survival_curve,
)
from .trajectory import (
    BoundaryConditions,
    CompositePath,
    JunctionMismatch,
    PathKind,
    PathSegment,
    SegmentSpec,
    chain,
    cj_path,
    concatenate,
    const_angular_path,
    cv_path,
    hold_path,
    quintic_coefficients,
    sta_arc,
    sta_linear,
)
from .scenarios import (
    RunManifest,
    ScenarioConfig,
    run_scenario,
    scenario_config,
    validate_path,
)
from .trap import TrapModel, TrapParams, TrapVariant, gaussian, truncated_harmonic

__all__ = [
    "ConfigError",
    "load_config",
    "parse_path_file",
    "parse_path_text",
    "RunManifest",
    "ScenarioConfig",
    "run_scenario",
    "scenario_config",
    "validate_path",
    "RB87",
    "PhysicalConstants",
    "AtomState",
    "IntegratorConfig",
    "StepTooLarge",
    "TransportOutcome",
    "integrate",
    "integrate_ensemble",
    "HeatingReport",
    "RegimeWarning",
    "ResolutionError",
    "delta_n_at_capacity",
    "delta_n_closed_form",
    "delta_n_running_max",
    "delta_n_spectral",
    "l_max",
    "scaling_table",
    "BoundaryFit",
    "EnsembleConfig",
    "EnsembleResult",
    "ShuttleResult",
    "SweepGrid",
    "boundary_coefficient",
    "run_ensemble",
    "sample_initial_state",
    "shuttle",
    "sweep",
    "FitFailure",
    "PiecewiseFit",
    "SurvivalCurve",
    "TemperatureFit",
    "fit_temperature",
    "mb_cdf",
    "piecewise_linear_compare",
    "sample_mb_energies",
    "survival_curve",
    "BoundaryConditions",
    "CompositePath",
    "JunctionMismatch",
    "PathKind",
    "PathSegment",
    "SegmentSpec",
    "chain",
    "cj_path",
    "concatenate",
    "const_angular_path",
    "cv_path",
    "hold_path",
    "quintic_coefficients",
    "sta_arc",
    "sta_linear",
    "TrapModel",
    "TrapParams",
    "TrapVariant",
    "gaussian",
    "truncated_harmonic",
]
