"""Named experiment pipelines: path construction, ensembles, and file outputs.

Each scenario builds its transport protocol, runs the Monte Carlo arms,
and writes plain CSV plus a JSON sidecar into the output directory. A
manifest records the resolved config, seed, and a checksum per output so
any run can be reproduced bit-exactly.
"""

from __future__ import annotations

import hashlib
import json
import math
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__ as _version
from . import thermometry
from .config import ConfigError, parse_path_file, parse_path_text
from .constants import mK, uK, um, us
from .dynamics import IntegratorConfig
from .heating import l_max as heating_l_max
from .heating import scaling_table as heating_scaling_table
from .montecarlo import (
    EnsembleConfig,
    EnsembleResult,
    boundary_coefficient,
    run_ensemble,
    shuttle,
    sweep,
)
from .trajectory import (
    BoundaryConditions,
    CompositePath,
    JunctionMismatch,
    PathKind,
    SegmentSpec,
    chain,
    concatenate,
    const_angular_path,
    cv_path,
    hold_path,
    sta_arc,
    sta_linear,
)
from .trap import TrapModel, TrapParams, gaussian, truncated_harmonic

# Deflector slew limit for the static waveform check [m/s].
AOD_SPEED_LIMIT = 66.0

# Parked settle time appended after transport so atoms stranded above the
# escape energy actually leave before the final-state readout.
DEFAULT_SETTLE_HOLD = 100.0 * us

SCENARIO_NAMES = ("fig1", "fig2", "fig3", "fig4a", "fig4b", "fig5", "scaling-table")

# Per-scenario ensemble defaults: initial temperature and sample count.
_ENSEMBLE_DEFAULTS = {
    "fig1": (27.0 * uK, 1000),
    "fig2": (27.0 * uK, 200),
    "fig3": (12.0 * uK, 1000),
    "fig4a": (10.0 * uK, 1000),
    "fig4b": (10.0 * uK, 1000),
    "fig5": (27.0 * uK, 500),
    "scaling-table": (0.0, 1),  # no ensemble runs; placeholder config
}

_DEFAULT_SWEEP = {
    "t_f_min": 40.0 * us,
    "t_f_max": 250.0 * us,
    "t_f_count": 8,
    "l_min": 10.0 * um,
    "l_max": 90.0 * um,
    "l_count": 12,
}

# Distance cuts scanned against duration in the sweep scenario [m].
SWEEP_CUTS = (77.5 * um, 51.7 * um, 25.2 * um)

_DEFAULT_SCALING_TF = (100.0 * us, 1000.0 * us)


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything a scenario run needs, resolved to SI values."""

    name: str
    trap: TrapParams
    variant: str  # "gaussian" or "truncated-harmonic"
    ensemble: EnsembleConfig
    out_dir: Path
    workers: int = 1
    settle_hold: float = DEFAULT_SETTLE_HOLD
    path_specs: tuple[SegmentSpec, ...] | None = None  # user path override
    path_text: str | None = None  # the override's source text, for the manifest
    sweep_grid: dict | None = None
    scaling_t_f: tuple[float, ...] = _DEFAULT_SCALING_TF

    def model(self) -> TrapModel:
        if self.variant == "truncated-harmonic":
            return truncated_harmonic(self.trap)
        return gaussian(self.trap)

    def resolved(self) -> dict:
        """Config echo for the manifest, in the config file's units."""
        out = {
            "scenario": self.name,
            "trap": {
                "depth_mK": self.trap.depth / self.trap.constants.k_B * 1e3,
                "width_um": self.trap.width * 1e6,
                "waist_um": self.trap.waist * 1e6,
                "frequency_kHz": self.trap.omega0 / (2.0 * math.pi) / 1e3,
                "variant": self.variant,
            },
            "ensemble": {
                "temperature_uK": self.ensemble.temperature * 1e6,
                "samples": self.ensemble.n_samples,
                "depth_fluctuation_mK": self.ensemble.depth_fluctuation
                / self.trap.constants.k_B
                * 1e3,
                "include_axial_energy": self.ensemble.include_axial_energy,
                "seed": self.ensemble.seed,
            },
            "run": {
                "out": str(self.out_dir),
                "workers": self.workers,
                "settle_hold_us": self.settle_hold * 1e6,
            },
        }
        if self.path_text is not None:
            out["path"] = self.path_text
        if self.sweep_grid is not None:
            out["sweep"] = {
                "t_f_min_us": self.sweep_grid["t_f_min"] * 1e6,
                "t_f_max_us": self.sweep_grid["t_f_max"] * 1e6,
                "t_f_count": self.sweep_grid["t_f_count"],
                "l_min_um": self.sweep_grid["l_min"] * 1e6,
                "l_max_um": self.sweep_grid["l_max"] * 1e6,
                "l_count": self.sweep_grid["l_count"],
            }
        if self.name == "scaling-table":
            out["scaling"] = {"t_f_us": [t * 1e6 for t in self.scaling_t_f]}
        return out


@dataclass(frozen=True)
class RunManifest:
    """Reproducibility record written next to a scenario's outputs."""

    version: str
    scenario: str
    config: dict
    seed: int
    outputs: dict  # file name -> sha256 hex digest
    duration_s: float


def scenario_config(
    name: str,
    file_cfg: dict | None = None,
    seed: int | None = None,
    samples: int | None = None,
    out: str | None = None,
    workers: int | None = None,
) -> ScenarioConfig:
    """Layer scenario defaults under file config under CLI overrides."""
    if name not in SCENARIO_NAMES:
        raise ConfigError("scenario", f"unknown scenario {name!r} (expected one of {SCENARIO_NAMES})")
    cfg = file_cfg or {}

    trap_cfg = cfg.get("trap", {})
    trap_kwargs = {}
    if "depth" in trap_cfg:
        trap_kwargs["depth"] = trap_cfg["depth"]
    if "width" in trap_cfg:
        trap_kwargs["width"] = trap_cfg["width"]
    if "waist" in trap_cfg:
        trap_kwargs["waist"] = trap_cfg["waist"]
    if "frequency" in trap_cfg:
        trap_kwargs["omega0"] = trap_cfg["frequency"]
    if trap_kwargs:
        base = TrapParams.reference()
        trap_kwargs.setdefault("depth", base.depth)
        trap_kwargs.setdefault("width", base.width)
        try:
            trap = TrapParams(**trap_kwargs)
        except ValueError as exc:
            raise ConfigError("trap", str(exc)) from None
    else:
        trap = TrapParams.reference()
    variant = trap_cfg.get("variant", "gaussian")

    temp_default, samples_default = _ENSEMBLE_DEFAULTS[name]
    ens_cfg = cfg.get("ensemble", {})
    n_samples = samples if samples is not None else ens_cfg.get("samples", samples_default)
    if n_samples < 1:
        raise ConfigError("ensemble.samples", f"must be >= 1, got {n_samples}")
    ens_seed = seed if seed is not None else ens_cfg.get("seed", 0)
    try:
        ensemble = EnsembleConfig(
            temperature=ens_cfg.get("temperature", temp_default),
            n_samples=n_samples,
            depth_fluctuation=ens_cfg.get("depth_fluctuation", 0.15 * mK * trap.constants.k_B),
            seed=ens_seed,
            include_axial_energy=ens_cfg.get("include_axial_energy", True),
        )
    except ValueError as exc:
        raise ConfigError("ensemble", str(exc)) from None

    run_cfg = cfg.get("run", {})
    out_dir = Path(out if out is not None else run_cfg.get("out", f"out/{name}"))
    n_workers = workers if workers is not None else run_cfg.get("workers", 1)
    if n_workers < 1:
        raise ConfigError("run.workers", f"must be >= 1, got {n_workers}")

    path_specs = None
    path_text = None
    path_cfg = cfg.get("path", {})
    if "file" in path_cfg and "segments" in path_cfg:
        raise ConfigError("path", "give file or segments, not both")
    if "file" in path_cfg:
        path_specs = tuple(parse_path_file(path_cfg["file"]))
        path_text = Path(path_cfg["file"]).read_text()
    elif "segments" in path_cfg:
        path_text = path_cfg["segments"]
        path_specs = tuple(parse_path_text(path_text))

    sweep_grid = None
    if name == "fig2":
        sweep_grid = dict(_DEFAULT_SWEEP)
        sweep_grid.update(cfg.get("sweep", {}))

    scaling_t_f = cfg.get("scaling", {}).get("t_f", _DEFAULT_SCALING_TF)

    return ScenarioConfig(
        name=name,
        trap=trap,
        variant=variant,
        ensemble=ensemble,
        out_dir=out_dir,
        workers=n_workers,
        settle_hold=run_cfg.get("settle_hold", DEFAULT_SETTLE_HOLD),
        path_specs=path_specs,
        path_text=path_text,
        sweep_grid=sweep_grid,
        scaling_t_f=tuple(scaling_t_f),
    )


# ---------------------------------------------------------------------------
# Deterministic writers. Floats go through repr (shortest round-trip form),
# so identical results give identical bytes on any worker count.


def _clean(value: float) -> float:
    # 12 significant digits: drops binary unit-conversion dust, keeps physics.
    return float(f"{float(value):.12g}")


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(_clean(value))
    return str(value)


def _write_csv(path: Path, header: list[str], rows) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    path.write_text("\n".join(lines) + "\n")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _clean(obj)
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj]
    return obj


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n")


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


# ---------------------------------------------------------------------------
# Path construction helpers.


def _with_settle_hold(segments, settle_hold: float, strict: bool) -> CompositePath:
    """Append a parked hold; a moving endpoint makes the stop a velocity kick."""
    segs = list(segments)
    if settle_hold > 0.0:
        end = segs[-1].endpoint_position(end=True)
        segs.append(hold_path(settle_hold, position=tuple(end)))
    return concatenate(segs, allow_speed_jumps=not strict)


def build_path(specs, settle_hold: float = 0.0, allow_speed_jumps: bool = False) -> CompositePath:
    """Chain parsed segment specs into a composite, optionally with a hold."""
    path = chain(specs, allow_speed_jumps=allow_speed_jumps)
    if settle_hold > 0.0:
        return _with_settle_hold(path.segments, settle_hold, strict=not allow_speed_jumps)
    return path


def max_tweezer_speed(path: CompositePath, omega0: float, n_per_segment: int = 2048) -> float:
    """Peak trap-center speed along the path, for the deflector slew check."""
    top = 0.0
    offset = 0.0
    for seg in path.segments:
        t = np.linspace(0.0, seg.t_f, n_per_segment)
        states = seg.tweezer_states(t, omega0, order=1)
        speed = np.linalg.norm(states[1], axis=1)
        top = max(top, float(speed.max()))
        offset += seg.t_f
    return top


def _aod_block(path: CompositePath, omega0: float) -> dict:
    v = max_tweezer_speed(path, omega0)
    return {
        "max_tweezer_speed_mps": v,
        "speed_limit_mps": AOD_SPEED_LIMIT,
        "within_limit": v <= AOD_SPEED_LIMIT,
    }


# ---------------------------------------------------------------------------
# Path validation: junction diagnostics plus per-segment design margins.


def validate_specs(specs, trap: TrapParams) -> dict:
    """Junction checks and boundary margins for a segment list.

    Margins per moving segment: the designed tweezer-atom excursion against
    the trap half-width (the zero-temperature escape condition for the
    designed motion), the segment length against the excursion-boundary
    distance for its duration, and against the thermal-boundary distance
    (0.336 of the former, where thermal ensembles cross 50% survival).
    """
    report: dict = {"valid": True, "errors": [], "warnings": [], "segments": []}
    try:
        path = chain(specs)
    except JunctionMismatch as exc:
        report["valid"] = False
        report["errors"].append(
            {"type": "junction", "index": exc.index, "kind": exc.kind, "detail": exc.detail}
        )
        # Margins are still informative per segment; rebuild permissively.
        path = chain(specs, allow_speed_jumps=True)

    omega0 = trap.curvature_frequency
    for i, seg in enumerate(path.segments):
        t = np.linspace(0.0, seg.t_f, 2048)
        accel = seg.atom_states(t, order=2)[2]
        xi_design = float(np.linalg.norm(accel, axis=1).max()) / omega0**2
        l_boundary = heating_l_max("sta", seg.t_f, trap)
        length = seg.bc.arc_length
        entry = {
            "index": i,
            "kind": seg.kind.value,
            "t_f_us": seg.t_f * 1e6,
            "length_um": length * 1e6,
            "static": seg.is_static,
            "design_excursion_um": xi_design * 1e6,
            "excursion_over_width": xi_design / trap.width,
            "length_over_boundary": length / l_boundary,
            "length_over_thermal_boundary": length / (0.336 * l_boundary),
        }
        report["segments"].append(entry)
        if xi_design > trap.width or length > l_boundary:
            report["warnings"].append(
                {"index": i, "message": "exceeds designed-excursion boundary"}
            )
        elif length > 0.336 * l_boundary and not seg.is_static:
            report["warnings"].append(
                {"index": i, "message": "exceeds thermal escape boundary (50% survival)"}
            )
    report["aod"] = _aod_block(path, omega0)
    if not report["aod"]["within_limit"]:
        report["warnings"].append({"index": None, "message": "exceeds deflector slew limit"})
    return report


def validate_path(file: str, trap: TrapParams | None = None) -> dict:
    """Parse a path description file and report junctions, margins, slew."""
    specs = parse_path_file(file)
    return validate_specs(specs, trap if trap is not None else TrapParams.reference())


# ---------------------------------------------------------------------------
# Scenario pipelines.


def _ensemble_payload(r: EnsembleResult, trap: TrapParams) -> dict:
    out = {
        "p_success": r.p_success,
        "ci_low": r.ci_low,
        "ci_high": r.ci_high,
        "n_samples": r.n_samples,
        "n_escaped": r.n_escaped,
        "n_failed": r.n_failed,
        "mean_final_energy_J": float(np.mean(r.final_energies)) if len(r.final_energies) else None,
    }
    fit = r.fitted_temperature
    if fit is not None:
        out["fitted_temperature_uK"] = fit.temperature * 1e6
        out["fit_stderr_uK"] = fit.temperature_stderr * 1e6
        out["fit_sup_residual"] = fit.sup_residual
        out["non_thermal"] = fit.non_thermal
    else:
        out["fitted_temperature_uK"] = None
    return out


def _survival_rows(energies: np.ndarray, n_total: int, trap: TrapParams):
    grid = thermometry.default_cutoff_grid(trap.depth)
    curve = thermometry.survival_curve(energies, grid, n_total=n_total)
    kB = trap.constants.k_B
    for e, s in zip(curve.cutoffs, curve.survival):
        yield (e / kB * 1e6, e / trap.depth, s)


_SURVIVAL_HEADER = ["cutoff_uK", "cutoff_over_depth", "survival"]


def _run_fig1(cfg: ScenarioConfig) -> dict:
    """Straight transport: designed-boundary drive vs constant-velocity drag."""
    l, t_f = 12.6 * um, 58.5 * us
    model = cfg.model()
    sta_path = _with_settle_hold(
        [sta_linear(BoundaryConditions(t_f=t_f, distance=l))], cfg.settle_hold, strict=True
    )
    cv = _with_settle_hold([cv_path(l, t_f)], cfg.settle_hold, strict=False)

    r_sta = run_ensemble(sta_path, model, cfg.ensemble, seed_context=(0,))
    r_cv = run_ensemble(cv, model, cfg.ensemble, seed_context=(1,))

    files = {}
    files["survival_sta.csv"] = (
        _SURVIVAL_HEADER,
        list(_survival_rows(r_sta.final_energies, r_sta.n_samples, cfg.trap)),
    )
    files["survival_cv.csv"] = (
        _SURVIVAL_HEADER,
        list(_survival_rows(r_cv.final_energies, r_cv.n_samples, cfg.trap)),
    )

    grid = thermometry.default_cutoff_grid(cfg.trap.depth)
    cv_curve = thermometry.survival_curve(r_cv.final_energies, grid, n_total=r_cv.n_samples)
    pw, pw_dist = thermometry.piecewise_linear_compare(cv_curve, cfg.trap.depth)
    fits = {
        "sta": _ensemble_payload(r_sta, cfg.trap),
        "cv": _ensemble_payload(r_cv, cfg.trap),
        "cv_piecewise": {
            "slope": pw.slope,
            "intercept": pw.intercept,
            "plateau": pw.plateau,
            "sup_distance_to_reference": pw_dist,
        },
        "aod": {
            "sta": _aod_block(sta_path, cfg.trap.curvature_frequency),
            "cv": _aod_block(cv, cfg.trap.curvature_frequency),
        },
    }
    return {"csv": files, "json": {"fits.json": fits}}


def _run_fig2(cfg: ScenarioConfig) -> dict:
    """Survival map over (duration, distance) plus escape-boundary coefficients."""
    model = cfg.model()
    g = cfg.sweep_grid or dict(_DEFAULT_SWEEP)
    t_f_values = np.linspace(g["t_f_min"], g["t_f_max"], g["t_f_count"])
    l_values = np.linspace(g["l_min"], g["l_max"], g["l_count"])

    grid = sweep(model, t_f_values, l_values, cfg.ensemble, workers=cfg.workers)
    rows = [
        (t_f * 1e6, l * 1e6, grid.p_success[i, j], grid.ci_low[i, j], grid.ci_high[i, j])
        for i, t_f in enumerate(t_f_values)
        for j, l in enumerate(l_values)
    ]

    cuts = sweep(model, t_f_values, np.asarray(SWEEP_CUTS), cfg.ensemble, workers=cfg.workers)
    cut_rows = [
        (l * 1e6, t_f * 1e6, cuts.p_success[i, j])
        for j, l in enumerate(SWEEP_CUTS)
        for i, t_f in enumerate(t_f_values)
    ]

    coeffs = {}
    for kind in ("I", "II", "III"):
        fit = boundary_coefficient(kind, model, cfg=cfg.ensemble if kind == "III" else None)
        coeffs[kind] = {
            "coefficient": fit.coefficient,
            "t_f_us": [t * 1e6 for t in fit.t_f_values],
            "l_star_um": [l * 1e6 for l in fit.l_star],
            "max_residual": fit.max_residual,
        }

    return {
        "csv": {
            "sweep.csv": (["t_f_us", "l_um", "p_success", "ci_low", "ci_high"], rows),
            "cuts.csv": (["l_um", "t_f_us", "p_success"], cut_rows),
        },
        "json": {"boundary.json": {"coefficients": coeffs}},
    }


def _fig3_specs() -> tuple[SegmentSpec, ...]:
    l, t_f = 12.6 * um, 31.5 * us
    return (
        SegmentSpec(PathKind.STA, t_f=t_f, distance=l, v_i=0.0, v_f=0.3),
        SegmentSpec(PathKind.STA, t_f=t_f, distance=l, v_i=0.3, v_f=0.1),
        SegmentSpec(PathKind.STA, t_f=t_f, distance=l, v_i=0.1, v_f=0.0),
    )


def _run_fig3(cfg: ScenarioConfig) -> dict:
    """Chained straight segments with speed changes en route."""
    specs = cfg.path_specs if cfg.path_specs is not None else _fig3_specs()
    validation = validate_specs(specs, cfg.trap)
    if not validation["valid"]:
        err = validation["errors"][0]
        raise JunctionMismatch(err["index"], err["kind"], err["detail"])
    model = cfg.model()
    path = build_path(specs, settle_hold=cfg.settle_hold)
    r = run_ensemble(path, model, cfg.ensemble)

    return {
        "csv": {
            "survival.csv": (
                _SURVIVAL_HEADER,
                list(_survival_rows(r.final_energies, r.n_samples, cfg.trap)),
            )
        },
        "json": {
            "validation.json": validation,
            "ensemble.json": _ensemble_payload(r, cfg.trap),
        },
    }


def _run_arc_pair(cfg: ScenarioConfig, sta_segments, baseline_segments) -> dict:
    """Shared shape for the curved scenarios: one drive arm, one baseline arm."""
    model = cfg.model()
    sta_path = _with_settle_hold(sta_segments, cfg.settle_hold, strict=True)
    base = _with_settle_hold(baseline_segments, cfg.settle_hold, strict=False)

    r_sta = run_ensemble(sta_path, model, cfg.ensemble, seed_context=(0,))
    r_base = run_ensemble(base, model, cfg.ensemble, seed_context=(1,))

    results = {
        "sta": _ensemble_payload(r_sta, cfg.trap),
        "const_angular": _ensemble_payload(r_base, cfg.trap),
        "aod": {
            "sta": _aod_block(sta_path, cfg.trap.curvature_frequency),
            "const_angular": _aod_block(base, cfg.trap.curvature_frequency),
        },
    }
    return {
        "csv": {
            "survival_sta.csv": (
                _SURVIVAL_HEADER,
                list(_survival_rows(r_sta.final_energies, r_sta.n_samples, cfg.trap)),
            ),
            "survival_const_angular.csv": (
                _SURVIVAL_HEADER,
                list(_survival_rows(r_base.final_energies, r_base.n_samples, cfg.trap)),
            ),
        },
        "json": {"results.json": results},
    }


def _run_fig4a(cfg: ScenarioConfig) -> dict:
    """Quarter-turn arc vs a constant-angular-velocity baseline."""
    R, t_f = 25.2 * um, 93.7 * us
    theta = math.pi / 2.0
    arc = sta_arc(BoundaryConditions(t_f=t_f, radius=R, theta_f=theta))
    base = const_angular_path(R, theta, t_f)
    return _run_arc_pair(cfg, [arc], [base])


def _run_fig4b(cfg: ScenarioConfig) -> dict:
    """S-shaped pair of opposite semicircles with a matched midpoint speed."""
    R, t_f, v_inter = 12.6 * um, 128.8 * us, 0.3
    specs = (
        SegmentSpec(PathKind.STA, t_f=t_f, radius=R, theta_f=math.pi, v_i=0.0, v_f=v_inter),
        SegmentSpec(PathKind.STA, t_f=t_f, radius=R, theta_f=-math.pi, v_i=v_inter, v_f=0.0),
    )
    sta_segments = chain(specs).segments
    base_specs = (
        SegmentSpec(PathKind.CONST_ANGULAR, t_f=t_f, radius=R, theta_f=math.pi),
        SegmentSpec(PathKind.CONST_ANGULAR, t_f=t_f, radius=R, theta_f=-math.pi),
    )
    base_segments = chain(base_specs).segments
    return _run_arc_pair(cfg, sta_segments, base_segments)


def _run_fig5(cfg: ScenarioConfig) -> dict:
    """Back-and-forth shuttle: survival decays geometrically per leg."""
    l, t_f, n_legs = 51.7 * um, 129.0 * us, 25
    model = cfg.model()
    res = shuttle(l, t_f, n_legs, model, cfg.ensemble)
    rows = list(zip(res.n_legs, res.p_survival, res.ci_low, res.ci_high))
    fit = {
        "per_leg_rate": res.per_leg_rate,
        "n_legs": int(res.n_legs[-1]),
        "p_first_leg": res.p_survival[0],
        "p_final": res.p_survival[-1],
        "l_um": l * 1e6,
        "t_f_us": t_f * 1e6,
    }
    return {
        "csv": {"shuttle.csv": (["n_legs", "p_survival", "ci_low", "ci_high"], rows)},
        "json": {"fit.json": fit},
    }


def _run_scaling_table(cfg: ScenarioConfig) -> dict:
    """Capacity table: per-kind reach and residual excitation at the depth limit."""
    reports = heating_scaling_table(cfg.scaling_t_f, cfg.trap)
    rows = [
        (r.kind, r.t_f * 1e6, r.l * 1e6, r.delta_n_final, r.delta_n_max)
        for r in reports
    ]
    payload = {
        "rows": [
            {
                "kind": r.kind,
                "t_f_us": r.t_f * 1e6,
                "l_max_um": r.l * 1e6,
                "delta_n_final": r.delta_n_final,
                "delta_n_max": r.delta_n_max,
            }
            for r in reports
        ]
    }
    return {
        "csv": {"table.csv": (["kind", "t_f_us", "l_max_um", "delta_n_final", "delta_n_max"], rows)},
        "json": {"table.json": payload},
    }


_RUNNERS = {
    "fig1": _run_fig1,
    "fig2": _run_fig2,
    "fig3": _run_fig3,
    "fig4a": _run_fig4a,
    "fig4b": _run_fig4b,
    "fig5": _run_fig5,
    "scaling-table": _run_scaling_table,
}


def run_scenario(cfg: ScenarioConfig) -> RunManifest:
    """Run one named scenario, write its outputs, and return the manifest."""
    started = time.monotonic()
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    bundle = _RUNNERS[cfg.name](cfg)

    checksums = {}
    for name, (header, rows) in bundle.get("csv", {}).items():
        target = cfg.out_dir / name
        _write_csv(target, header, rows)
        checksums[name] = _sha256(target)
    for name, payload in bundle.get("json", {}).items():
        target = cfg.out_dir / name
        _write_json(target, payload)
        checksums[name] = _sha256(target)

    manifest = RunManifest(
        version=_version,
        scenario=cfg.name,
        config=cfg.resolved(),
        seed=cfg.ensemble.seed,
        outputs=checksums,
        duration_s=time.monotonic() - started,
    )
    _write_json(
        cfg.out_dir / "manifest.json",
        {
            "version": manifest.version,
            "scenario": manifest.scenario,
            "config": manifest.config,
            "seed": manifest.seed,
            "outputs": manifest.outputs,
            "duration_s": manifest.duration_s,
        },
    )
    return manifest
