"""Classical transport dynamics: fixed-step RK4 with an escape criterion.

The equation of motion is m x'' = F(x - x_o(t)) with F the trap force field
and x_o the tweezer path. Escape is declared, irreversibly, at the first
accepted step whose displacement |x - x_o| exceeds the trap's escape radius;
escaped samples are frozen for the remainder of the run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .trajectory import CompositePath, PathSegment, SampledPath
from .trap import TrapModel

# Hard ceiling on the step: at least 4096 steps per path and at least 256
# steps per trap period.
STEPS_PER_PATH = 4096
STEPS_PER_PERIOD = 256


class StepTooLarge(ValueError):
    """Requested integrator step exceeds the stability ceiling."""


@dataclass(frozen=True)
class AtomState:
    """Planar atom state in absolute coordinates."""

    position: np.ndarray  # (2,) [m]
    velocity: np.ndarray  # (2,) [m/s]

    def __post_init__(self) -> None:
        for name in ("position", "velocity"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.shape != (2,) or not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} must be a finite 2-vector")
            object.__setattr__(self, name, arr)


@dataclass(frozen=True)
class IntegratorConfig:
    """Fixed-step RK4 settings.

    dt=None picks the largest stable step; an explicit dt must not exceed it.
    trajectory_decimation > 0 records every that-many-th step (plus the
    endpoints) for single-atom runs.
    """

    dt: float | None = None
    trajectory_decimation: int = 0

    def __post_init__(self) -> None:
        if self.dt is not None and not (self.dt > 0.0):
            raise ValueError("dt must be positive")
        if self.trajectory_decimation < 0:
            raise ValueError("trajectory_decimation must be >= 0")


def max_step(duration: float, omega0: float) -> float:
    """Largest admissible RK4 step for a path of the given duration [s]."""
    return min(duration / STEPS_PER_PATH, 2.0 * math.pi / (STEPS_PER_PERIOD * omega0))


@dataclass(frozen=True)
class Trajectory:
    """Decimated record of a single-atom run."""

    times: np.ndarray
    atom_position: np.ndarray  # (n, 2)
    atom_velocity: np.ndarray  # (n, 2)
    tweezer_position: np.ndarray  # (n, 2)


@dataclass(frozen=True)
class TransportOutcome:
    """Result of one transport run."""

    success: bool
    escape_time: float | None
    xi_max: float
    final_energy: float | None
    trajectory: Trajectory | None = None


class _InterpolatedPath:
    """Adapter letting the integrator consume a SampledPath."""

    def __init__(self, sampled: SampledPath):
        self._s = sampled
        self.total_duration = float(sampled.times[-1] - sampled.times[0])
        self._t0 = float(sampled.times[0])
        self.final_frame_velocity = sampled.tweezer_velocity[-1]
        self.start_position = sampled.tweezer_position[0]
        self.initial_velocity = sampled.tweezer_velocity[0]

    def tweezer_position(self, t, omega0: float):
        t = np.asarray(t, dtype=float)
        x = np.interp(t, self._s.times, self._s.tweezer_position[:, 0])
        y = np.interp(t, self._s.times, self._s.tweezer_position[:, 1])
        return np.stack([x, y], axis=-1)


def _as_path(path) -> CompositePath | _InterpolatedPath:
    if isinstance(path, PathSegment):
        return CompositePath((path,))
    if isinstance(path, SampledPath):
        return _InterpolatedPath(path)
    return path


def _resolve_step(duration: float, omega0: float, cfg: IntegratorConfig) -> tuple[int, float]:
    cap = max_step(duration, omega0)
    dt_req = cfg.dt if cfg.dt is not None else cap
    if dt_req > cap * (1.0 + 1e-12):
        raise StepTooLarge(f"dt = {dt_req:.3e} s exceeds the stability ceiling {cap:.3e} s")
    n = max(1, math.ceil(duration / dt_req - 1e-9))
    return n, duration / n


def integrate_ensemble(
    model: TrapModel,
    path,
    positions: np.ndarray,
    velocities: np.ndarray,
    depth_scales,
    cfg: IntegratorConfig = IntegratorConfig(),
    design_omega0: float | None = None,
    record: bool = False,
):
    """Propagate a batch of atoms along one path. Vectorized over the batch.

    Args:
        positions, velocities: (N, 2) initial absolute states.
        depth_scales: scalar or (N,) per-run trap depth factors in (0, 1].
            Depth reduction models drive-efficiency loss while the tweezer is
            being swept, so it applies only during moving segments; parked
            hold segments run at the nominal depth.
        design_omega0: frequency used to evaluate the tweezer path for STA
            segments; defaults to the trap's curvature frequency.
        record: keep a per-step decimated trajectory (intended for N = 1).

    Returns:
        dict with arrays: success (N,), escape_time (N,), xi_max (N,),
        final_energy (N,; NaN where escaped), final_position, final_velocity,
        and optionally `trajectory`. Final bound energy is measured in the
        nominal full-depth well, offset so a trapped atom lies in [0, U0).
    """
    path = _as_path(path)
    p = model.params
    omega = p.curvature_frequency
    if design_omega0 is None:
        design_omega0 = omega
    T = path.total_duration
    n_steps, h = _resolve_step(T, max(omega, p.omega0), cfg)

    X = np.array(positions, dtype=float, copy=True)
    V = np.array(velocities, dtype=float, copy=True)
    if X.ndim == 1:
        X = X[None, :]
        V = V[None, :]
    N = X.shape[0]
    scales = np.broadcast_to(np.asarray(depth_scales, dtype=float), (N,)).copy()

    # Tweezer positions on the half-step grid, shared by the whole batch.
    ts = np.linspace(0.0, T, 2 * n_steps + 1)
    xo = path.tweezer_position(ts, design_omega0)
    xo = np.asarray(xo, dtype=float).reshape(2 * n_steps + 1, 2)

    # Depth reduction acts only while the tweezer sweeps.
    mask = getattr(path, "static_mask", None)
    parked = np.asarray(mask(ts), dtype=bool) if mask is not None else np.zeros(len(ts), dtype=bool)
    nominal = np.ones_like(scales)
    stage_scale = [nominal if parked[j] else scales for j in range(2 * n_steps + 1)]

    r_esc = model.escape_radius()
    alive = np.ones(N, dtype=bool)
    escape_time = np.full(N, np.nan)
    xi = X - xo[0]
    xi_norm = np.linalg.norm(xi, axis=1)
    xi_max = xi_norm.copy()
    just_escaped = xi_norm > r_esc
    escape_time[just_escaped] = 0.0
    alive &= ~just_escaped

    decim = cfg.trajectory_decimation if record else 0
    rec_t, rec_x, rec_v, rec_o = [], [], [], []
    if decim:
        rec_t.append(0.0), rec_x.append(X.copy()), rec_v.append(V.copy()), rec_o.append(xo[0])

    acc = model.acceleration
    h2 = 0.5 * h
    for k in range(n_steps):
        o0, o1, o2 = xo[2 * k], xo[2 * k + 1], xo[2 * k + 2]
        s0, s1, s2 = stage_scale[2 * k], stage_scale[2 * k + 1], stage_scale[2 * k + 2]
        a1 = acc(X - o0, s0)
        a2 = acc(X + h2 * V - o1, s1)
        a3 = acc(X + h2 * V + (h * h2 / 2.0) * a1 - o1, s1)
        a4 = acc(X + h * V + (h * h2) * a2 - o2, s2)
        X_new = X + h * V + (h * h / 6.0) * (a1 + a2 + a3)
        V_new = V + (h / 6.0) * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
        m = alive[:, None]
        X = np.where(m, X_new, X)
        V = np.where(m, V_new, V)
        xi = X - o2
        xi_norm = np.linalg.norm(xi, axis=1)
        np.maximum(xi_max, np.where(alive, xi_norm, xi_max), out=xi_max)
        just_escaped = alive & (xi_norm > r_esc)
        escape_time[just_escaped] = (k + 1) * h
        alive &= ~just_escaped
        if decim and ((k + 1) % decim == 0 or k + 1 == n_steps):
            rec_t.append((k + 1) * h), rec_x.append(X.copy())
            rec_v.append(V.copy()), rec_o.append(o2)

    # Integration blow-ups (non-finite states) are failures, not escapes.
    finite = np.isfinite(X).all(axis=1) & np.isfinite(V).all(axis=1)
    failed = ~finite
    alive &= finite

    # Bound energy in the nominal-depth well, relative to its bottom.
    v_frame = np.asarray(path.final_frame_velocity, dtype=float)
    v_rel = V - v_frame
    xi_final = np.linalg.norm(X - xo[-1], axis=1)
    pot = np.asarray(model.potential(xi_final))
    energy = 0.5 * p.constants.atom_mass * np.sum(v_rel**2, axis=1) + pot + p.depth
    final_energy = np.where(alive, energy, np.nan)

    out = {
        "success": alive,
        "escape_time": escape_time,
        "xi_max": xi_max,
        "final_energy": final_energy,
        "final_position": X,
        "final_velocity": V,
        "failed": failed,
        "dt": h,
    }
    if decim:
        out["trajectory"] = Trajectory(
            times=np.array(rec_t),
            atom_position=np.stack([r[0] for r in rec_x]) if N == 1 else np.stack(rec_x),
            atom_velocity=np.stack([r[0] for r in rec_v]) if N == 1 else np.stack(rec_v),
            tweezer_position=np.stack(rec_o),
        )
    return out


def integrate(
    model: TrapModel,
    path,
    initial: AtomState | None = None,
    cfg: IntegratorConfig = IntegratorConfig(),
    design_omega0: float | None = None,
    depth_scale: float = 1.0,
) -> TransportOutcome:
    """Propagate one atom along a path and classify the outcome.

    Without an explicit initial state the atom starts on the designed path:
    at its start point with its designed initial velocity.
    """
    if initial is None:
        p = _as_path(path)
        initial = AtomState(position=p.start_position, velocity=p.initial_velocity)
    record = cfg.trajectory_decimation > 0
    res = integrate_ensemble(
        model,
        path,
        initial.position[None, :],
        initial.velocity[None, :],
        depth_scale,
        cfg=cfg,
        design_omega0=design_omega0,
        record=record,
    )
    success = bool(res["success"][0])
    esc = res["escape_time"][0]
    return TransportOutcome(
        success=success,
        escape_time=None if math.isnan(esc) else float(esc),
        xi_max=float(res["xi_max"][0]),
        final_energy=float(res["final_energy"][0]) if success else None,
        trajectory=res.get("trajectory"),
    )


def displacement_series(outcome: TransportOutcome) -> tuple[np.ndarray, np.ndarray]:
    """Times and |x - x_o| from a recorded trajectory."""
    if outcome.trajectory is None:
        raise ValueError("run the integrator with trajectory_decimation > 0 first")
    tr = outcome.trajectory
    return tr.times, np.linalg.norm(tr.atom_position - tr.tweezer_position, axis=1)
