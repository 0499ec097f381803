"""Thermal ensembles, survival sweeps, boundary coefficients, shuttling.

Per-sample randomness comes from counter-based streams: every draw uses a
generator seeded by SeedSequence((seed, *context, sample_index)), so results
are independent of evaluation order and of how work is split across
processes.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import thermometry
from .constants import RB87, PhysicalConstants, mK
from .dynamics import AtomState, IntegratorConfig, integrate_ensemble
from .thermometry import FitFailure
from .trajectory import BoundaryConditions, CompositePath, PathSegment, sta_linear
from .trap import TrapModel

# 95% two-sided normal quantile for Wilson intervals.
_Z95 = 1.959963984540054


def rng_stream(seed: int, *context: int) -> np.random.Generator:
    """Deterministic generator for (seed, context...) independent of call order."""
    return np.random.default_rng(np.random.SeedSequence((int(seed),) + tuple(int(c) for c in context)))


def wilson_interval(successes: int, n: int, z: float = _Z95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if n <= 0:
        raise ValueError("n must be positive")
    phat = successes / n
    denom = 1.0 + z * z / n
    center = (phat + z * z / (2 * n)) / denom
    half = z * math.sqrt(phat * (1.0 - phat) / n + z * z / (4 * n * n)) / denom
    # roundoff can leave the endpoints a few ulp inside phat at k = 0 or k = n
    return min(max(0.0, center - half), phat), max(min(1.0, center + half), phat)


@dataclass(frozen=True)
class EnsembleConfig:
    """Monte Carlo settings for one transport ensemble.

    depth_fluctuation is the peak-to-trough trap-depth wobble dU: each run
    draws a uniform reduction in [0, dU]. include_axial_energy adds the
    untracked out-of-plane thermal energy (an exponential draw at the initial
    temperature) to each surviving sample's final energy so energy
    distributions compare directly against 3D release-recapture fits.
    """

    temperature: float  # K
    n_samples: int = 200
    depth_fluctuation: float = RB87.k_B * 0.15 * mK  # J
    seed: int = 0
    include_axial_energy: bool = True

    def __post_init__(self) -> None:
        if self.n_samples < 1:
            raise ValueError("n_samples must be >= 1")
        if self.temperature < 0.0:
            raise ValueError("temperature must be >= 0")
        if self.depth_fluctuation < 0.0:
            raise ValueError("depth_fluctuation must be >= 0")


@dataclass(frozen=True)
class EnsembleResult:
    """Aggregated outcome of one transport ensemble."""

    p_success: float
    ci_low: float
    ci_high: float
    n_samples: int
    n_escaped: int
    n_failed: int
    final_energies: np.ndarray  # (n_success,) [J], axial share included if configured
    fitted_temperature: object | None  # thermometry.TemperatureFit when fitted


def sample_initial_state(
    temperature: float,
    omega0: float,
    seed: int,
    index: int,
    constants: PhysicalConstants = RB87,
) -> AtomState:
    """Thermal draw of a planar atom state around a resting trap center.

    Position and velocity components are independent normals with
    sigma_x = sqrt(kT/m)/omega0 and sigma_v = sqrt(kT/m); temperature 0 gives
    the exact center.
    """
    pos, vel, _, _ = _draw_sample(temperature, omega0, constants, rng_stream(seed, index), 0.0)
    return AtomState(position=pos, velocity=vel)


def _draw_sample(temperature, omega0, constants, rng, depth_fluctuation):
    """One sample's draws, in fixed order: position, velocity, depth, axial energy."""
    sigma_v = math.sqrt(constants.k_B * temperature / constants.atom_mass)
    sigma_x = sigma_v / omega0
    pos = rng.normal(0.0, sigma_x, 2)
    vel = rng.normal(0.0, sigma_v, 2)
    du = rng.uniform(0.0, depth_fluctuation)
    axial = rng.exponential(constants.k_B * temperature) if temperature > 0 else 0.0
    return pos, vel, du, axial


def run_ensemble(
    path: CompositePath | PathSegment,
    model: TrapModel,
    cfg: EnsembleConfig,
    integrator: IntegratorConfig = IntegratorConfig(),
    design_omega0: float | None = None,
    seed_context: tuple[int, ...] = (),
    fit_temperature: bool = True,
) -> EnsembleResult:
    """Propagate a thermal ensemble along a path and aggregate survival.

    Samples thermalize in the parked trap at the path's start: each begins at
    the departure point plus a thermal offset, with a purely thermal velocity.
    A first segment that departs with nonzero designed velocity therefore
    acts as a deliberate velocity kick on the atoms, which is what a sudden
    sweep does to a resting atom. Each run's trap depth is reduced by its own
    uniform draw from [0, depth_fluctuation] while the tweezer moves.
    """
    p = model.params
    if not (cfg.depth_fluctuation < p.depth):
        raise ValueError("depth_fluctuation must be smaller than the trap depth")
    if isinstance(path, PathSegment):
        path = CompositePath((path,))
    omega = p.curvature_frequency
    n = cfg.n_samples
    positions = np.empty((n, 2))
    velocities = np.empty((n, 2))
    scales = np.empty(n)
    axial = np.empty(n)
    start = path.start_position
    for i in range(n):
        rng = rng_stream(cfg.seed, *seed_context, i)
        dp, dv, du, ax = _draw_sample(
            cfg.temperature, omega, p.constants, rng, cfg.depth_fluctuation
        )
        positions[i] = start + dp
        velocities[i] = dv
        scales[i] = 1.0 - du / p.depth
        axial[i] = ax

    res = integrate_ensemble(
        model, path, positions, velocities, scales, cfg=integrator, design_omega0=design_omega0
    )
    success = res["success"]
    k = int(np.count_nonzero(success))
    lo, hi = wilson_interval(k, n)
    energies = res["final_energy"][success]
    if cfg.include_axial_energy:
        energies = energies + axial[success]

    fit = None
    if fit_temperature and k >= 20 and cfg.temperature > 0:
        grid = thermometry.default_cutoff_grid(p.depth)
        curve = thermometry.survival_curve(energies, grid, n_total=n)
        try:
            fit = thermometry.fit_temperature(curve, constants=p.constants)
        except FitFailure:
            fit = None
    return EnsembleResult(
        p_success=k / n,
        ci_low=lo,
        ci_high=hi,
        n_samples=n,
        n_escaped=int(np.count_nonzero(~success & ~res["failed"])),
        n_failed=int(np.count_nonzero(res["failed"])),
        final_energies=np.sort(energies),
        fitted_temperature=fit,
    )


@dataclass(frozen=True)
class SweepGrid:
    """Survival probability over a (t_f, l) grid."""

    t_f_values: np.ndarray
    l_values: np.ndarray
    p_success: np.ndarray  # (n_tf, n_l)
    ci_low: np.ndarray
    ci_high: np.ndarray


def _sweep_cell(args) -> tuple[int, int, float, float, float]:
    (model, t_f, l, cfg, i, j) = args
    bc = BoundaryConditions(t_f=t_f, distance=l)
    seg = sta_linear(bc)
    result = run_ensemble(
        seg, model, cfg, seed_context=(i, j), fit_temperature=False
    )
    return i, j, result.p_success, result.ci_low, result.ci_high


def sweep(
    model: TrapModel,
    t_f_values,
    l_values,
    cfg: EnsembleConfig,
    workers: int = 1,
) -> SweepGrid:
    """Straight-line STA survival map over duration and distance axes.

    Cell (i, j) derives its sample streams from (seed, i, j), so the map is
    bit-identical for any worker count.
    """
    t_f_values = np.asarray(t_f_values, dtype=float)
    l_values = np.asarray(l_values, dtype=float)
    shape = (len(t_f_values), len(l_values))
    p = np.empty(shape)
    lo = np.empty(shape)
    hi = np.empty(shape)
    jobs = [
        (model, float(t_f_values[i]), float(l_values[j]), cfg, i, j)
        for i in range(shape[0])
        for j in range(shape[1])
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_cell, jobs, chunksize=4))
    else:
        results = [_sweep_cell(job) for job in jobs]
    for i, j, pij, loij, hiij in results:
        p[i, j] = pij
        lo[i, j] = loij
        hi[i, j] = hiij
    return SweepGrid(t_f_values, l_values, p, lo, hi)


def model1_boundary_distance(t_f: float, model: TrapModel) -> float:
    """Largest STA distance with designed displacement inside the harmonic width.

    Analytic form: (sqrt(3)/5) * (U0 / (m d)) * t_f^2 for a trap whose
    frequency is consistent with (U0, d).
    """
    p = model.params
    return math.sqrt(3.0) / 5.0 * p.depth / (p.constants.atom_mass * p.width) * t_f**2


def _design_xi_max(l: float, t_f: float, omega0: float, n: int = 4097) -> float:
    """Peak designed tweezer-atom displacement of the resting-endpoint quintic."""
    u = np.linspace(0.0, 1.0, n)
    accel = 60.0 * l / t_f**2 * (u - 3.0 * u**2 + 2.0 * u**3)
    return float(np.max(np.abs(accel))) / omega0**2


@dataclass(frozen=True)
class BoundaryFit:
    """t_f^2-law fit of escape-boundary distances l*(t_f)."""

    model_kind: str  # "I", "II", or "III"
    coefficient: float
    t_f_values: np.ndarray
    l_star: np.ndarray
    reference_l: np.ndarray  # the analytic Model I distances
    max_residual: float  # worst relative deviation from the fitted law


_DEFAULT_BOUNDARY_TF = (100e-6, 150e-6, 220e-6, 300e-6)


def boundary_coefficient(
    model_kind: str,
    model: TrapModel,
    cfg: EnsembleConfig | None = None,
    t_f_values=_DEFAULT_BOUNDARY_TF,
    threshold: float = 0.5,
    bisection_iters: int = 11,
    residual_tol: float = 0.10,
) -> BoundaryFit:
    """Extract the escape-boundary coefficient c in l* = c * l_I(t_f).

    Model "I": bisection on the analytic designed-displacement criterion
    (exactly the harmonic escape condition), so c = 1 to bisection tolerance.
    Model "II": zero-temperature, zero-fluctuation single runs in the given
    (Gaussian) trap model. Model "III": thermal ensembles with depth
    fluctuation; l* is where survival crosses `threshold`. All three share
    the same bisection and fitting pipeline.
    """
    if model_kind not in ("I", "II", "III"):
        raise ValueError("model_kind must be 'I', 'II', or 'III'")
    if model_kind == "III" and cfg is None:
        raise ValueError("Model III needs an EnsembleConfig")
    p = model.params
    omega = p.curvature_frequency
    t_f_values = np.asarray(t_f_values, dtype=float)
    if len(t_f_values) < 2:
        raise ValueError("need at least two t_f values to fit the t_f^2 law")

    def success_at(l: float, t_f: float, i_tf: int) -> bool:
        if model_kind == "I":
            return _design_xi_max(l, t_f, omega) <= p.width
        bc = BoundaryConditions(t_f=t_f, distance=l)
        seg = sta_linear(bc)
        if model_kind == "II":
            zero = EnsembleConfig(temperature=0.0, n_samples=1, depth_fluctuation=0.0, seed=0)
            res = run_ensemble(seg, model, zero, fit_temperature=False)
            return res.p_success == 1.0
        # Model III: common random numbers across bisection iterates.
        res = run_ensemble(
            seg, model, cfg, seed_context=(i_tf,), fit_temperature=False
        )
        return res.p_success >= threshold

    l_ref = np.array([model1_boundary_distance(t, model) for t in t_f_values])
    l_star = np.empty_like(l_ref)
    for i, t_f in enumerate(t_f_values):
        lo, hi = 0.05 * l_ref[i], 1.5 * l_ref[i]
        if not success_at(lo, t_f, i):
            raise FitFailure(f"no survival even at l = {lo:.3e} m, t_f = {t_f:.3e} s")
        if success_at(hi, t_f, i):
            raise FitFailure(f"no escape even at l = {hi:.3e} m, t_f = {t_f:.3e} s")
        for _ in range(bisection_iters):
            mid = 0.5 * (lo + hi)
            if success_at(mid, t_f, i):
                lo = mid
            else:
                hi = mid
        l_star[i] = 0.5 * (lo + hi)

    # Least squares through the origin in the variable u = l_I(t_f).
    c = float(np.dot(l_ref, l_star) / np.dot(l_ref, l_ref))
    residuals = np.abs(l_star - c * l_ref) / (c * l_ref)
    if np.max(residuals) > residual_tol:
        raise FitFailure(
            f"boundary distances deviate from the t_f^2 law by {np.max(residuals):.1%}"
        )
    return BoundaryFit(
        model_kind=model_kind,
        coefficient=c,
        t_f_values=t_f_values,
        l_star=l_star,
        reference_l=l_ref,
        max_residual=float(np.max(residuals)),
    )


@dataclass(frozen=True)
class ShuttleResult:
    """Survival versus number of back-and-forth transport legs."""

    n_legs: np.ndarray  # 1..n
    p_survival: np.ndarray
    ci_low: np.ndarray
    ci_high: np.ndarray
    per_leg_rate: float  # r from a log-linear fit of P(n) = r^n


def shuttle(
    l: float,
    t_f: float,
    n_legs: int,
    model: TrapModel,
    cfg: EnsembleConfig,
    integrator: IntegratorConfig = IntegratorConfig(),
    independent_legs: bool = False,
) -> ShuttleResult:
    """Repeated reversing transport of one ensemble over the same span.

    The atom's relative state carries over between legs (mirrored across the
    transport axis, reusing one leg path; the trap is radially symmetric so
    this is exact). Trap-depth fluctuations are redrawn every leg. With
    independent_legs=True each leg instead starts from a fresh thermal draw,
    making legs statistically independent.
    """
    if n_legs < 1:
        raise ValueError("n_legs must be >= 1")
    p = model.params
    omega = p.curvature_frequency
    seg = sta_linear(BoundaryConditions(t_f=t_f, distance=l))
    path = CompositePath((seg,))
    n = cfg.n_samples

    positions = np.empty((n, 2))
    velocities = np.empty((n, 2))
    axial = np.empty(n)
    for i in range(n):
        rng = rng_stream(cfg.seed, 0, i)
        dp, dv, _, ax = _draw_sample(cfg.temperature, omega, p.constants, rng, 0.0)
        positions[i] = path.start_position + dp
        velocities[i] = dv
        axial[i] = ax

    alive = np.ones(n, dtype=bool)
    survivors = np.empty(n_legs, dtype=int)
    mirror = np.array([-1.0, 1.0])
    end = None
    for leg in range(n_legs):
        scales = np.empty(n)
        for i in range(n):
            rng = rng_stream(cfg.seed, 1 + leg, i)
            scales[i] = 1.0 - rng.uniform(0.0, cfg.depth_fluctuation) / p.depth
        if independent_legs and leg > 0:
            for i in range(n):
                rng = rng_stream(cfg.seed, 0, i, leg)
                dp, dv, _, _ = _draw_sample(cfg.temperature, omega, p.constants, rng, 0.0)
                positions[i] = path.start_position + dp
                velocities[i] = dv
        res = integrate_ensemble(
            model, path, positions, velocities, scales, cfg=integrator
        )
        alive &= res["success"] & ~res["failed"]
        survivors[leg] = int(np.count_nonzero(alive))
        if not independent_legs:
            if end is None:
                end = path.tweezer_position(path.total_duration, omega)
            # Next leg runs the same path; flip the relative state along the axis.
            rel = res["final_position"] - end
            positions = path.start_position + rel * mirror
            velocities = res["final_velocity"] * mirror
            # Lost atoms keep placeholder states; they are masked out of `alive`.

    p_surv = survivors / n
    ci = np.array([wilson_interval(k, n) for k in survivors])
    ns = np.arange(1, n_legs + 1)
    ok = survivors > 0
    if np.count_nonzero(ok) >= 1:
        slope = float(np.dot(ns[ok], np.log(p_surv[ok])) / np.dot(ns[ok], ns[ok]))
        rate = math.exp(slope)
    else:
        rate = 0.0
    return ShuttleResult(
        n_legs=ns,
        p_survival=p_surv,
        ci_low=ci[:, 0],
        ci_high=ci[:, 1],
        per_leg_rate=rate,
    )
