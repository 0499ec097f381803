"""Transport path synthesis: STA quintics, arcs, composite paths, sampling.

The designed atom path for a shortcut segment is the unique quintic in scaled
time t~ = t/t_f with x(0)=0, x(t_f)=l, matched endpoint velocities v_i, v_f,
and vanishing endpoint accelerations:

    x(t) = v_i t + (10 l - 6 v_i t_f - 4 v_f t_f) t~^3
                 - (15 l - 8 v_i t_f - 7 v_f t_f) t~^4
                 + (6 l - 3 v_i t_f - 3 v_f t_f) t~^5

The tweezer that drags a harmonically trapped atom along x(t) must run ahead
of it by its acceleration over omega0^2:

    x_o(t) = x(t) + x''(t) / omega0^2

Arc segments use the same quintic for the angle theta(t) with the endpoint
speeds divided by the radius, and the tweezer correction is applied to the
Cartesian acceleration of the embedded circular motion.

Non-shortcut profiles (constant velocity, constant jerk, constant angular
velocity) reuse the same polynomial container; for those the tweezer path is
the stated profile itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

# Junction tolerances for composite paths.
POSITION_ATOL = 1e-12  # m
SPEED_RTOL = 1e-9
TANGENT_ATOL = 1e-9  # rad
# Below this speed a tangent direction is not meaningful.
SPEED_FLOOR = 1e-12  # m/s


class PathKind(Enum):
    STA = "sta"
    CONST_VELOCITY = "cv"
    CONST_JERK = "cj"
    CONST_ANGULAR = "const_angular"


class JunctionMismatch(ValueError):
    """Adjacent composite-path segments disagree at their junction."""

    def __init__(self, index: int, kind: str, detail: str):
        self.index = index
        self.kind = kind
        self.detail = detail
        super().__init__(f"junction {index}/{index + 1} {kind} mismatch: {detail}")


@dataclass(frozen=True)
class BoundaryConditions:
    """Endpoint constraints for one transport segment.

    Straight segments use `distance`; arcs use `radius` and `theta_f` (the
    swept angle, positive). `v_i` and `v_f` are endpoint speeds in m/s for
    both geometries.
    """

    t_f: float
    distance: float | None = None
    radius: float | None = None
    theta_f: float | None = None
    v_i: float = 0.0
    v_f: float = 0.0

    def __post_init__(self) -> None:
        if not (self.t_f > 0.0) or not math.isfinite(self.t_f):
            raise ValueError(f"t_f must be positive and finite, got {self.t_f!r}")
        for name in ("v_i", "v_f"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.distance is not None:
            if self.radius is not None or self.theta_f is not None:
                raise ValueError("give either distance or (radius, theta_f), not both")
            if not math.isfinite(self.distance) or self.distance < 0.0:
                raise ValueError(f"distance must be finite and >= 0, got {self.distance!r}")
        else:
            if self.radius is None or self.theta_f is None:
                raise ValueError("arc needs both radius and theta_f")
            if not (self.radius > 0.0):
                raise ValueError(f"radius must be positive, got {self.radius!r}")
            if not math.isfinite(self.theta_f) or self.theta_f < 0.0:
                raise ValueError(f"theta_f must be finite and >= 0, got {self.theta_f!r}")

    @property
    def arc_length(self) -> float:
        """Path length of the segment [m]."""
        if self.distance is not None:
            return self.distance
        return self.radius * self.theta_f


def quintic_coefficients(
    l: float, t_f: float, v_i: float = 0.0, v_f: float = 0.0
) -> tuple[float, float, float, float, float, float]:
    """Scaled-time coefficients (c0..c5) of the shortcut quintic.

    The profile is s(t) = sum_k c_k * (t/t_f)**k with s(0)=0, s(t_f)=l,
    s'(0)=v_i, s'(t_f)=v_f, s''(0)=s''(t_f)=0.
    """
    a, b = v_i * t_f, v_f * t_f
    return (
        0.0,
        a,
        0.0,
        10.0 * l - 6.0 * a - 4.0 * b,
        -(15.0 * l - 8.0 * a - 7.0 * b),
        6.0 * l - 3.0 * a - 3.0 * b,
    )


# Falling-factorial prefactors k!/(k-n)! for d^n/dt~^n of t~^k, n = 0..4.
_DERIV_FACTORS = [
    (1.0, 1.0, 1.0, 1.0, 1.0, 1.0),
    (0.0, 1.0, 2.0, 3.0, 4.0, 5.0),
    (0.0, 0.0, 2.0, 6.0, 12.0, 20.0),
    (0.0, 0.0, 0.0, 6.0, 24.0, 60.0),
    (0.0, 0.0, 0.0, 0.0, 24.0, 120.0),
]


@dataclass(frozen=True)
class Quintic:
    """Polynomial profile s(t) = sum c_k (t/t_f)^k with time derivatives."""

    coeffs: tuple[float, float, float, float, float, float]
    t_f: float

    def derivative(self, t, order: int = 0):
        """d^order s / dt^order evaluated at absolute time t (scalar or array)."""
        if not 0 <= order <= 4:
            raise ValueError("order must be in 0..4")
        u = np.asarray(t, dtype=float) / self.t_f
        factors = _DERIV_FACTORS[order]
        acc = np.zeros_like(u)
        for k in range(5, order - 1, -1):
            acc = acc * u + factors[k] * self.coeffs[k]
        return acc / self.t_f**order

    def value(self, t):
        return self.derivative(t, 0)


@dataclass(frozen=True)
class LinearGeometry:
    """A straight segment anchored at `origin` pointing along unit `direction`."""

    origin: tuple[float, float] = (0.0, 0.0)
    direction: tuple[float, float] = (1.0, 0.0)

    def __post_init__(self) -> None:
        d = np.asarray(self.direction, dtype=float)
        n = np.linalg.norm(d)
        if not np.isfinite(n) or n == 0.0:
            raise ValueError("direction must be a nonzero vector")
        object.__setattr__(self, "direction", tuple((d / n).tolist()))
        object.__setattr__(self, "origin", tuple(float(v) for v in self.origin))

    def embed(self, derivs: Sequence[np.ndarray]) -> list[np.ndarray]:
        """Map profile derivatives (arc length s and d^n s/dt^n) to the plane."""
        d = np.asarray(self.direction)
        o = np.asarray(self.origin)
        out = [o + np.multiply.outer(derivs[0], d)]
        for ds in derivs[1:]:
            out.append(np.multiply.outer(ds, d))
        return out


@dataclass(frozen=True)
class ArcGeometry:
    """A circular segment: center, radius, starting angle, and turn sense.

    orientation +1 sweeps counterclockwise, -1 clockwise. The profile variable
    is the swept angle theta(t) >= 0.
    """

    center: tuple[float, float]
    radius: float
    start_angle: float
    orientation: int = 1

    def __post_init__(self) -> None:
        if not (self.radius > 0.0):
            raise ValueError("radius must be positive")
        if self.orientation not in (-1, 1):
            raise ValueError("orientation must be +1 or -1")
        object.__setattr__(self, "center", tuple(float(v) for v in self.center))

    def embed(self, derivs: Sequence[np.ndarray]) -> list[np.ndarray]:
        """Map angle derivatives to planar position derivatives up to order 4.

        With u = (cos phi, sin phi), n = (-sin phi, cos phi), phi = start +
        orientation * theta:
            p    = C + R u
            p'   = R phi' n
            p''  = R (phi'' n - phi'^2 u)
            p''' = R ((phi''' - phi'^3) n - 3 phi' phi'' u)
            p'''' = R ((phi'''' - 6 phi'^2 phi'') n
                       + (phi'^4 - 4 phi' phi''' - 3 phi''^2) u)
        """
        R = self.radius
        s = float(self.orientation)
        phi = self.start_angle + s * np.asarray(derivs[0], dtype=float)
        dphi = [None] + [s * np.asarray(d, dtype=float) for d in derivs[1:]]
        u = np.stack([np.cos(phi), np.sin(phi)], axis=-1)
        n = np.stack([-np.sin(phi), np.cos(phi)], axis=-1)
        c = np.asarray(self.center)

        def comb(nu_coeff, u_coeff):
            return R * (nu_coeff[..., None] * n + u_coeff[..., None] * u)

        out = [c + R * u]
        order = len(derivs) - 1
        if order >= 1:
            p1, = dphi[1:2]
            out.append(comb(p1, np.zeros_like(p1)))
        if order >= 2:
            p1, p2 = dphi[1], dphi[2]
            out.append(comb(p2, -p1**2))
        if order >= 3:
            p1, p2, p3 = dphi[1], dphi[2], dphi[3]
            out.append(comb(p3 - p1**3, -3.0 * p1 * p2))
        if order >= 4:
            p1, p2, p3, p4 = dphi[1], dphi[2], dphi[3], dphi[4]
            out.append(comb(p4 - 6.0 * p1**2 * p2, p1**4 - 4.0 * p1 * p3 - 3.0 * p2**2))
        return out


Geometry = LinearGeometry | ArcGeometry


@dataclass(frozen=True)
class PathSegment:
    """One leg of a transport path: a scalar profile embedded in the plane.

    For STA kinds the profile is the designed atom motion and the tweezer path
    is derived from it; for the other kinds the profile is the tweezer motion
    itself and the designed atom path is taken to coincide with it.
    """

    kind: PathKind
    geometry: Geometry
    profile: Quintic
    bc: BoundaryConditions

    def __post_init__(self) -> None:
        arc = isinstance(self.geometry, ArcGeometry)
        if self.kind in (PathKind.CONST_VELOCITY, PathKind.CONST_JERK) and arc:
            raise ValueError(f"{self.kind.value} segments must be straight")
        if self.kind is PathKind.CONST_ANGULAR and not arc:
            raise ValueError("constant-angular segments must be arcs")

    @property
    def t_f(self) -> float:
        return self.bc.t_f

    @property
    def is_static(self) -> bool:
        """True for a parked-tweezer segment (no sweep, resting endpoints)."""
        return self.bc.arc_length == 0.0 and self.bc.v_i == 0.0 and self.bc.v_f == 0.0

    def atom_states(self, t, order: int = 2) -> list[np.ndarray]:
        """Designed atom position and time derivatives up to `order` at local t."""
        derivs = [self.profile.derivative(t, k) for k in range(order + 1)]
        return self.geometry.embed(derivs)

    def tweezer_states(self, t, omega0: float, order: int = 2) -> list[np.ndarray]:
        """Tweezer position and derivatives up to `order` (order <= 2) at local t."""
        if self.kind in (PathKind.STA,):
            full = self.atom_states(t, order=order + 2)
            return [full[k] + full[k + 2] / omega0**2 for k in range(order + 1)]
        return self.atom_states(t, order=order)

    def endpoint_velocity(self, end: bool) -> np.ndarray:
        """Designed atom velocity vector at the segment start (end=False) or end."""
        t = self.bc.t_f if end else 0.0
        return self.atom_states(np.asarray(t), order=1)[1]

    def endpoint_position(self, end: bool) -> np.ndarray:
        t = self.bc.t_f if end else 0.0
        return self.atom_states(np.asarray(t), order=0)[0]


def _linear_profile_segment(
    kind: PathKind,
    coeffs: tuple[float, ...],
    bc: BoundaryConditions,
    origin=(0.0, 0.0),
    direction=(1.0, 0.0),
) -> PathSegment:
    geom = LinearGeometry(tuple(origin), tuple(direction))
    return PathSegment(kind=kind, geometry=geom, profile=Quintic(coeffs, bc.t_f), bc=bc)


def sta_linear(
    bc: BoundaryConditions, origin=(0.0, 0.0), direction=(1.0, 0.0)
) -> PathSegment:
    """Straight shortcut segment for the given boundary conditions."""
    if bc.distance is None:
        raise ValueError("sta_linear needs distance boundary conditions")
    coeffs = quintic_coefficients(bc.distance, bc.t_f, bc.v_i, bc.v_f)
    return _linear_profile_segment(PathKind.STA, coeffs, bc, origin, direction)


def cv_path(
    l: float, t_f: float, origin=(0.0, 0.0), direction=(1.0, 0.0)
) -> PathSegment:
    """Constant-velocity sweep: the tweezer moves at l/t_f throughout."""
    v = l / t_f
    bc = BoundaryConditions(t_f=t_f, distance=l, v_i=v, v_f=v)
    return _linear_profile_segment(
        PathKind.CONST_VELOCITY, (0.0, l, 0.0, 0.0, 0.0, 0.0), bc, origin, direction
    )


def hold_path(duration: float, position=(0.0, 0.0)) -> PathSegment:
    """Parked tweezer: hold at `position` for `duration` seconds.

    Composite paths treat hold segments as motionless, so drive-efficiency
    depth scaling does not apply to them.
    """
    return cv_path(0.0, duration, origin=position)


def cj_path(
    l: float, t_f: float, origin=(0.0, 0.0), direction=(1.0, 0.0)
) -> PathSegment:
    """Constant-jerk sweep: cubic 3t~^2 - 2t~^3 with resting endpoints."""
    bc = BoundaryConditions(t_f=t_f, distance=l, v_i=0.0, v_f=0.0)
    return _linear_profile_segment(
        PathKind.CONST_JERK, (0.0, 0.0, 3.0 * l, -2.0 * l, 0.0, 0.0), bc, origin, direction
    )


def _arc_geometry_from_start(
    radius: float, signed_theta: float, start=(0.0, 0.0), heading=(1.0, 0.0)
) -> ArcGeometry:
    """Arc through `start` with initial tangent `heading` turning by signed_theta."""
    h = np.asarray(heading, dtype=float)
    h = h / np.linalg.norm(h)
    s = 1 if signed_theta >= 0 else -1
    # Center sits a radius to the left (CCW) or right (CW) of the heading.
    normal = s * np.array([-h[1], h[0]])
    center = np.asarray(start, dtype=float) + radius * normal
    start_angle = math.atan2(start[1] - center[1], start[0] - center[0])
    return ArcGeometry(tuple(center), radius, start_angle, orientation=s)


def sta_arc(
    bc: BoundaryConditions,
    geometry: ArcGeometry | None = None,
    start=(0.0, 0.0),
    heading=(1.0, 0.0),
    signed_theta: float | None = None,
) -> PathSegment:
    """Circular shortcut segment.

    The angle profile is the shortcut quintic with the endpoint speeds divided
    by the radius:

        theta(t) = (v_i t_f / R) t~
                   - ((6 v_i t_f + 4 v_f t_f)/R - 10 theta_f) t~^3
                   + ((8 v_i t_f + 7 v_f t_f)/R - 15 theta_f) t~^4
                   - ((3 v_i t_f + 3 v_f t_f)/R - 6 theta_f) t~^5

    If `geometry` is omitted it is placed so the arc starts at `start` with
    tangent `heading`, turning left for signed_theta > 0 (default +theta_f).
    """
    if bc.radius is None or bc.theta_f is None:
        raise ValueError("sta_arc needs radius/theta_f boundary conditions")
    if geometry is None:
        if signed_theta is None:
            signed_theta = bc.theta_f
        if abs(signed_theta) != bc.theta_f:
            raise ValueError("signed_theta must be +-theta_f")
        geometry = _arc_geometry_from_start(bc.radius, signed_theta, start, heading)
    coeffs = quintic_coefficients(bc.theta_f, bc.t_f, bc.v_i / bc.radius, bc.v_f / bc.radius)
    return PathSegment(
        kind=PathKind.STA, geometry=geometry, profile=Quintic(coeffs, bc.t_f), bc=bc
    )


def const_angular_path(
    radius: float,
    theta_f: float,
    t_f: float,
    geometry: ArcGeometry | None = None,
    start=(0.0, 0.0),
    heading=(1.0, 0.0),
    signed_theta: float | None = None,
) -> PathSegment:
    """Arc swept at constant angular velocity theta_f / t_f."""
    if geometry is None:
        if signed_theta is None:
            signed_theta = theta_f
        geometry = _arc_geometry_from_start(radius, signed_theta, start, heading)
    v = radius * theta_f / t_f
    bc = BoundaryConditions(t_f=t_f, radius=radius, theta_f=theta_f, v_i=v, v_f=v)
    return PathSegment(
        kind=PathKind.CONST_ANGULAR,
        geometry=geometry,
        profile=Quintic((0.0, theta_f, 0.0, 0.0, 0.0, 0.0), t_f),
        bc=bc,
    )


@dataclass(frozen=True)
class CompositePath:
    """An ordered chain of segments with continuous junctions."""

    segments: tuple[PathSegment, ...]

    def __post_init__(self) -> None:
        if not self.segments:
            raise ValueError("a path needs at least one segment")

    @property
    def durations(self) -> np.ndarray:
        return np.array([seg.t_f for seg in self.segments])

    @property
    def total_duration(self) -> float:
        return float(np.sum(self.durations))

    @property
    def boundaries(self) -> np.ndarray:
        """Cumulative segment end times, length n_segments."""
        return np.cumsum(self.durations)

    def locate(self, t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Map global times to (segment index, local time)."""
        t = np.asarray(t, dtype=float)
        bounds = self.boundaries
        idx = np.searchsorted(bounds, t, side="right")
        idx = np.clip(idx, 0, len(self.segments) - 1)
        starts = bounds - self.durations
        return idx, t - starts[idx]

    def _eval(self, t, order: int, tweezer: bool, omega0: float | None):
        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        idx, local = self.locate(t_arr)
        out = [np.empty(t_arr.shape + (2,)) for _ in range(order + 1)]
        for i, seg in enumerate(self.segments):
            mask = idx == i
            if not np.any(mask):
                continue
            if tweezer:
                states = seg.tweezer_states(local[mask], omega0, order=order)
            else:
                states = seg.atom_states(local[mask], order=order)
            for k in range(order + 1):
                out[k][mask] = states[k]
        if np.isscalar(t) or np.asarray(t).ndim == 0:
            return [o[0] for o in out]
        return out

    def tweezer_position(self, t, omega0: float):
        return self._eval(t, 0, True, omega0)[0]

    def tweezer_states(self, t, omega0: float, order: int = 2):
        return self._eval(t, order, True, omega0)

    def atom_states(self, t, order: int = 2):
        return self._eval(t, order, False, None)

    def static_mask(self, t) -> np.ndarray:
        """Boolean array: True where the governing segment is a parked hold."""
        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        idx, _ = self.locate(t_arr)
        flags = np.array([seg.is_static for seg in self.segments])
        return flags[idx]

    @property
    def start_position(self) -> np.ndarray:
        return self.segments[0].endpoint_position(end=False)

    @property
    def initial_velocity(self) -> np.ndarray:
        """Designed atom velocity at departure."""
        return self.segments[0].endpoint_velocity(end=False)

    @property
    def final_frame_velocity(self) -> np.ndarray:
        """Velocity of the uniformly moving frame the trap settles into at the end."""
        return self.segments[-1].endpoint_velocity(end=True)


def concatenate(
    segments: Iterable[PathSegment], allow_speed_jumps: bool = False
) -> CompositePath:
    """Chain segments, enforcing junction continuity.

    Positions must coincide (to float roundoff), speeds must match to 1e-9
    relative, and tangent directions to 1e-9 rad. Tangent checks are skipped
    when either junction speed vanishes. allow_speed_jumps=True waives the
    speed and tangent checks for deliberately diabatic protocols (a sweep
    that stops dead into a hold); positions must still coincide.
    """
    segs = tuple(segments)
    path = CompositePath(segs)
    for i in range(len(segs) - 1):
        a, b = segs[i], segs[i + 1]
        pa, pb = a.endpoint_position(True), b.endpoint_position(False)
        scale = max(a.bc.arc_length, b.bc.arc_length, float(np.linalg.norm(pa)))
        tol = max(POSITION_ATOL, 1e-9 * scale)
        gap = float(np.linalg.norm(pa - pb))
        if gap > tol:
            raise JunctionMismatch(i, "position", f"|dp| = {gap:.3e} m > {tol:.3e} m")
        if allow_speed_jumps:
            continue
        va, vb = a.endpoint_velocity(True), b.endpoint_velocity(False)
        sa, sb = float(np.linalg.norm(va)), float(np.linalg.norm(vb))
        if abs(sa - sb) > max(SPEED_RTOL * max(sa, sb), SPEED_FLOOR):
            raise JunctionMismatch(i, "speed", f"{sa:.6g} vs {sb:.6g} m/s")
        if min(sa, sb) > SPEED_FLOOR:
            cosang = float(np.dot(va, vb) / (sa * sb))
            ang = math.acos(min(1.0, max(-1.0, cosang)))
            if ang > TANGENT_ATOL:
                raise JunctionMismatch(i, "tangent", f"angle = {ang:.3e} rad")
    return path


@dataclass(frozen=True)
class SampledPath:
    """Dense tabulation of a path on a per-segment uniform grid.

    Junction samples carry the right-limit (incoming segment) derivative
    values; positions are continuous so only velocity/acceleration columns
    are affected.
    """

    times: np.ndarray
    tweezer_position: np.ndarray
    tweezer_velocity: np.ndarray
    tweezer_acceleration: np.ndarray
    atom_design_position: np.ndarray

    def __post_init__(self) -> None:
        n = len(self.times)
        if n < 2:
            raise ValueError("a sampled path needs at least two samples")
        for name in (
            "tweezer_position",
            "tweezer_velocity",
            "tweezer_acceleration",
            "atom_design_position",
        ):
            if getattr(self, name).shape != (n, 2):
                raise ValueError(f"{name} must have shape ({n}, 2)")


def sample(path: CompositePath | PathSegment, n_per_segment: int, omega0: float) -> SampledPath:
    """Tabulate tweezer kinematics and the designed atom position.

    Each segment contributes `n_per_segment` uniformly spaced samples
    including both endpoints; the duplicate at each junction is dropped,
    keeping the later segment's sample.
    """
    if n_per_segment < 2:
        raise ValueError("n_per_segment must be >= 2")
    if isinstance(path, PathSegment):
        path = CompositePath((path,))
    times, tw, atoms = [], [[], [], []], []
    t0 = 0.0
    for i, seg in enumerate(path.segments):
        local = np.linspace(0.0, seg.t_f, n_per_segment)
        keep = slice(0, None) if i == 0 else slice(1, None)
        states = seg.tweezer_states(local, omega0, order=2)
        atom = seg.atom_states(local, order=0)[0]
        times.append(t0 + local[keep])
        for k in range(3):
            tw[k].append(states[k][keep])
        atoms.append(atom[keep])
        t0 += seg.t_f
    return SampledPath(
        times=np.concatenate(times),
        tweezer_position=np.concatenate(tw[0]),
        tweezer_velocity=np.concatenate(tw[1]),
        tweezer_acceleration=np.concatenate(tw[2]),
        atom_design_position=np.concatenate(atoms),
    )


@dataclass(frozen=True)
class SegmentSpec:
    """Declarative description of one segment for chained path building."""

    kind: PathKind
    t_f: float
    distance: float | None = None  # straight segments [m]
    radius: float | None = None  # arcs [m]
    theta_f: float | None = None  # arcs, signed: + turns left, - turns right [rad]
    v_i: float = 0.0
    v_f: float = 0.0


def chain(
    specs: Sequence[SegmentSpec],
    start=(0.0, 0.0),
    heading=(1.0, 0.0),
    allow_speed_jumps: bool = False,
) -> CompositePath:
    """Build a composite path by laying segments end to end.

    The first segment departs from `start` along `heading`; every later
    segment is anchored at the previous endpoint with the arrival tangent.
    """
    pos = np.asarray(start, dtype=float)
    head = np.asarray(heading, dtype=float)
    head = head / np.linalg.norm(head)
    segments = []
    for spec in specs:
        if spec.kind in (PathKind.STA,) and spec.distance is not None:
            bc = BoundaryConditions(
                t_f=spec.t_f, distance=spec.distance, v_i=spec.v_i, v_f=spec.v_f
            )
            seg = sta_linear(bc, origin=tuple(pos), direction=tuple(head))
        elif spec.kind is PathKind.STA:
            bc = BoundaryConditions(
                t_f=spec.t_f,
                radius=spec.radius,
                theta_f=abs(spec.theta_f),
                v_i=spec.v_i,
                v_f=spec.v_f,
            )
            seg = sta_arc(bc, start=tuple(pos), heading=tuple(head), signed_theta=spec.theta_f)
        elif spec.kind is PathKind.CONST_VELOCITY:
            seg = cv_path(spec.distance, spec.t_f, origin=tuple(pos), direction=tuple(head))
        elif spec.kind is PathKind.CONST_JERK:
            seg = cj_path(spec.distance, spec.t_f, origin=tuple(pos), direction=tuple(head))
        elif spec.kind is PathKind.CONST_ANGULAR:
            seg = const_angular_path(
                spec.radius,
                abs(spec.theta_f),
                spec.t_f,
                start=tuple(pos),
                heading=tuple(head),
                signed_theta=spec.theta_f,
            )
        else:
            raise ValueError(f"unsupported segment kind {spec.kind!r}")
        segments.append(seg)
        pos = seg.endpoint_position(end=True)
        vel = seg.endpoint_velocity(end=True)
        speed = float(np.linalg.norm(vel))
        if speed > SPEED_FLOOR:
            head = vel / speed
        elif isinstance(seg.geometry, ArcGeometry):
            # Resting arc endpoint: tangent from the geometry.
            geom = seg.geometry
            phi = geom.start_angle + geom.orientation * seg.profile.value(seg.t_f)
            head = geom.orientation * np.array([-math.sin(phi), math.cos(phi)])
        # Straight resting segments keep the previous heading.
    return concatenate(segments, allow_speed_jumps=allow_speed_jumps)
