"""Vibrational excitation estimates from trajectory acceleration spectra.

The running excitation of a harmonically trapped atom driven by a moving
trap is set by the Fourier component of the drive acceleration at the trap
frequency,

    dn(t) = m |a(w0)|^2 / (2 hbar w0),   a(w0) = integral_0^t a(s) e^{i w0 s} ds.

Closed forms for the three standard transport ramps (the asymptotic laws for
w0 t_f >> 1), the maximum transportable distance at fixed duration, and the
excitation at that capacity point are provided alongside the numerical
spectral estimates.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .constants import RB87, PhysicalConstants
from .trap import TrapParams

# Minimum sampling density for the spectral integrals.
SAMPLES_PER_PERIOD = 32

# Number of upper-limit scan points for the running maximum.
RUNNING_SCAN_POINTS = 512

PATH_KINDS = ("cv", "cj", "sta")


class ResolutionError(ValueError):
    """Acceleration series too coarse to resolve the trap oscillation."""


class RegimeWarning(UserWarning):
    """Closed form evaluated outside its asymptotic regime."""


def _check_resolution(times: np.ndarray, omega0: float) -> None:
    period = 2.0 * math.pi / omega0
    dt_max = float(np.max(np.diff(times)))
    if dt_max > period / SAMPLES_PER_PERIOD:
        raise ResolutionError(
            f"sample spacing {dt_max:.3e} s exceeds 1/{SAMPLES_PER_PERIOD} "
            f"of the trap period {period:.3e} s"
        )


def delta_n_spectral(times, accel, omega0: float, constants: PhysicalConstants = RB87) -> float:
    """Excitation after the full series: m |a(w0)|^2 / (2 hbar w0)."""
    times = np.asarray(times, dtype=float)
    accel = np.asarray(accel, dtype=float)
    if times.ndim != 1 or times.shape != accel.shape or len(times) < 2:
        raise ValueError("times and accel must be equal-length 1D arrays")
    _check_resolution(times, omega0)
    integrand = accel * np.exp(1j * omega0 * times)
    amp = np.trapezoid(integrand, times)
    return constants.atom_mass * float(np.abs(amp)) ** 2 / (2.0 * constants.hbar * omega0)


def delta_n_running_max(
    times,
    accel,
    omega0: float,
    constants: PhysicalConstants = RB87,
    n_scan: int = RUNNING_SCAN_POINTS,
) -> float:
    """Maximum of the running excitation over upper limits t in (0, t_f]."""
    times = np.asarray(times, dtype=float)
    accel = np.asarray(accel, dtype=float)
    if times.ndim != 1 or times.shape != accel.shape or len(times) < 2:
        raise ValueError("times and accel must be equal-length 1D arrays")
    _check_resolution(times, omega0)
    integrand = accel * np.exp(1j * omega0 * times)
    running = cumulative_trapezoid(integrand, times, initial=0.0)
    mag2 = np.abs(running) ** 2
    idx = np.unique(np.linspace(1, len(times) - 1, min(n_scan, len(times) - 1)).astype(int))
    peak = float(np.max(mag2[idx]))
    return constants.atom_mass * peak / (2.0 * constants.hbar * omega0)


def acceleration_profile(
    kind: str,
    l: float,
    t_f: float,
    n_samples: int = 4097,
    width: float | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Sampled drive acceleration for one transport ramp.

    "sta" and "cj" are the designed smooth ramps. "cv" uses the rectangular
    approximation of the start/stop kicks: pulses of magnitude v^2/width and
    duration width/v at both ends (width required; pulses must fit, i.e.
    2 width/v <= t_f).
    """
    if kind not in PATH_KINDS:
        raise ValueError(f"kind must be one of {PATH_KINDS}")
    if l <= 0 or t_f <= 0:
        raise ValueError("l and t_f must be positive")
    t = np.linspace(0.0, t_f, n_samples)
    u = t / t_f
    if kind == "sta":
        a = 60.0 * l / t_f**2 * (u - 3.0 * u**2 + 2.0 * u**3)
    elif kind == "cj":
        a = 6.0 * l / t_f**2 * (1.0 - 2.0 * u)
    else:
        if width is None:
            raise ValueError("cv profile needs the trap width")
        v = l / t_f
        tau = width / v
        if 2.0 * tau > t_f:
            raise ValueError("acceleration pulses overlap: need 2*width/v <= t_f")
        a = np.zeros_like(t)
        a[t <= tau] = v * v / width
        a[t >= t_f - tau] = -v * v / width
    return t, a


class ClosedFormDeltaN(NamedTuple):
    final: float
    max: float


def delta_n_closed_form(
    kind: str, l: float, t_f: float, params: TrapParams, warn: bool = True
) -> ClosedFormDeltaN:
    """Asymptotic excitation laws (final and in-transit maximum).

    Final values for cj and sta are phase averages; the exact spectra carry
    an oscillatory factor between 0 and 2x depending on omega0 * t_f.
    """
    if kind not in PATH_KINDS:
        raise ValueError(f"kind must be one of {PATH_KINDS}")
    m = params.constants.atom_mass
    hbar = params.constants.hbar
    w = params.omega0
    if warn:
        if kind == "cv":
            tau = params.width * t_f / l
            if w * tau >= 1.0:
                warnings.warn(
                    "cv closed form assumes omega0 * width / v << 1", RegimeWarning, stacklevel=2
                )
        elif w * t_f <= 1.0:
            warnings.warn(
                "closed forms assume omega0 * t_f > 1", RegimeWarning, stacklevel=2
            )
    if kind == "cv":
        dn = m * l**2 / (2.0 * hbar * w * t_f**2)
        return ClosedFormDeltaN(final=dn, max=dn)
    if kind == "cj":
        base = m * l**2 / (hbar * w**3 * t_f**4)
        return ClosedFormDeltaN(final=36.0 * base, max=54.0 * base)
    base = m * l**2 / (hbar * w**3 * t_f**4)
    return ClosedFormDeltaN(
        final=3600.0 * m * l**2 / (hbar * w**5 * t_f**6), max=50.0 / 3.0 * base
    )


def l_max(kind: str, t_f: float, params: TrapParams) -> float:
    """Maximum transportable distance before peak excitation reaches the depth.

    Frequency-free forms in terms of (depth, width); they coincide with
    capacity_distance exactly when params.omega0 matches the trap curvature.
    """
    if kind not in PATH_KINDS:
        raise ValueError(f"kind must be one of {PATH_KINDS}")
    if t_f < 0:
        raise ValueError("t_f must be non-negative")
    m = params.constants.atom_mass
    u0 = params.depth
    if kind == "cv":
        return math.sqrt(2.0 * u0 / m) * t_f
    scale = u0 / (m * params.width) * t_f**2
    if kind == "cj":
        return scale / (3.0 * math.sqrt(3.0))
    return math.sqrt(3.0) / 5.0 * scale


def capacity_distance(kind: str, t_f: float, params: TrapParams) -> float:
    """Distance where the in-transit maximum excitation energy equals the depth.

    Solves max dn * hbar * omega0 = depth with the closed forms, using
    params.omega0 where it appears.
    """
    if kind not in PATH_KINDS:
        raise ValueError(f"kind must be one of {PATH_KINDS}")
    m = params.constants.atom_mass
    u0 = params.depth
    w = params.omega0
    if kind == "cv":
        return math.sqrt(2.0 * u0 / m) * t_f
    if kind == "cj":
        return w * t_f**2 * math.sqrt(u0 / (54.0 * m))
    return w * t_f**2 * math.sqrt(3.0 * u0 / (50.0 * m))


def delta_n_at_capacity(kind: str, t_f: float, params: TrapParams) -> float:
    """Final excitation when transporting the full capacity distance.

    Substituting l = capacity_distance into the final closed forms cancels
    every trap parameter except depth/(hbar omega0):
    cv U0/(hbar w0); cj (2/3) U0/(hbar w0); sta 216 U0/(hbar w0)/(w0 t_f)^2.
    """
    if kind not in PATH_KINDS:
        raise ValueError(f"kind must be one of {PATH_KINDS}")
    quanta = params.depth / (params.constants.hbar * params.omega0)
    if kind == "cv":
        return quanta
    if kind == "cj":
        return 2.0 / 3.0 * quanta
    return 216.0 * quanta / (params.omega0 * t_f) ** 2


@dataclass(frozen=True)
class HeatingReport:
    """Excitation summary for one ramp kind at one (l, t_f)."""

    kind: str
    l: float
    t_f: float
    delta_n_final: float
    delta_n_max: float
    l_max: float


def heating_report(kind: str, l: float, t_f: float, params: TrapParams) -> HeatingReport:
    dn = delta_n_closed_form(kind, l, t_f, params)
    return HeatingReport(
        kind=kind,
        l=l,
        t_f=t_f,
        delta_n_final=dn.final,
        delta_n_max=dn.max,
        l_max=l_max(kind, t_f, params),
    )


def scaling_table(t_f_values, params: TrapParams) -> list[HeatingReport]:
    """Capacity comparison rows: each kind transported to its own l_max.

    At capacity the in-transit maximum excitation energy equals the depth by
    construction, so delta_n_max is depth/(hbar omega0) for every kind and
    delta_n_final comes from delta_n_at_capacity.
    """
    quanta = params.depth / (params.constants.hbar * params.omega0)
    rows = []
    for t_f in t_f_values:
        for kind in PATH_KINDS:
            rows.append(
                HeatingReport(
                    kind=kind,
                    l=l_max(kind, t_f, params),
                    t_f=float(t_f),
                    delta_n_final=delta_n_at_capacity(kind, t_f, params),
                    delta_n_max=quanta,
                    l_max=l_max(kind, t_f, params),
                )
            )
    return rows
