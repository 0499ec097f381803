"""Tweezer trap models: parameter bundle, potentials, forces, escape radii.

Two radial trap shapes are supported. The truncated harmonic well

    U(xi) = U0 * (xi - d) * (xi + d) / d**2   for |xi| < d, else 0

is an inverted parabola that reaches zero at |xi| = d and is clamped to zero
outside. The Gaussian well

    U(xi) = -U0 * exp(-2 xi**2 / d_G**2)

is the 1/e^2-waist form; its curvature at the bottom matches the harmonic
well exactly when d_G = sqrt(2) * d.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .constants import RB87, PhysicalConstants, kHz, mK, um

# A user-supplied trap frequency may disagree with sqrt(2 U0 / m d^2) by at
# most this relative amount before the parameter set is rejected.
OMEGA_CONSISTENCY_TOL = 0.15


class TrapVariant(Enum):
    TRUNCATED_HARMONIC = "truncated_harmonic"
    GAUSSIAN = "gaussian"


@dataclass(frozen=True)
class TrapParams:
    """Static tweezer parameters in SI units.

    Attributes:
        depth: trap depth U0 [J].
        width: harmonic half-width d [m]; the truncated well reaches zero here.
        waist: Gaussian 1/e^2 radius d_G [m]; defaults to sqrt(2) * width so the
            Gaussian curvature at the bottom equals the harmonic one.
        omega0: nominal radial trap frequency [rad/s]; defaults to the value
            derived from depth and width. A supplied value must agree with the
            derived one within OMEGA_CONSISTENCY_TOL.
        constants: species constants (mass etc.).
    """

    depth: float
    width: float
    waist: float | None = None
    omega0: float | None = None
    constants: PhysicalConstants = field(default=RB87)

    def __post_init__(self) -> None:
        if not (self.depth > 0.0):
            raise ValueError(f"depth must be positive, got {self.depth!r}")
        if not (self.width > 0.0):
            raise ValueError(f"width must be positive, got {self.width!r}")
        if self.waist is None:
            object.__setattr__(self, "waist", math.sqrt(2.0) * self.width)
        if not (self.waist > self.width):
            raise ValueError("waist must exceed width")
        derived = self.curvature_frequency
        if self.omega0 is None:
            object.__setattr__(self, "omega0", derived)
        elif abs(self.omega0 - derived) > OMEGA_CONSISTENCY_TOL * derived:
            raise ValueError(
                f"omega0={self.omega0:.6g} inconsistent with sqrt(2*U0/(m*d^2))"
                f"={derived:.6g} beyond {OMEGA_CONSISTENCY_TOL:.0%}"
            )

    @property
    def curvature_frequency(self) -> float:
        """sqrt(2 U0 / (m d^2)): the frequency set by the potential itself [rad/s]."""
        return math.sqrt(2.0 * self.depth / (self.constants.atom_mass * self.width**2))

    @classmethod
    def reference(cls, constants: PhysicalConstants = RB87) -> "TrapParams":
        """The package's reference parameter set: 0.8 mK deep, 0.73 um wide, 2*pi*90 kHz."""
        return cls(
            depth=constants.k_B * 0.8 * mK,
            width=0.73 * um,
            omega0=2.0 * math.pi * 90.0 * kHz,
            constants=constants,
        )

    @classmethod
    def consistent(
        cls, depth: float, width: float, constants: PhysicalConstants = RB87
    ) -> "TrapParams":
        """Parameter set with omega0 exactly sqrt(2 U0 / (m d^2))."""
        return cls(depth=depth, width=width, constants=constants)

    @classmethod
    def frequency_matched(
        cls,
        depth: float | None = None,
        omega0: float | None = None,
        constants: PhysicalConstants = RB87,
    ) -> "TrapParams":
        """Parameter set whose width makes the curvature frequency equal omega0.

        Defaults reproduce the reference depth and frequency; the implied
        width is sqrt(2 U0 / m) / omega0 (0.687 um at the defaults, waist
        0.971 um). Use this when the simulated well must oscillate at the
        quoted frequency rather than at the curvature of the quoted width.
        """
        if depth is None:
            depth = constants.k_B * 0.8 * mK
        if omega0 is None:
            omega0 = 2.0 * math.pi * 90.0 * kHz
        width = math.sqrt(2.0 * depth / constants.atom_mass) / omega0
        return cls(depth=depth, width=width, constants=constants)


@dataclass(frozen=True)
class TrapModel:
    """A trap variant bound to concrete parameters."""

    variant: TrapVariant
    params: TrapParams

    @property
    def constants(self) -> PhysicalConstants:
        return self.params.constants

    def escape_radius(self) -> float:
        """Displacement beyond which the atom is considered lost [m]."""
        if self.variant is TrapVariant.TRUNCATED_HARMONIC:
            return self.params.width
        return self.params.waist

    def potential(self, xi):
        """Potential energy at radial displacement xi [J].

        xi may be a scalar or array; the potential is even in xi.
        """
        xi = np.asarray(xi, dtype=float)
        p = self.params
        if self.variant is TrapVariant.TRUNCATED_HARMONIC:
            inside = np.abs(xi) < p.width
            value = p.depth * (xi - p.width) * (xi + p.width) / p.width**2
            out = np.where(inside, value, 0.0)
        else:
            out = -p.depth * np.exp(-2.0 * xi**2 / p.waist**2)
        if out.ndim == 0:
            return float(out)
        return out

    def force(self, xi):
        """Restoring force -dU/dxi at signed displacement xi [N]."""
        xi = np.asarray(xi, dtype=float)
        p = self.params
        if self.variant is TrapVariant.TRUNCATED_HARMONIC:
            inside = np.abs(xi) < p.width
            out = np.where(inside, -2.0 * p.depth * xi / p.width**2, 0.0)
        else:
            out = -4.0 * p.depth / p.waist**2 * xi * np.exp(-2.0 * xi**2 / p.waist**2)
        if out.ndim == 0:
            return float(out)
        return out

    def acceleration(self, displacement: np.ndarray, depth_scale=1.0) -> np.ndarray:
        """Acceleration on atoms displaced by `displacement` from the trap center.

        Args:
            displacement: (..., 2) array of planar displacement vectors [m].
            depth_scale: scalar or (...,) array of per-run depth factors; the
                instantaneous trap depth is depth_scale * U0.

        Returns:
            (..., 2) acceleration [m/s^2].
        """
        displacement = np.asarray(displacement, dtype=float)
        p = self.params
        m = p.constants.atom_mass
        scale = np.asarray(depth_scale, dtype=float)
        if scale.ndim:
            scale = scale[..., None]
        rho2 = np.sum(displacement**2, axis=-1, keepdims=True)
        if self.variant is TrapVariant.TRUNCATED_HARMONIC:
            inside = rho2 < p.width**2
            acc = np.where(inside, -(2.0 * p.depth / (m * p.width**2)) * displacement, 0.0)
        else:
            acc = (
                -(4.0 * p.depth / (m * p.waist**2))
                * displacement
                * np.exp(-2.0 * rho2 / p.waist**2)
            )
        return scale * acc


def truncated_harmonic(params: TrapParams) -> TrapModel:
    return TrapModel(TrapVariant.TRUNCATED_HARMONIC, params)


def gaussian(params: TrapParams) -> TrapModel:
    return TrapModel(TrapVariant.GAUSSIAN, params)
