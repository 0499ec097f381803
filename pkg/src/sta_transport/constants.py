"""Physical constants and small unit helpers shared across the package."""

from __future__ import annotations

from dataclasses import dataclass

# Exact SI values (2019 redefinition).
K_B = 1.380649e-23  # J/K
HBAR = 1.054571817e-34  # J s

# Convenient magnitudes for building parameter sets in SI.
um = 1e-6  # m
nm = 1e-9  # m
us = 1e-6  # s
ms = 1e-3  # s
kHz = 1e3  # Hz
uK = 1e-6  # K
mK = 1e-3  # K


@dataclass(frozen=True)
class PhysicalConstants:
    """Constants a transport simulation depends on, bundled so tests can swap them.

    Attributes:
        atom_mass: mass of the transported atom [kg].
        hbar: reduced Planck constant [J s].
        k_B: Boltzmann constant [J/K].
    """

    atom_mass: float
    hbar: float = HBAR
    k_B: float = K_B

    def __post_init__(self) -> None:
        for name in ("atom_mass", "hbar", "k_B"):
            value = getattr(self, name)
            if not (value > 0.0):
                raise ValueError(f"{name} must be positive, got {value!r}")


# Rubidium-87, the workhorse species for tweezer transport experiments.
RB87 = PhysicalConstants(atom_mass=1.44316e-25)


def energy_from_temperature(temperature_K: float, constants: PhysicalConstants = RB87) -> float:
    """k_B * T in joules."""
    return constants.k_B * temperature_K


def temperature_from_energy(energy_J: float, constants: PhysicalConstants = RB87) -> float:
    """E / k_B in kelvin."""
    return energy_J / constants.k_B
