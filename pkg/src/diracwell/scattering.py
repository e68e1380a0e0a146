"""Stationary scattering of a helicity +1 Dirac particle off a square well.

The well occupies ``0 < z < a`` with potential ``-V0``.  Natural units are
used throughout (mu = c = hbar = 1): energies are in units of the rest
energy, lengths in reduced Compton wavelengths and times in ``hbar/mu c^2``.
A scenario is therefore fully described by three dimensionless numbers,
the total energy ``E`` (alpha), the depth ``V0`` (beta) and the width ``a``
(which equals 1/gamma).

Inside the well the particle has wavenumber ``k' = sqrt((E+V0)^2 - 1)``,
outside ``k = sqrt(E^2 - 1)``.  The spinor matching at both edges reduces to
a single impedance-like ratio ``chi`` and the transmitted wave at ``z = a``
is ``F = exp(i phi)/f`` with

    f exp(i phi) = cos(k'a) + (i/2)(chi + 1/chi) sin(k'a).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "WellScenario",
    "ScatteringState",
    "wavenumbers",
    "chi",
    "transmission_amplitude",
    "transmission_probability",
    "kinematics",
    "phase_shift",
    "amplitude",
    "transmission",
    "width_for_kprime_a",
    "resonance_width",
]


@dataclass(frozen=True)
class WellScenario:
    """Incident energy, well depth and well width in natural units."""

    energy_total: float
    well_depth: float
    well_width: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.energy_total) or self.energy_total <= 1.0:
            raise DomainError(
                f"energy_total must exceed the rest energy 1, got {self.energy_total!r}"
            )
        # V0 = 0 is accepted as the free-propagation limit.
        if not np.isfinite(self.well_depth) or self.well_depth < 0.0:
            raise DomainError(f"well_depth must be >= 0, got {self.well_depth!r}")
        if not np.isfinite(self.well_width) or self.well_width < 0.0:
            raise DomainError(f"well_width must be >= 0, got {self.well_width!r}")

    @property
    def kinetic_energy(self) -> float:
        return self.energy_total - 1.0

    def with_width(self, width: float) -> "WellScenario":
        return WellScenario(self.energy_total, self.well_depth, width)

    def with_kprime_a(self, kprime_a: float) -> "WellScenario":
        """Same energy and depth, width chosen so that k'a equals ``kprime_a``."""
        return self.with_width(width_for_kprime_a(self.energy_total, self.well_depth, kprime_a))


@dataclass(frozen=True)
class ScatteringState:
    k: float
    k_prime: float
    chi: float
    amplitude: complex
    magnitude_f: float
    phase: float
    transmission: float


def kinematics(energy, depth):
    """Vectorised ``(k, k', chi)`` for arrays of energies and depths.

    Raises DomainError if any energy is at or below the rest energy.
    """
    energy = np.asarray(energy, dtype=float)
    depth = np.asarray(depth, dtype=float)
    if np.any(energy <= 1.0):
        raise DomainError("incident energy must exceed the rest energy (E > 1)")
    k = np.sqrt((energy - 1.0) * (energy + 1.0))
    inner = energy + depth
    kp = np.sqrt((inner - 1.0) * (inner + 1.0))
    c = (k / kp) * (inner + 1.0) / (energy + 1.0)
    return k, kp, c


def _branch_phase(x, s):
    # int(x/pi + 1/2)*pi + arctan(s tan x), written with arctan2 on the reduced
    # argument so the tan poles at x = (m + 1/2)pi join continuously.
    n = np.floor(x / np.pi + 0.5)
    y = x - n * np.pi
    return n * np.pi + np.arctan2(s * np.sin(y), np.cos(y))


def phase_shift(energy, depth, width):
    """Continuous transmission phase shift phi (radians), vectorised."""
    _, kp, c = kinematics(energy, depth)
    s = 0.5 * (c + 1.0 / c)
    return _branch_phase(kp * np.asarray(width, dtype=float), s)


def transmission(energy, depth, width):
    """Transmission probability T, vectorised."""
    _, kp, c = kinematics(energy, depth)
    sn = np.sin(kp * np.asarray(width, dtype=float))
    c2 = c * c
    return 4.0 * c2 / (4.0 * c2 + (c2 - 1.0) ** 2 * sn * sn)


def amplitude(energy, depth, width):
    """Complex transmission coefficient F = exp(i phi)/f, vectorised."""
    _, kp, c = kinematics(energy, depth)
    x = kp * np.asarray(width, dtype=float)
    return 1.0 / (np.cos(x) - 0.5j * (c + 1.0 / c) * np.sin(x))


def wavenumbers(scenario: WellScenario) -> tuple[float, float]:
    k, kp, _ = kinematics(scenario.energy_total, scenario.well_depth)
    return float(k), float(kp)


def chi(scenario: WellScenario) -> float:
    """Matching ratio (k/k')(E + V0 + 1)/(E + 1); lies in (0, 1] for a well."""
    return float(kinematics(scenario.energy_total, scenario.well_depth)[2])


def transmission_probability(scenario: WellScenario) -> float:
    return float(transmission(scenario.energy_total, scenario.well_depth, scenario.well_width))


def transmission_amplitude(scenario: WellScenario) -> ScatteringState:
    E, V0, a = scenario.energy_total, scenario.well_depth, scenario.well_width
    k, kp, c = (float(v) for v in kinematics(E, V0))
    x = kp * a
    s = 0.5 * (c + 1.0 / c)
    f = float(np.hypot(np.cos(x), s * np.sin(x)))
    phi = float(_branch_phase(x, s))
    return ScatteringState(
        k=k,
        k_prime=kp,
        chi=c,
        amplitude=complex(np.exp(1j * phi) / f),
        magnitude_f=f,
        phase=phi,
        transmission=float(transmission(E, V0, a)),
    )


def width_for_kprime_a(energy, depth, kprime_a):
    """Width ``a`` at which the in-well phase k'a takes the given value."""
    _, kp, _ = kinematics(energy, depth)
    out = np.asarray(kprime_a, dtype=float) / kp
    return float(out) if out.ndim == 0 else out


def resonance_width(energy: float, depth: float, order: int) -> float:
    """Width of the ``order``-th transmission resonance, k'a = order * pi."""
    if order < 1:
        raise DomainError(f"resonance order must be >= 1, got {order}")
    if depth <= 0.0:
        raise DomainError("resonances need a well of positive depth")
    return width_for_kprime_a(energy, depth, order * np.pi)
