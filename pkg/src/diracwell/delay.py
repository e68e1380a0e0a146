"""Group delays, the negative-delay threshold and resonance diagnostics.

All delays are in units of ``tau0 = hbar/(mu c^2)``; with c = 1 the light
transit time across the well is numerically equal to its width.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect

from .errors import DomainError, NotAtResonanceError
from .scattering import WellScenario, kinematics, transmission

# Depth at which the threshold cubic E^3 - E - V0 = 0 changes from three
# real roots (trigonometric form) to one real root (real radicals).
BRANCH_DEPTH = 2.0 / (3.0 * math.sqrt(3.0))
RESONANCE_TOL = 1e-9


def _sinc2(x):
    # sin(2x)/(2x), finite at x = 0
    return np.sinc(2.0 * np.asarray(x, dtype=float) / np.pi)


def relativistic_delay(energy, depth, width):
    """Stationary-phase delay hbar d(phi)/dE, vectorised over arrays.

    The second bracket term carries sin(2k'a)/(2k'a); this is what makes
    the expression the exact energy derivative of the phase shift.
    """
    E = np.asarray(energy, dtype=float)
    V = np.asarray(depth, dtype=float)
    a = np.asarray(width, dtype=float)
    k, kp, c = kinematics(E, V)
    T = transmission(E, V, a)
    c2 = c * c
    bracket = (1.0 + c2) * (E + V) - (1.0 - c2) * V * (2.0 * E + V) / (k * k) * _sinc2(kp * a)
    return T * a / (2.0 * c * kp) * bracket


def relativistic_delay_dimensionless(alpha, beta, gamma):
    """The same delay written in alpha = E, beta = V0, gamma = 1/a."""
    alpha = float(alpha)
    beta = float(beta)
    s2 = (alpha + beta) ** 2 - 1.0
    _, _, c = kinematics(alpha, beta)
    c = float(c)
    if math.isinf(gamma):
        return 0.0
    ka = math.sqrt(s2) / gamma
    T = 4 * c * c / (4 * c * c + (c * c - 1) ** 2 * math.sin(ka) ** 2)
    sinc = math.sin(2 * ka) / (2 * ka)
    return (
        T / (2 * c) * ka / s2
        * ((1 + c * c) * (alpha + beta) - (1 - c * c) * beta * (2 * alpha + beta) / (alpha * alpha - 1) * sinc)
    )


def nonrel_wavenumbers(energy, depth):
    """Schroedinger-limit wavenumbers sqrt(2E'), sqrt(2(E' + V0))."""
    E = np.asarray(energy, dtype=float)
    if np.any(E <= 1.0):
        raise DomainError("kinetic energy must be positive (E > 1)")
    ek = E - 1.0
    return np.sqrt(2.0 * ek), np.sqrt(2.0 * (ek + np.asarray(depth, dtype=float)))


def nonrelativistic_delay(energy, depth, width):
    """Schroedinger-theory phase time, vectorised (dimensionless form)."""
    E = np.asarray(energy, dtype=float)
    V = np.asarray(depth, dtype=float)
    a = np.asarray(width, dtype=float)
    k, kp = nonrel_wavenumbers(E, V)
    ek = E - 1.0
    x = kp * a
    num = ek * (2.0 * ek + V) - V * V * _sinc2(x)
    den = 4.0 * ek * (ek + V) + V * V * np.sin(x) ** 2
    # k'a / sqrt(E'(E'+V0)) == 2a/k
    return 2.0 * a / k * num / den


def nonrelativistic_delay_wavenumber_form(energy, depth, width):
    """Schroedinger phase time written with k, k' and the well scale sqrt(2 V0)."""
    if depth <= 0.0:
        raise DomainError("the wavenumber form needs V0 > 0 (well scale sqrt(2 V0))")
    k, kp = (float(v) for v in nonrel_wavenumbers(energy, depth))
    well_scale_k4 = (2.0 * depth) ** 2
    x = kp * width
    sinc = float(_sinc2(x))
    return (
        2.0 * width / k
        * (k * k * (k * k + kp * kp) / well_scale_k4 - sinc)
        / (4.0 * k * k * kp * kp / well_scale_k4 + math.sin(x) ** 2)
    )


def group_delay_rel(scenario: WellScenario) -> float:
    return float(relativistic_delay(scenario.energy_total, scenario.well_depth, scenario.well_width))


def group_delay_nonrel(scenario: WellScenario) -> float:
    return float(nonrelativistic_delay(scenario.energy_total, scenario.well_depth, scenario.well_width))


def negativity_margin(energy: float, depth: float) -> float:
    """lhs - rhs of the necessary condition; negative means the condition holds."""
    k, _, c = (float(v) for v in kinematics(energy, depth))
    c2 = c * c
    return (1.0 + c2) * (energy + depth) - (1.0 - c2) * depth * (2.0 * energy + depth) / (k * k)


def negativity_condition(energy: float, depth: float) -> bool:
    """Necessary condition for a width with negative group delay to exist."""
    if depth <= 0.0:
        raise DomainError(f"well_depth must be > 0, got {depth!r}")
    return negativity_margin(energy, depth) < 0.0


def threshold_branch(depth: float) -> str:
    return "real-radical" if depth >= BRANCH_DEPTH else "trig"


def threshold_energy(depth: float) -> float:
    """Largest real root of E^3 - E - V0 = 0 (Cardano / trigonometric form)."""
    if not depth > 0.0:
        raise DomainError(f"well_depth must be > 0, got {depth!r}")
    half = 0.5 * depth
    if depth >= BRANCH_DEPTH:
        root = math.sqrt(max(half * half - 1.0 / 27.0, 0.0))
        upper = half + root
        # (half + root)(half - root) = 1/27; avoids cancellation for large V0
        lower = (1.0 / 27.0) / upper
        return float(np.cbrt(upper) + np.cbrt(lower))
    theta = math.acos(half * math.sqrt(27.0))
    return 2.0 / math.sqrt(3.0) * math.cos(theta / 3.0)


def threshold_energy_bisection(depth: float, xtol: float = 1e-15) -> float:
    """Root of the negativity-condition equality, found by plain bisection."""
    if not depth > 0.0:
        raise DomainError(f"well_depth must be > 0, got {depth!r}")
    lo = 1.0 + 1e-14
    hi = 10.0
    while negativity_margin(hi, depth) < 0.0:
        hi *= 2.0
    return bisect(negativity_margin, lo, hi, args=(depth,), xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=400)


def resonance_order(scenario: WellScenario) -> int:
    """Nearest resonance index m = round(k'a/pi), never below 1."""
    _, kp, _ = kinematics(scenario.energy_total, scenario.well_depth)
    return max(1, int(round(float(kp) * scenario.well_width / math.pi)))


def is_resonant(scenario: WellScenario, tol: float = RESONANCE_TOL) -> bool:
    if scenario.well_depth <= 0.0 or scenario.well_width <= 0.0:
        return False
    _, kp, _ = kinematics(scenario.energy_total, scenario.well_depth)
    return abs(math.sin(float(kp) * scenario.well_width)) < tol


def _require_resonance(scenario):
    if not is_resonant(scenario):
        raise NotAtResonanceError(
            f"k'a is not a multiple of pi for {scenario!r} (|sin k'a| >= {RESONANCE_TOL})"
        )


def resonance_delay(scenario: WellScenario) -> float:
    _require_resonance(scenario)
    E, V, a = scenario.energy_total, scenario.well_depth, scenario.well_width
    _, kp, c = (float(v) for v in kinematics(E, V))
    return 0.5 * (c + 1.0 / c) * (E + V) * a / kp


def _slope_at_resonance(energy, depth):
    k, kp, c = (float(v) for v in kinematics(energy, depth))
    c2 = c * c
    return (
        (1.0 + c2) * (energy + depth) - (1.0 - c2) * depth * (2.0 * energy + depth) / (k * k)
    ) / (2.0 * c * kp)


def resonance_slope(scenario: WellScenario) -> float:
    """d(tau)/da at a resonance; negative exactly when the negativity condition holds."""
    _require_resonance(scenario)
    return _slope_at_resonance(scenario.energy_total, scenario.well_depth)


def width_derivative(scenario: WellScenario, step: float = 1e-6) -> float:
    """Central finite difference of the relativistic delay in the width."""
    E, V, a = scenario.energy_total, scenario.well_depth, scenario.well_width
    lo = max(a - step, 0.0)
    hi = a + step
    return float((relativistic_delay(E, V, hi) - relativistic_delay(E, V, lo)) / (hi - lo))


def low_energy_limit_delay(alpha, depth, kprime_a):
    """Asymptotic delay as alpha -> 1+ at fixed k'a, vectorised."""
    alpha = np.asarray(alpha, dtype=float)
    x = np.asarray(kprime_a, dtype=float)
    return -np.sqrt((depth + 2.0) / ((alpha * alpha - 1.0) * depth)) * np.cos(x) / np.sin(x)


def low_energy_limit_transmission(chi_value, kprime_a):
    c2 = np.asarray(chi_value, dtype=float) ** 2
    return 4.0 * c2 / (4.0 * c2 + np.sin(np.asarray(kprime_a, dtype=float)) ** 2)


@dataclass(frozen=True)
class DelayReport:
    scenario: WellScenario
    delay_rel: float
    delay_nonrel: float
    light_transit: float
    negativity_condition: bool
    threshold_energy: float
    resonance_slope: float

    @property
    def kinetic_energy(self) -> float:
        return self.scenario.energy_total - 1.0

    @property
    def superluminal(self) -> bool:
        return self.delay_rel < self.light_transit


def delay_report(scenario: WellScenario) -> DelayReport:
    E, V = scenario.energy_total, scenario.well_depth
    if V <= 0.0:
        raise DomainError("delay reports need a well of positive depth")
    # The resonance slope is independent of m, so any resonance gives this value.
    return DelayReport(
        scenario=scenario,
        delay_rel=group_delay_rel(scenario),
        delay_nonrel=group_delay_nonrel(scenario),
        light_transit=scenario.well_width,
        negativity_condition=negativity_condition(E, V),
        threshold_energy=threshold_energy(V),
        resonance_slope=_slope_at_resonance(E, V),
    )
