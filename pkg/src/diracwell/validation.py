"""Cross-module invariant suite run by ``diracwell validate``.

Each check returns a :class:`Check`; the CLI prints one line per check and
exits non-zero if any fails.  Checks are deterministic (fixed RNG seed).
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import delay, scattering
from .wavepacket import PacketSpec, propagate_transmitted

ALPHA_REF = 1.01
BETA_REF = 0.4
W_REF = 300.0
SEED = 20040301


@dataclass
class Check:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name:<28s} {self.detail}  [{self.seconds:.2f}s]"


def check_threshold() -> Check:
    et = delay.threshold_energy(0.4)
    betas = np.linspace(1e-4, 2.0, 100)
    diff = max(abs(delay.threshold_energy(b) - delay.threshold_energy_bisection(b)) for b in betas)
    ok = abs(et - 1.16) <= 0.005 and diff < 1e-9
    return Check("threshold", ok, f"E_t(0.4)={et:.6f} max|closed-bisect|={diff:.2e}")


def check_threshold_limit() -> Check:
    betas = np.geomspace(1e-7, 1e-3, 60)
    worst = max(abs(delay.threshold_energy(b) - (1 + b / 2)) / (10 * b * b) for b in betas)
    return Check("threshold-nonrel-limit", worst <= 1.0, f"max |E_t-(1+b/2)|/(10 b^2)={worst:.3f}")


def check_threshold_consistency() -> Check:
    bad = 0
    for V in np.linspace(0.01, 2.0, 100):
        et = delay.threshold_energy(V)
        for E in np.linspace(1.0005, 3.0, 100):
            if abs(E - et) < 1e-6:
                continue
            if delay.negativity_condition(E, V) != (E < et):
                bad += 1
    return Check("threshold-consistency", bad == 0, f"{bad} mismatches on 100x100 grid")


def check_resonance_structure() -> Check:
    E, V = ALPHA_REF, BETA_REF
    _, kp, _ = scattering.kinematics(E, V)
    kp = float(kp)
    problems = []
    for m in range(1, 5):
        s = scattering.WellScenario(E, V, scattering.resonance_width(E, V, m))
        if abs(scattering.transmission_probability(s) - 1.0) > 1e-10:
            problems.append(f"T!=1 at m={m}")
        tau = delay.group_delay_rel(s)
        res = delay.resonance_delay(s)
        if not (tau > s.well_width and abs(tau - res) <= 1e-10 * abs(res)):
            problems.append(f"resonance delay m={m}")
        slope = delay.resonance_slope(s)
        fd = delay.width_derivative(s, 1e-6)
        if not (slope < 0 and abs(fd - slope) <= 1e-5 * abs(slope)):
            problems.append(f"slope m={m}")
    grid = np.linspace(0.05, 4 * math.pi, 2000)
    tau = delay.relativistic_delay(E, V, grid / kp)
    for m in range(4):
        sel = (grid >= m * math.pi) & (grid < (m + 1) * math.pi)
        if not np.any(tau[sel] < 0):
            problems.append(f"no negative delay in period {m}")
    return Check("resonance-structure", not problems, "; ".join(problems) or "resonances m=1..4 ok, negative dip every period")


def check_phase_staircase() -> Check:
    E, V = ALPHA_REF, BETA_REF
    k, kp, c = (float(v) for v in scattering.kinematics(E, V))
    err = max(
        abs(scattering.phase_shift(E, V, scattering.resonance_width(E, V, m)) - m * math.pi) for m in range(1, 5)
    )
    delta = 1e-4 / kp
    a = np.arange(0.05 / kp, 4 * math.pi / kp, delta)
    phi = scattering.phase_shift(E, V, a)
    steps = np.diff(phi)
    bound = 2 * kp * delta * 0.5 * (c + 1 / c)
    ok = err <= 1e-10 and steps.min() >= 0 and steps.max() <= bound
    return Check("phase-staircase", ok, f"max|phi-m pi|={err:.1e} min step={steps.min():.2e} max step/bound={steps.max() / bound:.3f}")


def random_scenarios(n: int, seed: int = SEED):
    rng = np.random.default_rng(seed)
    alpha = 1.0 + 4.0 * (1.0 - rng.random(n))
    beta = 2.0 * (1.0 - rng.random(n))
    ka = 4 * math.pi * (1.0 - rng.random(n))
    _, kp, _ = scattering.kinematics(alpha, beta)
    return alpha, beta, ka / kp


def check_derivative_oracle() -> Check:
    E, V, a = random_scenarios(1000)
    h = 1e-7
    tau = delay.relativistic_delay(E, V, a)
    fd = (scattering.phase_shift(E + h, V, a) - scattering.phase_shift(E - h, V, a)) / (2 * h)
    ratio = np.abs(tau - fd) / (1e-6 * np.maximum(np.abs(tau), 1.0))
    return Check("derivative-oracle", bool(ratio.max() <= 1.0), f"worst error / tolerance = {ratio.max():.3f}")


def check_low_energy_limit() -> Check:
    beta, gamma = 0.4, 0.01
    alpha = 1.0 + 1e-6
    _, kp, c = (float(v) for v in scattering.kinematics(alpha, beta))
    ka = kp / gamma
    tau = float(delay.relativistic_delay(alpha, beta, 1.0 / gamma))
    lim = float(delay.low_energy_limit_delay(alpha, beta, ka))
    tau_err = abs(tau - lim) / abs(lim)
    applicable = abs(1.0 / math.tan(ka)) > 0.1
    # the transmission limit holds at any k'a; test it across several periods
    grid = np.linspace(0.05, 4 * math.pi, 400)
    T = scattering.transmission(alpha, beta, grid / kp)
    T_lim = delay.low_energy_limit_transmission(c, grid)
    T_err = float(np.max(np.abs(T - T_lim) / T_lim))
    ok = (tau_err <= 1e-3 or not applicable) and T_err <= 1e-4
    return Check("low-energy-asymptotics", ok, f"k'a={ka:.3f} rel err tau={tau_err:.2e}; max rel err T={T_err:.2e}")


def packet_widths(points: int = 21) -> np.ndarray:
    return np.linspace(0.2 * math.pi, 3 * math.pi, points)


def check_packet(points: int = 21) -> list[Check]:
    E0, V, w = ALPHA_REF, BETA_REF, W_REF
    agree_bad, conv_worst, window_worst = [], 0.0, 0.0
    r2_bad, valid_bad = [], []
    L = None
    for x in packet_widths(points):
        a = scattering.width_for_kprime_a(E0, V, x)
        spec = PacketSpec(E0, w, V, a)
        res = propagate_transmitted(spec)
        L = res.characteristic_length
        theory = float(delay.relativistic_delay(E0, V, a))
        if abs(res.numerical_delay - theory) > max(0.05 * abs(theory), 2.0):
            agree_bad.append(f"{x / math.pi:.2f}pi ({res.numerical_delay:.2f} vs {theory:.2f})")
        conv_worst = max(conv_worst, res.convergence_delta)
        wide = propagate_transmitted(spec.replace(energy_window=(1.0 + 1e-12, 2.0)))
        window_worst = max(window_worst, abs(wide.numerical_delay - res.numerical_delay))
        if not res.validity_ok:
            valid_bad.append(f"{x / math.pi:.2f}pi")
        if scattering.transmission(E0, V, a) > 0.5 and not res.distortion >= 0.999:
            r2_bad.append(f"{x / math.pi:.2f}pi R2={res.distortion:.5f}")
    return [
        Check(
            "packet-stationary-phase",
            not agree_bad,
            "all widths within max(5%, 2 tau0)" if not agree_bad else "outside tolerance at " + ", ".join(agree_bad),
        ),
        Check("packet-quadrature-doubling", conv_worst < 0.01, f"max delay change {conv_worst:.2e}"),
        Check("packet-window-widening", window_worst < 0.01, f"max delay change {window_worst:.2e}"),
        Check(
            "packet-validity",
            abs(L - 211.5) <= 0.01 * 211.5 and not valid_bad and not r2_bad,
            f"L={L:.2f}" + (f"; invalid: {valid_bad}" if valid_bad else "") + (f"; R2: {r2_bad}" if r2_bad else ""),
        ),
    ]


def check_relativistic_excess() -> Check:
    alpha, beta = 1.01, 0.2
    grid = np.linspace(0.1, 4 * math.pi, 1000)
    _, kp, _ = scattering.kinematics(alpha, beta)
    _, kn = delay.nonrel_wavenumbers(alpha, beta)
    excess = delay.relativistic_delay(alpha, beta, grid / kp) - delay.nonrelativistic_delay(alpha, beta, grid / kn)
    neg = grid[excess < 0]
    detail = f"min excess {excess.min():.4f}"
    if neg.size:
        detail += f"; {neg.size} points below zero in k'a [{neg.min() / math.pi:.3f}pi, {neg.max() / math.pi:.3f}pi]"
    return Check("relativistic-excess", bool(excess.min() >= 0), detail)


def check_nonrel_agreement() -> Check:
    alpha, beta = 1.0 + 1e-5, 1e-4
    grid = np.linspace(0.1, 4 * math.pi, 1000)
    _, kp, _ = scattering.kinematics(alpha, beta)
    _, kn = delay.nonrel_wavenumbers(alpha, beta)
    rel = delay.relativistic_delay(alpha, beta, grid / kp)
    nr = delay.nonrelativistic_delay(alpha, beta, grid / kn)
    gap = float(np.max(np.abs(rel - nr)) / np.max(np.abs(rel)))
    return Check("nonrel-agreement", gap < 1e-3, f"sup-norm relative gap {gap:.2e}")


def _timed(fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    dt = time.perf_counter() - t0
    out = out if isinstance(out, list) else [out]
    for c in out:
        c.seconds = dt / len(out)
    return out


CHECKS = {
    "threshold": check_threshold,
    "threshold-nonrel-limit": check_threshold_limit,
    "threshold-consistency": check_threshold_consistency,
    "resonance-structure": check_resonance_structure,
    "phase-staircase": check_phase_staircase,
    "derivative-oracle": check_derivative_oracle,
    "low-energy-asymptotics": check_low_energy_limit,
    "relativistic-excess": check_relativistic_excess,
    "nonrel-agreement": check_nonrel_agreement,
    "packet": check_packet,
}


def run_checks(skip=(), quick: bool = False) -> list[Check]:
    """Run every registered check except those named in ``skip``.

    ``quick`` drops the wave-packet group, which dominates the runtime.
    """
    skip = set(skip)
    if quick:
        skip.add("packet")
    results = []
    for name, fn in CHECKS.items():
        if name in skip:
            continue
        results.extend(_timed(fn))
    return results
