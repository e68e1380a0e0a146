"""Parameter sweeps behind the command-line modes.

Every sweep returns a :class:`Table` whose column names are the CSV header.
Width grids are given in k'a and converted to widths per scenario.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import delay, scattering
from .config import SweepConfig
from .errors import DiracWellError
from .wavepacket import PacketSpec, propagate_transmitted

logger = logging.getLogger(__name__)

WIDTH_COLUMNS = ("k_prime_a", "a", "T", "phi", "tau_rel", "tau_nonrel", "is_resonant")
ENERGY_COLUMNS = ("alpha", "k_prime_a", "T", "tau_rel", "asymptotic_tau")
PACKET_COLUMNS = (
    "k_prime_a", "tau_theory", "tau_numeric", "transmitted_fraction",
    "distortion", "validity_ok", "status",
)
TRACE_COLUMNS = ("t", "intensity")
COMPARE_COLUMNS = ("k_prime_a", "tau_rel", "tau_nonrel", "excess")
THRESHOLD_COLUMNS = ("beta", "E_t_closed_form", "E_t_bisection", "branch", "abs_diff")


@dataclass
class Table:
    kind: str
    columns: tuple[str, ...]
    rows: list[tuple]
    summary: dict = field(default_factory=dict)
    traces: dict[str, "Table"] = field(default_factory=dict)

    def column(self, name: str) -> np.ndarray:
        j = self.columns.index(name)
        return np.array([r[j] for r in self.rows])

    def __len__(self):
        return len(self.rows)


def linear_grid(start: float, stop: float, points: int) -> np.ndarray:
    return np.linspace(start, stop, points)


def _with_resonances(grid: np.ndarray) -> np.ndarray:
    lo, hi = grid[0], grid[-1]
    m = np.arange(max(1, math.ceil(lo / math.pi)), math.floor(hi / math.pi) + 1)
    res = m * math.pi
    res = res[(res >= lo) & (res <= hi)]
    return np.unique(np.concatenate([grid, res]))


def run_width_sweep(config: SweepConfig) -> Table:
    """Transmission, phase and both delays across a k'a grid.

    Exact resonance points k'a = m*pi inside the range are merged into the
    grid so that resonance rows are always present and flagged.
    """
    E, V = config.alpha, config.beta
    grid = linear_grid(config.width_min, config.width_max, config.points)
    if V > 0.0:
        grid = _with_resonances(grid)
    widths = scattering.width_for_kprime_a(E, V, grid)
    widths = np.atleast_1d(widths)
    T = scattering.transmission(E, V, widths)
    phi = scattering.phase_shift(E, V, widths)
    tau = delay.relativistic_delay(E, V, widths)
    tau_nr = delay.nonrelativistic_delay(E, V, widths)
    resonant = [
        V > 0.0 and x > 0.0 and abs(math.sin(x)) < delay.RESONANCE_TOL * max(1.0, x)
        for x in grid
    ]
    rows = [
        (float(x), float(a), float(t), float(p), float(tr), float(tn), bool(r))
        for x, a, t, p, tr, tn, r in zip(grid, widths, T, phi, tau, tau_nr, resonant)
    ]
    return Table(config.mode, WIDTH_COLUMNS, rows)


def run_energy_sweep(config: SweepConfig) -> Table:
    """Delay versus incident energy at fixed depth and width a = 1/gamma."""
    V = config.beta
    a = 1.0 / config.gamma
    alphas = linear_grid(config.alpha_min, config.alpha_max, config.points)
    _, kp, c = scattering.kinematics(alphas, V)
    ka = kp * a
    T = scattering.transmission(alphas, V, a)
    tau = delay.relativistic_delay(alphas, V, a)
    asym = delay.low_energy_limit_delay(alphas, V, ka) if V > 0.0 else np.full_like(alphas, np.nan)
    rows = [tuple(float(v) for v in r) for r in zip(alphas, ka, T, tau, asym)]
    return Table(config.mode, ENERGY_COLUMNS, rows)


def run_compare_nonrel(config: SweepConfig) -> Table:
    """Relativistic and Schroedinger delays, each at the width matching its own k'a."""
    E, V = config.alpha, config.beta
    grid = linear_grid(config.width_min, config.width_max, config.points)
    _, kp_rel, _ = scattering.kinematics(E, V)
    _, kp_nr = delay.nonrel_wavenumbers(E, V)
    tau = delay.relativistic_delay(E, V, grid / kp_rel)
    tau_nr = delay.nonrelativistic_delay(E, V, grid / kp_nr)
    rows = [
        (float(x), float(r), float(n), float(r - n)) for x, r, n in zip(grid, tau, tau_nr)
    ]
    excess = np.asarray(tau) - np.asarray(tau_nr)
    summary = {
        "min_excess": float(excess.min()),
        "relative_gap": float(np.max(np.abs(excess)) / np.max(np.abs(tau))),
    }
    return Table(config.mode, COMPARE_COLUMNS, rows, summary=summary)


def run_threshold_table(config: SweepConfig) -> Table:
    rows = []
    for beta in linear_grid(config.beta_min, config.beta_max, config.points):
        closed = delay.threshold_energy(beta)
        bis = delay.threshold_energy_bisection(beta)
        rows.append((float(beta), closed, bis, delay.threshold_branch(beta), abs(closed - bis)))
    summary = {"max_abs_diff": max(r[4] for r in rows)}
    return Table(config.mode, THRESHOLD_COLUMNS, rows, summary=summary)


def packet_spec_for(config: SweepConfig, kprime_a: float) -> PacketSpec:
    E0, V, w = config.alpha, config.beta, config.w
    a = scattering.width_for_kprime_a(E0, V, kprime_a)
    window = None
    if config.window_max is not None:
        window = (1.0 + 1e-12, config.window_max)
    return PacketSpec(E0, w, V, a, energy_window=window, quadrature_nodes=config.nodes)


def _packet_row(config, x):
    spec = packet_spec_for(config, x)
    theory = delay.relativistic_delay(spec.central_energy, spec.well_depth, spec.well_width)
    try:
        res = propagate_transmitted(spec)
    except DiracWellError as exc:
        logger.warning("packet row k'a=%g failed: %s", x, exc)
        nan = float("nan")
        return (float(x), float(theory), nan, nan, nan, False, type(exc).__name__), None
    row = (
        float(x), float(theory), res.numerical_delay, res.transmitted_fraction,
        res.distortion, res.validity_ok, "ok",
    )
    trace = Table("trace", TRACE_COLUMNS, [(float(t), float(i)) for t, i in zip(res.times, res.intensity)])
    return row, trace


def run_packet(config: SweepConfig) -> Table:
    """Numerical versus stationary-phase delay across a k'a grid.

    Rows are computed independently (optionally in parallel) and written
    in grid order; a row that fails to converge is kept with its status.
    """
    grid = linear_grid(config.width_min, config.width_max, config.points)
    if config.jobs > 1:
        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            out = list(pool.map(lambda x: _packet_row(config, x), grid))
    else:
        out = [_packet_row(config, x) for x in grid]
    rows = [r for r, _ in out]
    traces = {f"trace_{i:04d}": tr for i, (_, tr) in enumerate(out) if tr is not None}
    diffs = [abs(r[2] - r[1]) for r in rows if r[6] == "ok"]
    summary = {
        "max_abs_delay_diff": max(diffs) if diffs else float("nan"),
        "failed_rows": sum(1 for r in rows if r[6] != "ok"),
    }
    return Table(config.mode, PACKET_COLUMNS, rows, summary=summary, traces=traces)


RUNNERS = {
    "width-sweep": run_width_sweep,
    "phase-sweep": run_width_sweep,
    "energy-sweep": run_energy_sweep,
    "packet": run_packet,
    "compare-nonrel": run_compare_nonrel,
    "threshold-table": run_threshold_table,
}


def run(config: SweepConfig) -> Table:
    return RUNNERS[config.mode](config)
