"""Time-domain check of the stationary-phase delay with a Gaussian packet.

The incident packet at z = 0 is a Gaussian in time of width ``w`` carrying
the central-energy spinor.  Its spectrum ``A(E) = w exp(-w^2 (E-E0)^2 / 2)``
is multiplied by the transmission coefficient ``F(E)`` and resynthesised at
``z = a``; the arrival time of the intensity peak is the numerical group
delay.  The energy integral is cut below at the rest energy and evaluated
with composite Gauss-Legendre quadrature.
"""
from __future__ import annotations

import logging
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.optimize import OptimizeWarning, curve_fit

from .errors import ClippingError, ConvergenceError, DomainError
from .scattering import amplitude, kinematics

logger = logging.getLogger(__name__)

ENERGY_FLOOR = 1.0 + 1e-12
WINDOW_SIGMAS = 6.0
DEFAULT_NODES = 4096
MAX_NODES = 65536
PANEL_ORDER = 32
DELAY_TOL = 0.01
TRACE_TOL = 1e-6
_TIME_CHUNK = 256


@dataclass(frozen=True)
class PacketSpec:
    """Gaussian packet parameters and numerical settings (natural units).

    ``energy_window`` and ``time_grid`` default to the rest-energy floor up
    to six spectral sigmas above ``E0``, and ``[-6w, 6w + a + 50]`` sampled
    every ``w/200``.
    """

    central_energy: float
    temporal_width: float
    well_depth: float
    well_width: float
    energy_window: tuple[float, float] | None = None
    quadrature_nodes: int = DEFAULT_NODES
    time_grid: tuple[float, float, float] | None = None

    def __post_init__(self):
        E0, w = self.central_energy, self.temporal_width
        if not E0 > 1.0:
            raise DomainError(f"central_energy must exceed 1, got {E0!r}")
        if not w > 0.0:
            raise DomainError(f"temporal_width must be > 0, got {w!r}")
        if self.well_depth < 0.0 or self.well_width < 0.0:
            raise DomainError("well depth and width must be non-negative")
        if self.quadrature_nodes < PANEL_ORDER:
            raise DomainError(f"quadrature_nodes must be >= {PANEL_ORDER}")
        if self.energy_window is None:
            object.__setattr__(self, "energy_window", (ENERGY_FLOOR, E0 + WINDOW_SIGMAS / w))
        else:
            object.__setattr__(self, "energy_window", tuple(float(v) for v in self.energy_window))
        lo, hi = self.energy_window
        if lo < 1.0 or hi <= E0:
            raise DomainError(f"energy_window {self.energy_window} must satisfy 1 <= E_min, E_max > E0")
        # Six sigmas either side, except that nothing below the rest energy exists.
        need_lo = max(E0 - WINDOW_SIGMAS / w, ENERGY_FLOOR)
        need_hi = E0 + WINDOW_SIGMAS / w
        slack = 1e-12 * hi
        if lo > need_lo + slack or hi < need_hi - slack:
            raise DomainError(
                f"energy_window {self.energy_window} does not cover E0 +/- {WINDOW_SIGMAS:g}/w"
            )
        if self.time_grid is None:
            object.__setattr__(
                self, "time_grid", (-6.0 * w, 6.0 * w + self.well_width + 50.0, w / 200.0)
            )
        else:
            object.__setattr__(self, "time_grid", tuple(float(v) for v in self.time_grid))
        start, stop, step = self.time_grid
        if not (step > 0.0 and stop > start + 2 * step):
            raise DomainError(f"time_grid {self.time_grid} needs step > 0 and at least three samples")

    @property
    def spectral_width(self) -> float:
        """Energy spread hbar/(2w)."""
        return 0.5 / self.temporal_width

    @property
    def central_k(self) -> float:
        return math.sqrt(self.central_energy ** 2 - 1.0)

    @property
    def spinor_norm(self) -> float:
        """Squared norm of the central-energy spinor (1, 0, k0/(E0+1), 0)."""
        lower = self.central_k / (self.central_energy + 1.0)
        return 1.0 + lower * lower

    def times(self) -> np.ndarray:
        start, stop, step = self.time_grid
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        return start + step * np.arange(n)

    def replace(self, **changes) -> "PacketSpec":
        fields = dict(
            central_energy=self.central_energy,
            temporal_width=self.temporal_width,
            well_depth=self.well_depth,
            well_width=self.well_width,
            energy_window=self.energy_window,
            quadrature_nodes=self.quadrature_nodes,
            time_grid=self.time_grid,
        )
        fields.update(changes)
        return PacketSpec(**fields)


@dataclass
class PacketResult:
    times: np.ndarray
    intensity: np.ndarray
    numerical_delay: float
    transmitted_fraction: float
    distortion: float
    characteristic_length: float
    validity_ok: bool
    quadrature_nodes: int
    convergence_delta: float
    trace_change: float
    spec: PacketSpec = field(repr=False)

    @property
    def intensity_trace(self) -> np.ndarray:
        """(t, |Psi_tr(a, t)|^2) samples as a two-column array."""
        return np.column_stack([self.times, self.intensity])


def spectral_amplitude(energy, spec: PacketSpec):
    w = spec.temporal_width
    d = np.asarray(energy, dtype=float) - spec.central_energy
    return w * np.exp(-0.5 * (w * d) ** 2)


@lru_cache(maxsize=32)
def _legendre_panels(lo: float, hi: float, nodes: int):
    x, wts = np.polynomial.legendre.leggauss(PANEL_ORDER)
    panels = max(1, nodes // PANEL_ORDER)
    edges = np.linspace(lo, hi, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    E = (mid[:, None] + half[:, None] * x).ravel()
    W = (half[:, None] * wts).ravel()
    E.setflags(write=False)
    W.setflags(write=False)
    return E, W


def quadrature_rule(spec: PacketSpec, nodes: int | None = None):
    """Composite Gauss-Legendre nodes and weights over the energy window."""
    lo, hi = spec.energy_window
    return _legendre_panels(float(max(lo, ENERGY_FLOOR)), float(hi), int(nodes or spec.quadrature_nodes))


def _weights(spec, nodes):
    E, W = quadrature_rule(spec, nodes)
    g = amplitude(E, spec.well_depth, spec.well_width) * spectral_amplitude(E, spec) * W
    return E, g / math.sqrt(2.0 * math.pi)


def _envelope(E, g, E0, times):
    # sum_j g_j exp(-i (E_j - E0) t); the carrier exp(-i E0 t) is applied by the caller
    d = E - E0
    return np.exp(-1j * np.outer(times, d)) @ g


def transmitted_field(spec: PacketSpec, times=None, nodes: int | None = None, workers: int = 1):
    """Scalar part of Psi_tr(a, t); multiply by the central spinor for the full field."""
    t = spec.times() if times is None else np.asarray(times, dtype=float)
    E, g = _weights(spec, nodes)
    chunks = [t[i:i + _TIME_CHUNK] for i in range(0, len(t), _TIME_CHUNK)]
    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda c: _envelope(E, g, spec.central_energy, c), chunks))
    else:
        parts = [_envelope(E, g, spec.central_energy, c) for c in chunks]
    env = np.concatenate(parts) if parts else np.zeros(0, dtype=complex)
    return env * np.exp(-1j * spec.central_energy * t)


def transmitted_intensity(spec: PacketSpec, times=None, nodes: int | None = None, workers: int = 1):
    """|Psi_tr(a, t)|^2 summed over the four spinor components."""
    psi = transmitted_field(spec, times, nodes, workers)
    return spec.spinor_norm * (psi.real ** 2 + psi.imag ** 2)


def incident_intensity(spec: PacketSpec, times=None):
    t = spec.times() if times is None else np.asarray(times, dtype=float)
    return spec.spinor_norm * np.exp(-(t / spec.temporal_width) ** 2)


def peak_time(times, intensity) -> float:
    """Grid argmax refined by a parabola through the log-intensity samples."""
    times = np.asarray(times, dtype=float)
    intensity = np.asarray(intensity, dtype=float)
    i = int(np.argmax(intensity))
    if i == 0 or i == len(intensity) - 1:
        raise ClippingError(f"intensity maximum at time-grid endpoint t = {times[i]:g}")
    y = intensity[i - 1:i + 2]
    if np.all(y > 0.0):
        y = np.log(y)
    curv = y[0] - 2.0 * y[1] + y[2]
    shift = 0.0 if curv == 0.0 else 0.5 * (y[0] - y[2]) / curv
    return float(times[i] + shift * (times[i + 1] - times[i]))


def numerical_group_delay(result) -> float:
    """Numerical group delay from a PacketResult (or any object with times/intensity)."""
    return peak_time(result.times, result.intensity)


def transmitted_fraction(spec: PacketSpec, nodes: int | None = None) -> float:
    """Transmitted over incident probability, via Parseval on the energy grid."""
    E, W = quadrature_rule(spec, nodes)
    A = spectral_amplitude(E, spec)
    F = amplitude(E, spec.well_depth, spec.well_width)
    num = np.sum(W * (F.real ** 2 + F.imag ** 2) * A * A)
    # the incident packet is built from the same clipped spectrum, so its
    # norm is the window sum, not w sqrt(pi); the spinor norm cancels
    return float(num / np.sum(W * A * A))


def _gaussian(t, amp, centre, sigma):
    return amp * np.exp(-0.5 * ((t - centre) / sigma) ** 2)


def gaussian_fit_r2(times, intensity) -> float:
    """Coefficient of determination of a least-squares Gaussian fit."""
    t = np.asarray(times, dtype=float)
    y = np.asarray(intensity, dtype=float)
    i = int(np.argmax(y))
    total = y.sum()
    centre = float(np.sum(t * y) / total) if total > 0 else float(t[i])
    sigma = float(np.sqrt(max(np.sum((t - centre) ** 2 * y) / total, (t[1] - t[0]) ** 2))) if total > 0 else 1.0
    try:
        with warnings.catch_warnings():
            # only the fitted curve is used, not its covariance
            warnings.simplefilter("ignore", OptimizeWarning)
            popt, _ = curve_fit(_gaussian, t, y, p0=(y[i], t[i], sigma), maxfev=10000)
    except RuntimeError:
        return float("nan")
    resid = y - _gaussian(t, *popt)
    ss_tot = np.sum((y - y.mean()) ** 2)
    return float(1.0 - np.sum(resid ** 2) / ss_tot) if ss_tot > 0 else 1.0


def validity_check(spec: PacketSpec, margin: float = 10.0) -> tuple[float, bool]:
    """Characteristic length L = w dE/dk' and whether a << 2 pi L.

    ``margin`` is the factor by which ``a`` must undercut ``2 pi L``.
    """
    _, kp, _ = kinematics(spec.central_energy, spec.well_depth)
    L = spec.temporal_width * float(kp) / (spec.central_energy + spec.well_depth)
    return L, bool(spec.well_width < 2.0 * math.pi * L / margin)


def propagate_transmitted(
    spec: PacketSpec,
    max_nodes: int = MAX_NODES,
    workers: int = 1,
) -> PacketResult:
    """Synthesise the transmitted packet and extract its arrival time.

    Doubles the node count until the delay moves by less than 0.01 and the
    trace by less than 1e-6 (relative, sup norm); raises ConvergenceError
    if ``max_nodes`` is reached first.
    """
    t = spec.times()
    nodes = spec.quadrature_nodes
    intensity = transmitted_intensity(spec, t, nodes, workers)
    delay = peak_time(t, intensity)
    while True:
        if 2 * nodes > max_nodes:
            raise ConvergenceError(
                f"quadrature not converged at {nodes} nodes (ceiling {max_nodes}) for {spec!r}"
            )
        finer = transmitted_intensity(spec, t, 2 * nodes, workers)
        finer_delay = peak_time(t, finer)
        delta = abs(finer_delay - delay)
        change = float(np.max(np.abs(finer - intensity)) / np.max(np.abs(finer)))
        if delta < DELAY_TOL and change < TRACE_TOL:
            break
        logger.debug("nodes %d -> %d: delay moved %.3g, trace %.3g", nodes, 2 * nodes, delta, change)
        nodes *= 2
        intensity, delay = finer, finer_delay
    L, ok = validity_check(spec)
    return PacketResult(
        times=t,
        intensity=intensity,
        numerical_delay=delay,
        transmitted_fraction=transmitted_fraction(spec, nodes),
        distortion=gaussian_fit_r2(t, intensity),
        characteristic_length=L,
        validity_ok=ok,
        quadrature_nodes=nodes,
        convergence_delta=delta,
        trace_change=change,
        spec=spec,
    )
