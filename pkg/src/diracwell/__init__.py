"""Transmission, phase shift and group delay of Dirac particles crossing a
one-dimensional square potential well, with a Gaussian wave-packet check of
the stationary-phase delay.

Units are natural (mu = c = hbar = 1): energies in mu c^2, lengths in
hbar/(mu c), times in tau0 = hbar/(mu c^2).
"""
from .delay import (
    DelayReport,
    delay_report,
    group_delay_nonrel,
    group_delay_rel,
    low_energy_limit_delay,
    negativity_condition,
    resonance_delay,
    resonance_slope,
    threshold_energy,
    threshold_energy_bisection,
)
from .errors import (
    ClippingError,
    ConfigError,
    ConvergenceError,
    DiracWellError,
    DomainError,
    NotAtResonanceError,
)
from .scattering import (
    ScatteringState,
    WellScenario,
    chi,
    transmission_amplitude,
    transmission_probability,
    wavenumbers,
)
from .wavepacket import (
    PacketResult,
    PacketSpec,
    numerical_group_delay,
    propagate_transmitted,
    spectral_amplitude,
    validity_check,
)

__version__ = "0.1.0"
