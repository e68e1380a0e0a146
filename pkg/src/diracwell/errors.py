"""Exception types shared across the toolkit."""


class DiracWellError(Exception):
    """Base class for all toolkit errors."""


class DomainError(DiracWellError, ValueError):
    """Physical parameters outside the model's validity region."""


class NotAtResonanceError(DomainError):
    """A resonance-only formula was evaluated away from k'a = m*pi."""


class ConvergenceError(DiracWellError, RuntimeError):
    """Spectral quadrature failed the node-doubling test at the node ceiling."""


class ClippingError(DiracWellError, RuntimeError):
    """The transmitted intensity maximum sits on a time-grid endpoint."""


class ConfigError(DiracWellError, ValueError):
    """Bad sweep configuration. ``field`` names the offending setting."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field
