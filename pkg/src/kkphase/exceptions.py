"""Exception hierarchy.

Every error raised deliberately by the package derives from
:class:`KKPhaseError`, which itself is a :class:`ValueError` so callers that
only care about "bad input" can keep catching that.
"""


class KKPhaseError(ValueError):
    """Base class for all package errors."""


class InvalidRangeError(KKPhaseError):
    """Interval bounds or counts do not describe a valid grid or domain."""


class UnsortedPointsError(KKPhaseError):
    pass


class CoverageError(KKPhaseError):
    """Sample points do not span the requested output grid."""


class GridMismatchError(KKPhaseError):
    pass


class NonFiniteValueError(KKPhaseError):
    """A function returned NaN or infinity where finite values are required."""


class TransmissionRangeError(KKPhaseError):
    """A transmittivity lies outside (0, 1]."""


class ZeroFrequencyError(KKPhaseError):
    pass


class ResourceSplitError(KKPhaseError):
    """The resource budget cannot give every sampled point at least one event."""


class ConfigError(KKPhaseError):
    """A configuration file or object is malformed."""


class SweepError(KKPhaseError):
    """A run inside a sweep failed; ``cell`` is ``(n_tot, n_s, run_seed)``."""

    def __init__(self, message, cell=None):
        super().__init__(message)
        self.cell = cell
