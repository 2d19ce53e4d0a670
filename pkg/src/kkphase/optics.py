"""Gaussian absorption line, its transmission and Dawson phase, and the
Kramers-Kronig conversions between measurable profiles.

In measurable form the relations read ``phi = H[log sqrt(eta)]`` and
``log sqrt(eta) = -H[phi]``, with ``H`` as defined in :mod:`kkphase.hilbert`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import dawsn

from .exceptions import InvalidRangeError, TransmissionRangeError, ZeroFrequencyError
from .hilbert import HilbertConfig, hilbert_zhou
from .spectral import FrequencyGrid, SampledFunction

__all__ = [
    "AbsorptionModel",
    "MediumGeometry",
    "ComplexIndexPoint",
    "REFERENCE_MODEL",
    "PHASE_SIGN",
    "absorption_profile",
    "transmission_profile",
    "dawson",
    "phase_profile_exact",
    "kkr_phase_from_transmission",
    "kkr_absorption_from_phase",
    "complex_index_from_measurables",
]

# H[exp(-t^2)] = +(2/sqrt(pi)) D, and log sqrt(eta) is minus a Gaussian, so the
# Dawson phase enters with a minus sign.  Checked against the PV oracle in tests.
PHASE_SIGN = -1.0


@dataclass(frozen=True)
class AbsorptionModel:
    """Gaussian line ``alpha(w) l = alpha0_l * exp(-(w - omega0)**2 / (2 sigma**2))``."""

    alpha0_l: float = 1.0
    omega0: float = 0.5
    sigma: float = 0.1

    def __post_init__(self):
        if not self.alpha0_l >= 0:
            raise InvalidRangeError("alpha0_l must be non-negative")
        if not self.sigma > 0:
            raise InvalidRangeError("sigma must be positive")


REFERENCE_MODEL = AbsorptionModel(1.0, 0.5, 0.1)


@dataclass(frozen=True)
class MediumGeometry:
    length_l: float = 1.0
    speed_c: float = 1.0

    def __post_init__(self):
        if not (self.length_l > 0 and self.speed_c > 0):
            raise InvalidRangeError("length_l and speed_c must be positive")


@dataclass(frozen=True)
class ComplexIndexPoint:
    n: float
    kappa: float

    def __post_init__(self):
        if not (np.isfinite(self.n) and np.isfinite(self.kappa)):
            raise InvalidRangeError("complex index components must be finite")


def absorption_profile(omega, model: AbsorptionModel):
    """Optical depth ``alpha(omega) * l``."""
    omega = np.asarray(omega, dtype=float)
    return model.alpha0_l * np.exp(-((omega - model.omega0) ** 2) / (2 * model.sigma**2))


def transmission_profile(omega, model: AbsorptionModel):
    return np.exp(-absorption_profile(omega, model))


def dawson(x):
    """Dawson integral ``exp(-x**2) * int_0^x exp(t**2) dt`` (Cephes via scipy)."""
    return dawsn(x)


def phase_profile_exact(omega, model: AbsorptionModel):
    """Infinite-line phase of the Gaussian line, in radians."""
    omega = np.asarray(omega, dtype=float)
    arg = (omega - model.omega0) / (np.sqrt(2.0) * model.sigma)
    return PHASE_SIGN * model.alpha0_l / np.sqrt(np.pi) * dawsn(arg)


def kkr_phase_from_transmission(
    eta: SampledFunction,
    config: HilbertConfig | None = None,
    out_grid: FrequencyGrid | None = None,
) -> SampledFunction:
    """Phase ``H[log sqrt(eta)]`` from a sampled transmission profile.

    ``log sqrt(eta)`` is formed on the nodes and extended between them by
    linear interpolation (edge values held outside the grid).  By default the
    kernel domain is the grid interval at ``j = 17`` and the phase is returned
    on the same grid.
    """
    values = eta.values
    if np.any(values <= 0) or np.any(values > 1):
        raise TransmissionRangeError("transmission values must lie in (0, 1]")
    config = HilbertConfig.for_grid(eta.grid) if config is None else config
    out_grid = eta.grid if out_grid is None else out_grid
    half_log = SampledFunction(eta.grid, 0.5 * np.log(values))
    return hilbert_zhou(half_log, config, out_grid)


def kkr_absorption_from_phase(
    phi: SampledFunction,
    config: HilbertConfig | None = None,
    geom: MediumGeometry = MediumGeometry(),
    out_grid: FrequencyGrid | None = None,
) -> SampledFunction:
    """Absorption coefficient ``alpha = (2 / l) H[phi]``, from ``-log eta = 2 H[phi]``."""
    config = HilbertConfig.for_grid(phi.grid) if config is None else config
    out_grid = phi.grid if out_grid is None else out_grid
    h = hilbert_zhou(phi, config, out_grid)
    return SampledFunction(out_grid, (2.0 / geom.length_l) * h.values)


def complex_index_from_measurables(phi, alpha, omega, geom: MediumGeometry = MediumGeometry()) -> ComplexIndexPoint:
    """Convert phase and absorption coefficient at ``omega`` into ``n + i kappa``."""
    if omega == 0:
        raise ZeroFrequencyError("conversion is singular at omega = 0")
    n = 1.0 + phi * geom.speed_c / (omega * geom.length_l)
    kappa = alpha * geom.speed_c / (2.0 * omega)
    return ComplexIndexPoint(float(n), float(kappa))
