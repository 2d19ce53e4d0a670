"""Quantum-limited transmission variances and their phase/absorption equivalents."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Union

import numpy as np

from .exceptions import InvalidRangeError, TransmissionRangeError
from .optics import MediumGeometry

__all__ = [
    "FockProbe",
    "CoherentProbe",
    "DetectorAdjustedFock",
    "ProbeModel",
    "with_resources",
    "transmission_variance",
    "equivalent_phase_variance",
    "lossy_phase_bound",
    "equivalent_phase_variance_detector",
    "equivalent_phase_variance_coherent",
    "absorption_point_variance",
]


def _check_eta(eta, allow_zero=False):
    eta = np.asarray(eta, dtype=float)
    lo_ok = eta >= 0 if allow_zero else eta > 0
    if not np.all(lo_ok & (eta <= 1)):
        raise TransmissionRangeError("transmittivity must lie in (0, 1]")
    return eta


def _check_resources(n):
    if not n >= 1:
        raise InvalidRangeError(f"resource count must be >= 1, got {n}")


@dataclass(frozen=True)
class FockProbe:
    """``repetitions_M`` uses of a ``photons_p``-photon Fock state."""

    photons_p: float = 1
    repetitions_M: float = 1

    def __post_init__(self):
        _check_resources(self.photons_p)
        _check_resources(self.repetitions_M)

    @property
    def N(self) -> float:
        return self.photons_p * self.repetitions_M


@dataclass(frozen=True)
class CoherentProbe:
    mean_photons_beta2: float = 1.0

    def __post_init__(self):
        if not self.mean_photons_beta2 > 0:
            raise InvalidRangeError("beta^2 must be positive")


@dataclass(frozen=True)
class DetectorAdjustedFock:
    """Fock probing behind a pre-calibrated detection efficiency ``T(omega)``.

    ``efficiency_T`` is either a constant or a vectorised callable of omega.
    """

    N: float = 1
    efficiency_T: Union[float, Callable] = 1.0

    def __post_init__(self):
        _check_resources(self.N)
        if not callable(self.efficiency_T) and not 0 < self.efficiency_T <= 1:
            raise InvalidRangeError("efficiency must lie in (0, 1]")

    def efficiency(self, omega):
        if callable(self.efficiency_T):
            t = np.asarray(self.efficiency_T(omega), dtype=float)
            if not np.all((t > 0) & (t <= 1)):
                raise InvalidRangeError("efficiency must lie in (0, 1]")
            return t
        return self.efficiency_T


ProbeModel = Union[FockProbe, CoherentProbe, DetectorAdjustedFock]


def with_resources(probe: ProbeModel, n) -> ProbeModel:
    """Same probe family, spending ``n`` photons (on average) per frequency.

    Fock probes are rebuilt as single photons repeated ``n`` times.
    """
    if isinstance(probe, FockProbe):
        return FockProbe(1, n)
    if isinstance(probe, CoherentProbe):
        return CoherentProbe(n)
    if isinstance(probe, DetectorAdjustedFock):
        return replace(probe, N=n)
    raise TypeError(f"unknown probe {probe!r}")


def transmission_variance(model: ProbeModel, eta, omega=None, printed_form: bool = False):
    """Optimal variance of a transmission estimate.

    Fock: ``eta (1 - eta) / N``; coherent: ``eta / beta^2``; detector-adjusted
    Fock: ``eta (1 - eta T) / (T N)``.  Passing ``printed_form=True`` returns
    ``(1 - eta T) T / (eta N)`` instead for the detector case, which is the
    expression as printed in the source text; it is kept only for comparison
    since it is not consistent with the equivalent-phase result.
    """
    eta = _check_eta(eta)
    if isinstance(model, FockProbe):
        return eta * (1 - eta) / model.N
    if isinstance(model, CoherentProbe):
        return eta / model.mean_photons_beta2
    if isinstance(model, DetectorAdjustedFock):
        t = model.efficiency(omega)
        if printed_form:
            return (1 - eta * t) * t / (eta * model.N)
        return eta * (1 - eta * t) / (t * model.N)
    raise TypeError(f"unknown probe {model!r}")


def equivalent_phase_variance(delta_eta_sq, eta):
    """Phase variance implied through the KK relations: ``d_eta^2 / (4 eta^2)``."""
    eta = _check_eta(eta)
    delta_eta_sq = np.asarray(delta_eta_sq, dtype=float)
    if np.any(delta_eta_sq < 0):
        raise InvalidRangeError("variance must be non-negative")
    return delta_eta_sq / (4 * eta * eta)


def lossy_phase_bound(eta, N):
    """Asymptotic quantum limit ``(1 - eta) / (4 eta N)`` for phase through loss."""
    eta = _check_eta(eta)
    _check_resources(N)
    return (1 - eta) / (4 * eta * N)


def equivalent_phase_variance_detector(eta, T, N):
    eta = _check_eta(eta)
    T = _check_eta(T)
    _check_resources(N)
    return (1 - eta * T) / (4 * eta * T * N)


def equivalent_phase_variance_coherent(eta, beta2):
    eta = _check_eta(eta)
    if not beta2 > 0:
        raise InvalidRangeError("beta^2 must be positive")
    return 1 / (4 * eta * beta2)


def absorption_point_variance(eta, geom: MediumGeometry = MediumGeometry(), N=1):
    """Per-frequency variance of the absorption coefficient, ``(1 - eta) / (l^2 eta N)``."""
    eta = _check_eta(eta)
    _check_resources(N)
    return (1 - eta) / (geom.length_l**2 * eta * N)
