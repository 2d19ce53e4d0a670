"""One simulated function-estimation run.

Noisy transmission estimates are drawn at ``n_s`` equally spaced frequencies
(ends included), joined by linear interpolation on an ``n_ref``-node
reference grid, and turned into a phase estimate through the KK relations.
Errors are integrated squared deviations from the exact profiles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .exceptions import InvalidRangeError, ResourceSplitError
from .hilbert import HilbertConfig
from .noise import (
    FockProbe,
    ProbeModel,
    equivalent_phase_variance,
    transmission_variance,
    with_resources,
)
from .optics import (
    REFERENCE_MODEL,
    AbsorptionModel,
    MediumGeometry,
    absorption_profile,
    kkr_phase_from_transmission,
    phase_profile_exact,
    transmission_profile,
)
from .spectral import (
    FrequencyGrid,
    MeasurementPoint,
    SampledFunction,
    integrate,
    integrated_squared_difference,
    linear_interpolate,
    make_uniform_grid,
)

__all__ = [
    "EstimationConfig",
    "RunResult",
    "make_rng",
    "simulate_transmission_measurements",
    "estimate_profiles",
    "error_functional",
    "bound_error_integral",
    "run_estimation",
]


@dataclass(frozen=True)
class EstimationConfig:
    """Resource split and numerical settings of one run.

    ``n_tot`` may be ``math.inf`` to model the noiseless limit.
    """

    model: AbsorptionModel = REFERENCE_MODEL
    probe: ProbeModel = field(default_factory=FockProbe)
    interval: tuple = (0.0, 1.0)
    n_tot: float = 100_000
    n_s: int = 50
    n_ref: int = 10_000
    j: int = 17
    clamp_epsilon: float = 1e-6
    geometry: MediumGeometry = MediumGeometry()

    def __post_init__(self):
        object.__setattr__(self, "interval", tuple(float(v) for v in self.interval))
        if len(self.interval) != 2 or not self.interval[0] < self.interval[1]:
            raise InvalidRangeError(f"bad interval {self.interval}")
        if int(self.n_s) != self.n_s or self.n_s < 2:
            raise InvalidRangeError("n_s must be an integer >= 2")
        if int(self.n_ref) != self.n_ref or self.n_ref < self.n_s:
            raise InvalidRangeError("n_ref must be an integer >= n_s")
        if not (math.isinf(self.n_tot) or int(self.n_tot) == self.n_tot):
            raise InvalidRangeError("n_tot must be an integer or inf")
        if self.n_s > self.n_tot:
            raise ResourceSplitError(f"n_s={self.n_s} exceeds n_tot={self.n_tot}")
        if not 0 < self.clamp_epsilon < 0.5:
            raise InvalidRangeError("clamp_epsilon must lie in (0, 0.5)")
        object.__setattr__(self, "n_s", int(self.n_s))
        object.__setattr__(self, "n_ref", int(self.n_ref))
        if not math.isinf(self.n_tot):
            object.__setattr__(self, "n_tot", int(self.n_tot))
        # validates j against the interval
        self.hilbert_config

    @property
    def n_ev(self):
        """Events per sampled point, ``floor(n_tot / n_s)``."""
        if math.isinf(self.n_tot):
            return math.inf
        return self.n_tot // self.n_s

    @property
    def leftover(self) -> int:
        if math.isinf(self.n_tot):
            return 0
        return self.n_tot - self.n_ev * self.n_s

    @property
    def sample_grid(self) -> FrequencyGrid:
        return make_uniform_grid(*self.interval, self.n_s)

    @property
    def reference_grid(self) -> FrequencyGrid:
        return make_uniform_grid(*self.interval, self.n_ref)

    @property
    def hilbert_config(self) -> HilbertConfig:
        return HilbertConfig(self.j, *self.interval)

    def probe_per_point(self) -> ProbeModel:
        return with_resources(self.probe, self.n_ev)


@dataclass(frozen=True)
class RunResult:
    delta2_eta: float
    delta2_phi_kkr: float
    delta2_phi_bound: float
    delta2_alpha_kkr: float
    seed: int
    clamp_events: int = 0
    n_ev: float = 0
    leftover: int = 0


def make_rng(seed: int) -> np.random.Generator:
    """The package's only random source: PCG64 seeded with an unsigned 64-bit integer."""
    return np.random.Generator(np.random.PCG64(int(seed)))


def simulate_transmission_measurements(config: EstimationConfig, rng: np.random.Generator) -> list[MeasurementPoint]:
    """Draw ``n_s`` unbiased Gaussian transmission estimates.

    Each value is ``Normal(eta_i, var_i)`` with ``var_i`` the probe's optimal
    variance at ``n_ev`` resources, then clamped into ``[clamp_epsilon, 1]``.
    """
    if config.n_ev < 1:
        raise ResourceSplitError("fewer than one event per sampled point")
    omega = config.sample_grid.nodes
    eta = transmission_profile(omega, config.model)
    var = np.asarray(transmission_variance(config.probe_per_point(), eta, omega), dtype=float)
    draws = eta + np.sqrt(var) * rng.standard_normal(omega.size)
    clamped = (draws < config.clamp_epsilon) | (draws > 1.0)
    draws = np.clip(draws, config.clamp_epsilon, 1.0)
    return [
        MeasurementPoint(float(w), float(v), float(s), bool(c))
        for w, v, s, c in zip(omega, draws, var, clamped)
    ]


def estimate_profiles(points: Sequence[MeasurementPoint], config: EstimationConfig):
    """Interpolated transmission, KK phase, and absorption estimates on the reference grid.

    Returns
    -------
    eta_est, phi_est, alpha_est : SampledFunction
    """
    eta_est = linear_interpolate(points, config.reference_grid)
    phi_est = kkr_phase_from_transmission(eta_est, config.hilbert_config)
    alpha_est = SampledFunction(eta_est.grid, -np.log(eta_est.values) / config.geometry.length_l)
    return eta_est, phi_est, alpha_est


def error_functional(est: SampledFunction, truth_fn) -> float:
    """Discretised integrated squared error of ``est`` against ``truth_fn``."""
    truth = SampledFunction(est.grid, truth_fn(est.grid.nodes))
    return integrated_squared_difference(est, truth)


def bound_error_integral(config: EstimationConfig) -> float:
    """Integral of the equivalent phase variance at ``n_ev`` resources per point.

    For Fock probes the integrand is the lossy phase bound ``(1-eta)/(4 eta N)``.
    """
    grid = config.reference_grid
    eta = transmission_profile(grid.nodes, config.model)
    probe = config.probe_per_point()
    var = equivalent_phase_variance(transmission_variance(probe, eta, grid.nodes), eta)
    return integrate(SampledFunction(grid, var))


def run_estimation(config: EstimationConfig, seed: int) -> RunResult:
    """Simulate, reconstruct and score one run; a pure function of ``(config, seed)``."""
    points = simulate_transmission_measurements(config, make_rng(seed))
    eta_est, phi_est, alpha_est = estimate_profiles(points, config)
    model = config.model
    length = config.geometry.length_l
    return RunResult(
        delta2_eta=error_functional(eta_est, lambda w: transmission_profile(w, model)),
        delta2_phi_kkr=error_functional(phi_est, lambda w: phase_profile_exact(w, model)),
        delta2_phi_bound=bound_error_integral(config),
        delta2_alpha_kkr=error_functional(alpha_est, lambda w: absorption_profile(w, model) / length),
        seed=int(seed),
        clamp_events=sum(p.clamped for p in points),
        n_ev=config.n_ev,
        leftover=config.leftover,
    )
