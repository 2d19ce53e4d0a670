"""Kramers-Kronig phase reconstruction under quantum-limited transmission noise."""

from .estimators import KramersKronigPhase, TransmissionInterpolator, ZhouHilbertTransformer
from .exceptions import KKPhaseError
from .experiment import SweepConfig, SweepResult, emit_plot, read_results, run_sweep, write_results
from .hilbert import HilbertConfig, hilbert_pv_oracle, hilbert_zhou
from .noise import (
    CoherentProbe,
    DetectorAdjustedFock,
    FockProbe,
    equivalent_phase_variance,
    lossy_phase_bound,
    transmission_variance,
)
from .optics import (
    REFERENCE_MODEL,
    AbsorptionModel,
    MediumGeometry,
    absorption_profile,
    dawson,
    kkr_absorption_from_phase,
    kkr_phase_from_transmission,
    phase_profile_exact,
    transmission_profile,
)
from .pipeline import EstimationConfig, RunResult, run_estimation
from .spectral import FrequencyGrid, SampledFunction, make_uniform_grid

__version__ = "0.1.0"
