"""Simulator for a system measured against a quantum reference variable
with a single energy-dependent turning point.

A linear frame potential slows the reference variable down, reverses it,
and releases it; classical relational trajectories are closed-form, the
quantum evolution is an exact pointwise phase in the momentum
representation, and extrapolating the late-scale position back to the
start exposes an anomalously large shift whose leading term is
independent of hbar.
"""

from ._kernels import HAVE_NUMBA, backend
from .errors import (
    ConfigError,
    ConsistencyError,
    DomainError,
    InvalidStateError,
    NotAsymptoticError,
    ResolutionError,
    TurningFrameError,
)
from .model import (
    ClassicalState,
    ExpectationSeries,
    FrameModel,
    GaussianMode,
    GaussianSpec,
    Moments,
    MomentumGrid,
    MomentumState,
    ShiftConvention,
    ShiftReport,
    load_momentum_csv,
    make_gaussian,
    moments,
    save_momentum_csv,
)
from .classical import (
    Branch,
    GaugeSample,
    classical_shift,
    gauge_solution,
    phi_of_q,
    q_of_phi,
    q_of_tau,
    q_rate,
    turning_point,
    unwind_phi,
)
from .quantum import (
    PositionProfile,
    displacement_kernel,
    evolve,
    expectation_series,
    phase_branch,
    phase_theta,
    position_expectation_analytic,
    position_expectation_numeric,
    position_variance,
    to_position_representation,
    total_phase,
)
from .spectral import (
    ObservableMatrix,
    SpectralState,
    expectation,
    load_observable_csv,
    load_spectral_csv,
    propagate,
    save_observable_csv,
    save_spectral_csv,
)
from .shift import (
    asymptotic_tau_bound,
    extract_shift_numeric,
    quantum_shift_analytic,
    total_shift,
)
from .estimates import (
    AMU_KG,
    BOLTZMANN_J_PER_K,
    PhysicalScenario,
    coherence_time_estimate,
    displacement_estimate,
    lambda_gravitational,
)

__version__ = "0.1.0"

__all__ = [
    "AMU_KG",
    "BOLTZMANN_J_PER_K",
    "Branch",
    "ClassicalState",
    "ConfigError",
    "ConsistencyError",
    "DomainError",
    "ExpectationSeries",
    "FrameModel",
    "GaugeSample",
    "GaussianMode",
    "GaussianSpec",
    "HAVE_NUMBA",
    "InvalidStateError",
    "Moments",
    "MomentumGrid",
    "MomentumState",
    "NotAsymptoticError",
    "ObservableMatrix",
    "PhysicalScenario",
    "PositionProfile",
    "ResolutionError",
    "ShiftConvention",
    "ShiftReport",
    "SpectralState",
    "TurningFrameError",
    "asymptotic_tau_bound",
    "backend",
    "classical_shift",
    "coherence_time_estimate",
    "displacement_estimate",
    "displacement_kernel",
    "evolve",
    "expectation",
    "expectation_series",
    "extract_shift_numeric",
    "gauge_solution",
    "lambda_gravitational",
    "load_momentum_csv",
    "load_observable_csv",
    "load_spectral_csv",
    "make_gaussian",
    "moments",
    "phase_branch",
    "phase_theta",
    "phi_of_q",
    "position_expectation_analytic",
    "position_expectation_numeric",
    "position_variance",
    "propagate",
    "q_of_phi",
    "q_of_tau",
    "q_rate",
    "quantum_shift_analytic",
    "save_momentum_csv",
    "save_observable_csv",
    "save_spectral_csv",
    "to_position_representation",
    "total_phase",
    "total_shift",
    "turning_point",
    "unwind_phi",
]
