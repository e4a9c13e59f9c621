"""Stimulated emission of one-dimensional atoms at the single-photon level.

Two-level Bloch dynamics with incoherent pump and pure dephasing, the
radiated power channels, and a three-level exciton/biexciton Lindblad model
used to monitor the stimulated transition through an ancillary one.
"""

from .bloch2l import (
    EXCITED,
    GROUND,
    BlochState,
    BlochTrajectory,
    bloch_rhs,
    evolve_exact,
    evolve_rk4,
    steady_state,
)
from .channels import EmissionRatios, PowerChannels, channels_from_state, channels_from_trajectory, ratios
from .errors import (
    GridTooCoarseError,
    NoNetEmissionError,
    NoSteadyStateError,
    OneDAtomError,
    OverdampedError,
    ParameterError,
    SolverError,
    UndefinedRatioError,
)
from .experiments import SweepResult, estimate_rabi, run_qd_sweep, run_steady_sweep, run_transient
from .model import (
    PowerGrid,
    ThreeLevelParams,
    TimeGrid,
    TwoLevelParams,
    rabi_frequency,
    threshold_power,
    validate,
)
from .qd3l import (
    build_hamiltonian,
    build_liouvillian,
    evolve_three_level,
    observables_three_level,
    steady_state_three_level,
)

__version__ = "0.1.0"
