"""Analog quantum search: certainty Hamiltonians and their measuring times."""
from .errors import (
    DegenerateInitialState,
    InvalidParameter,
    ScaleGuardError,
    SearchError,
    StepSizeError,
    ZeroGapError,
)
from .evolution import (
    ProbabilityTrace,
    amplitude_perp,
    probability_closed,
    propagate_exact,
    propagate_numeric,
    trace,
)
from .fullspace import SearchInstance, build_full_hamiltonian, evolve_full
from .hamiltonian import (
    Hamiltonian2,
    bae_kwon,
    from_coupling,
    from_spectral_angle,
    from_spectral_tuned,
)
from .qmodel import (
    CouplingParams,
    DerivedGeometry,
    InitialState,
    QubitState,
    SpectralParams,
    to_coupling,
    to_spectral,
)
from .timing import (
    MeasuringSchedule,
    first_time_from_coupling,
    measuring_times,
    solve_mixing_angle,
    tolerance_window,
)

__version__ = "0.1.0"
