"""Correlation transfer between damped entangled-coherent-state cavities and their reservoirs."""
from .statedyn import (
    AmplitudePair,
    InvalidStateError,
    SystemParams,
    TwoQubitXState,
    amplitudes_at,
    cavity_state,
    mirror_time,
    overlap_factors,
    reservoir_state,
)
from .quantinfo import (
    CorrelationRecord,
    MeasurementDirection,
    classical_correlation_analytic,
    classical_correlation_bruteforce,
    correlations,
    discord,
    entropy,
    marginals,
    measure_and_condition,
    mutual_information,
    xstate_eigenvalues,
)
from .transitions import (
    TransitionReport,
    detect_branch_crossing,
    detect_dfs_window,
    dfs_duration,
    sudden_transition_time_cavities,
    sudden_transition_time_reservoirs,
)

__version__ = "0.1.0"
