"""Discrete-time quantum walks with aperiodic coins ``theta(n) = theta0 * n**nu``."""

__version__ = "0.1.0"

from .coin_field import CoinField, angle_at, build_field, coin_matrix, parse_angle
from .entanglement import (
    PowerLawFit,
    ReducedCoinDensity,
    asymptotic_fit,
    reduce_over_position,
    trace_distance,
    von_neumann_entropy,
)
from .errors import (
    FitError,
    GuardError,
    LatticeIndexError,
    NumericalError,
    ValidationError,
    WalkError,
)
from .evolution import Boundary, EvolutionConfig, apply_step, auto_lattice, evolve, run_walk
from .lattice_state import (
    InitialStateSpec,
    WalkerState,
    make_localized_state,
    position_probabilities,
    state_from_json,
    state_to_json,
)
from .observables import (
    ObservableSeries,
    inverse_participation_ratio,
    long_time_average,
    survival_probability,
)
from .spectrum import (
    BandReport,
    QuasiEnergySpectrum,
    band_report,
    build_floquet_matrix,
    quasi_energies,
)
from .sweep import DiagramResult, SweepSpec, enhancement_mask, run_sweep
