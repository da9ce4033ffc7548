"""Ion motion in a modified Poschl-Teller well modelled as an f-deformed oscillator.

Under bichromatic laser driving the motional steady state is a nonlinear
coherent state. The package builds that state and evaluates observables
on it.
"""

__version__ = "0.1.0"

from .coupling import DriveParams, f_j, g_eta, h_n, laguerre_h, m_factor
from .errors import (
    BranchError,
    CancellationWarning,
    CoverageWarning,
    DomainError,
    FiniteTrapError,
    ShallowTrapWarning,
    SingularDenominator,
    TruncationError,
    UsageError,
)
from .observables import (
    PhaseSpaceGrid,
    SqueezeScan,
    default_grid,
    number_distribution,
    parity_at_origin,
    q_function,
    quadrature_variance,
    squeezing_parameter,
    squeezing_scan,
    wigner_function,
)
from .steady_state import MotionalState, build_nlcs, chi_of, eigen_residual, solve_steady_state
from .trap import (
    OperatorMatrix,
    TrapParams,
    build_ladder,
    build_position,
    deformation_f2,
    energy_deformed,
    energy_mpt,
    transition_frequency,
    truncation_level,
)
from .vibronic import VibronicState, build_interaction_hamiltonian, stationarity_residual
