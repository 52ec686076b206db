"""Three-boson pairwise bunching: Fock-space and hidden-variable accounts."""

from .bounds import BoundReport, evaluate_bounds
from .experiments import (
    AB,
    AC,
    BC,
    CANONICAL_EVENTS,
    EventSpec,
    ExperimentConfig,
    build_projector,
    projector_report,
    quantum_event_probability,
    quantum_exclusivity_sum,
    quantum_outcome_probability,
)
from .fock import (
    FockBasis,
    FockOperator,
    FockState,
    ModeUnitary,
    Reflectivity,
    amplitude,
    beam_splitter,
    enumerate_basis,
    lift_unitary,
    permanent,
)
from .hv import (
    HiddenAssignment,
    OutputMode,
    analytic_event_prob,
    analytic_sum,
    bs_outcome,
    event_indicator,
    joint_pattern_distribution,
    monte_carlo_event_prob,
    sample_assignment,
    sweep_sum,
)

__version__ = "0.1.0"
