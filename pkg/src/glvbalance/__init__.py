"""Complex balance, realization and log-coordinate simulation for generalized Lotka-Volterra systems."""

from .balance import (
    BalanceCertificate,
    BalanceResidual,
    SteadyStateSet,
    StiemkeCertificate,
    balance_fit,
    check_balance_at,
    find_balanced_state,
    positive_kernel,
    state_in_class,
    steady_state_set,
    stiemke_infeasibility,
    stiemke_vector,
)
from .dynamics import (
    GlvSystem,
    ScaledSystem,
    eval_glv,
    eval_glv_log,
    glv_from_graph,
    glv_rhs,
    mass_action_rhs,
    matrix_form_rhs,
    monomials,
    polyexp_rhs,
)
from .egraph import (
    Edge,
    EGraph,
    StructuralReport,
    SubspaceBasis,
    is_weakly_reversible,
    kirchhoff_matrix,
    linkage_classes,
    span_basis,
    stoichiometric_basis,
    strong_components,
    structural_report,
    validate_graph,
)
from .errors import (
    DegenerateIntersection,
    DimensionMismatch,
    DuplicateEdge,
    DuplicateVertex,
    GlvError,
    Infeasible,
    MissingVertex,
    NonPositiveState,
    NonPositiveWeight,
    NotASteadyState,
    NumericalError,
    Overflow,
    ParseError,
    SelfLoop,
    StepUnderflow,
    ValidationError,
)
from .realization import (
    HoiParameters,
    HoiWitness,
    RealizationProblem,
    RealizationResult,
    check_realization,
    cooperative_parameters,
    default_candidate_vertices,
    find_scaling,
    hoi_condition,
    realize,
    realized_balance,
    square_problem,
)
from .simulate import (
    Trajectory,
    ensemble_initial_states,
    integrate,
    linear_lyapunov_check,
    lyapunov_value,
)

__version__ = "0.1.0"
