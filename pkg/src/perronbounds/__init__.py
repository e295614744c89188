"""Monotone bounds on Perron values, tree bottleneck matrices, broom closed
forms and log-concavity indices."""
from .bounds import (
    BoundKind,
    BoundSequence,
    Monotonicity,
    MonotonicityReport,
    a_seq,
    b_seq,
    c_seq,
    classify_monotonicity,
    collatz_wielandt,
    mediant,
    perron_onset,
    ratio_bounds,
)
from .broom import (
    BroomParams,
    BroomVariant,
    F_crossing,
    a3_upper_B2,
    broom_iterate,
    build_broom,
    c3_lower_B1,
    prior_upper_bound,
    crossing_sweep,
    find_r0,
    upper_gap,
)
from .errors import (
    AmbiguousFiedlerError,
    ConvergenceError,
    HypothesisError,
    InvariantError,
    LogIndexInconsistency,
)
from .linalg import (
    PerronPair,
    SpectralDecomposition,
    is_irreducible,
    is_perron_vector,
    is_positive_semidefinite,
    mat_vec,
    perron,
    symmetric_eig,
)
from .logindex import (
    LogIndexResult,
    Shape,
    find_log_indices,
    generate,
    moments,
    select_dominating_index,
    two_by_two_D,
    verify_log_shape,
)
from .tree import (
    CharacteristicSetResult,
    RootedTree,
    TreeType,
    WeightedGraph,
    bottleneck_at,
    bottleneck_of_rooted_tree,
    bound_report,
    characteristic_set_fiedler,
    characteristic_set_perron,
    laplacian,
    neckbottle,
    path_matrix,
    perron_branches,
)

__version__ = "0.1.0"
