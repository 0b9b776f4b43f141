"""Observable-guided generator selection for Pauli-string parameterized circuits.

The package selects circuit generators from an n-qubit Pauli-string pool so
that every generator anticommutes with the observable (keeping first-order
sensitivity large) while mutually anticommuting with each other (suppressing
second-order interference between parameters), trains the resulting circuits
on a synthetic regression task with SPSA, and numerically verifies the
Casimir-based commutator-sum identities behind the selection criteria.
"""

from .pauli import (
    PauliString,
    ScaledPauli,
    commutator,
    commutator_norm_sq,
    commutes,
    double_commutator_norm_sq,
    multiply,
    pauli_strings,
)
from .selection import (
    SelectionMetrics,
    SelectionProblem,
    SelectionResult,
    build_pool,
    evaluate_selection,
    score_matrix,
    select_baseline,
    solve_exact,
    solve_genetic,
    solve_greedy,
)
from .simulator import (
    CircuitModel,
    StateVector,
    apply_pauli_rotation,
    apply_ry_encoding,
    expectation,
    run_model,
    run_model_batch,
)
from .optimizer import SpsaConfig, TrialRecord, rmse_cost, spsa_step, train
from .theory import (
    ObservableInAlgebra,
    OrthonormalBasis,
    TheoryVerificationError,
    casimir_constant,
    g_purity,
    verify_lemma1,
    verify_lemma2_and_theorem2,
    verify_theorem1,
)
from .experiments import (
    DatasetSpec,
    ExperimentReport,
    ExpressibilityConfig,
    MethodSummary,
    derive_seed,
    expressibility_hellinger,
    generate_dataset,
    haar_bin_probs,
    hellinger_distance,
    run_comparison,
    student_t_pvalue,
    two_sample_t_test,
)

__version__ = "0.1.0"
