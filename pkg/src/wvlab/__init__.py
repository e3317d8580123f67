"""wvlab: weak-value numerics at small Hilbert-space dimension.

Computes weak values and their products, and verifies the uncertainty,
complementarity, purity and incompatibility relations they obey, through
exact identities, hand-checkable cases and seeded randomized fuzzing.
"""

from ._version import __version__
from .errors import (
    ConfigError,
    DegenerateDecomposition,
    DimensionMismatch,
    InvalidState,
    InvalidWeights,
    LengthMismatch,
    NoConvergence,
    NonHermitianInput,
    NotProjective,
    NotUnitary,
    UndefinedOutcome,
    UndefinedPostselection,
    UnknownExample,
    WvlabError,
)
from .linalg import (
    EigenDecomposition,
    dag,
    hermitian_eigendecomposition,
    hermitian_eigenvalues,
    max_abs,
    random_bounded_hermitian,
    random_ginibre,
    random_haar_unitary,
)
from .states import (
    MeasurementModel,
    Observable,
    QuantumState,
    coherent_state,
    coherent_tail_mass,
    computational_basis,
    fourier_basis,
    partial_trace_ancilla,
    pauli,
    purify,
    random_density_operator,
    random_povm,
    random_projective_povm,
    random_pure_state,
    random_rank1_povm,
    truncated_annihilation,
)
from .reports import RelationReport, identity_report, inequality_report
from .weak_values import (
    CounterexampleRecord,
    EstimateAssignment,
    WeakValueTable,
    average_reconstruction_check,
    estimate_mse,
    estimate_operator_mse,
    optimal_estimate,
    product_representation_check,
    replay_triple_product_trial,
    triple_product_counterexample,
    weak_value,
    weak_value_table,
)
from .uncertainty import (
    ComplexRVStats,
    RegionCurve,
    UnitaryPairSummary,
    complex_rv_covariance,
    complex_rv_stats,
    mixed_state_summary_via_purification,
    nonhermitian_uncertainty_check,
    operator_variance,
    robertson_schrodinger_check,
    uncertainty_region_curves,
    unitary_pair_summary,
    unitary_uncertainty_checks,
)
from .weak_stats import (
    AnomalousDecomposition,
    IncompatibilityProfile,
    ProjectorWeakValuePair,
    StrongSequentialResult,
    WeakJointDistribution,
    anomalous_decomposition,
    complementarity_product,
    cross_moment_identity_check,
    fourier_pair_product,
    incompatibility_profile,
    projector_weak_value_pair,
    strong_sequential_distribution,
    tradeoff_suite,
    weak_joint_distribution,
)
from .figure import RegionDataset, build_region_dataset
from .fuzz import SUITES, SuiteConfig, replay_trial, run_suites

__all__ = [name for name in dir() if not name.startswith("_")]
