"""Renyi-entropy correlation measures and convex-roof searches for small
quantum systems, with seeded reproducible optimization throughout."""

__version__ = "0.1.0"

from .correlations import (
    CorrelationValue,
    KwReport,
    c_alpha,
    check_monotonicity,
    eof_alpha,
    kw_verify,
    mutual_information,
    quantum_discord,
)
from .entropy import (
    Ensemble,
    qjsd,
    renyi_classical,
    renyi_conditional,
    renyi_quantum,
    schatten_norm,
    schatten_quasi,
)
from .errors import (
    DimMismatch,
    IncompleteKraus,
    InvalidAlpha,
    InvalidRank,
    InvalidState,
    NonFiniteObjective,
    NonHermitian,
    NumericalError,
    RenyikwError,
    SingletonEnsemble,
    SingularNormalizer,
    TooFewOutcomes,
    ValidationError,
)
from .measurements import (
    IsometryParams,
    MeasurementRecord,
    Povm,
    general_povm_from_blocks,
    isometry_from_angles,
    isometry_param_count,
    measure_local,
    povm_from_isometry,
    qc_state,
)
from .optimize import OptimizerConfig, OptReport, optimize_scalar
from .robustness import (
    DiscriminationResult,
    RobustnessValue,
    check_half_lemma,
    check_psuc_bound,
    check_single_copy_capacity_bound,
    eof_half_roof_check,
    p_success,
    robustness_pure,
)
from .states import (
    DensityMatrix,
    KrausChannel,
    PureState,
    SchmidtDecomposition,
    apply_channel,
    eig_hermitian,
    haar_unitary,
    identity_channel,
    mat_power,
    partial_trace,
    product_channel,
    purify,
    random_channel,
    random_state,
    schmidt,
    tensor,
    tensor_states,
    unitary_channel,
)

__all__ = [name for name in dir() if not name.startswith("_")]
