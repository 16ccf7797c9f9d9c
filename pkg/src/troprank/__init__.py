"""Exact tropical and supertropical matrix-rank toolkit.

Supertropical scalars and matrices, tropical permanents and ranks via exact
assignment solving, the paired-row symmetrization with its rank additivity,
finite Puiseux-series liftings with exact series rank, the block separation
construction with its two rank bounds, and a seeded sampler for the
probabilistic pattern underlying it — all in exact rational arithmetic.
"""

from .errors import (
    AttemptsExhausted,
    DimensionMismatch,
    FieldTooSmall,
    FormatError,
    InvalidAlpha,
    LabelClash,
    LemmaViolation,
    MalformedSymmetrized,
    NegativeRadicand,
    NoFiniteAssignment,
    NotALifting,
    NotSquare,
    PreconditionViolated,
    ShapeMismatch,
    SizeLimitExceeded,
    TropError,
)
from .semiring import (
    INF,
    Scalar,
    format_scalar,
    ghost,
    ghost_surpasses,
    parse_scalar,
    st_add,
    st_mul,
    tangible,
    tropicalize,
)
from .matrix import (
    Matrix,
    RankResult,
    expand_first_column,
    hungarian_normalize,
    is_nonsingular,
    is_nonsingular_fast,
    matrix_from_json,
    matrix_to_json,
    permanent,
    replace_column_keep_nonsingular,
    trop_matmul,
    tropical_identity,
    tropical_rank,
)
from .symmetrize import (
    SymmetrizedMatrix,
    sigma,
    symmetrize,
    symmetrized_from_json,
    symmetrized_to_json,
    verify_rank_additivity,
)
from .puiseux import (
    Series,
    SeriesMatrix,
    deg,
    lift_transform,
    lifting_check,
    poly_add,
    poly_mul,
    poly_neg,
    row_reduce_symmetrized,
    series_matrix_from_json,
    series_matrix_to_json,
    series_rank,
    series_rank_minors,
)
from .construction import (
    GoodTuple,
    PhiMatrix,
    ZeroOneMatrix,
    build_phi,
    finite_entries,
    kapranov_lower_bound,
    phi_from_json,
    phi_to_json,
    tropical_upper_bound,
    verify_phi_bounds,
    zeroone_from_json,
    zeroone_to_json,
)
from .sampler import (
    SamplerParams,
    SeparationReport,
    SplitMix64,
    hoeffding_bound,
    lemma_params,
    pad_cyclic,
    report_to_json,
    sample_candidate,
    sample_good_tuple,
    separate,
    union_bound,
    validate_report,
    verify_good,
)

__version__ = "0.1.0"
