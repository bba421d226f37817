"""Augustin information, strong converse exponents and refined strong converse
bounds for constant composition codes, with exact oracles to check them.
"""
from .augustin import (
    AugustinSolution,
    augustin_fixed_point_map,
    augustin_info_derivative,
    i1_of_tilted,
    kl_decomposition,
    solve_augustin,
    tilted_rows_at_mean,
)
from .bounds import (
    AchievabilityEvent,
    BerryEsseenConstants,
    Lemma1Bound,
    Theorem1Bound,
    berry_esseen_constants,
    code_rate,
    lemma1_converse_bound,
    lemma2_achievability_event,
    lemma2_window,
    theorem1_at_rate,
    theorem1_bound,
    theorem2_at_rate,
    theorem2_bound,
)
from .errors import (
    CapacityError,
    ConvergenceError,
    ConverseError,
    DegenerateVarianceError,
    DivergenceInfiniteError,
    DomainError,
    HypothesisError,
    RegimeError,
    StructureError,
    UndefinedTiltError,
)
from .instance import HtInstance, Letter
from .oracle import (
    CodeSpec,
    LlrAtomDistribution,
    NeymanPearsonResult,
    exact_list_decoding_error,
    llr_atoms,
    np_tradeoff_curve,
    np_tradeoff_exact,
)
from .prob import (
    Channel,
    Composition,
    Distribution,
    SubProbability,
    absolutely_continuous_part,
    bsc,
    conditional_renyi_divergence,
    kl_divergence,
    noiseless,
    product_log_likelihood_ratio,
    renyi_divergence,
    tilted_channel,
    tilted_measure,
    total_variation,
)
from .sce import (
    Regime,
    SceResult,
    StrongConverse,
    ThresholdEstimate,
    dueck_korner_check,
    rate_threshold_high,
    sce_full,
    sce_grid_oracle,
)

__version__ = "0.1.0"
