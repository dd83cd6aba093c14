"""Sum-rate capacity bounds, achievable rates and regime classification for
K-user interference channels (Gaussian and discrete memoryless), plus the
numerical verification machinery behind them.

All information quantities are in bits; user and receiver indices are 0-based
at the library level (the CLI speaks the 1-based a12/P1 convention).
"""

from .errors import (
    DegenerateChannelError,
    NotManyToOneError,
    NumericalConsistencyError,
    ResolutionError,
    SizeCapError,
)
from .joints import (
    JointDist,
    conditional_mi,
    csiszar_korner_residual,
    entropy,
    random_joint,
    sample_simplex,
)
from .expressions import (
    DecodeOrder,
    Expression,
    MiTerm,
    canonical_decode_order,
    grouped_chain_expression,
    per_user_chain_expression,
    receiver_groups_expression,
    successive_decoding_expression,
    tin_expression,
)
from .gaussian import (
    GaussianIC,
    check_proportional_degradation,
    classify_three_user,
    evaluate_expression_gaussian,
    gaussian_cmi,
    gaussian_group_cmi,
    heuristic_outer_bounds,
    mixed_regime_two_user,
    normalize,
    proportional_degradation_report,
    psi,
    rank_one_degraded_check,
    successive_decoding_sum_rate,
    sum_capacity_three_user,
    theorem_bound_gaussian,
)
from .discrete import (
    ConditionSpec,
    Counterexample,
    DiscreteIC,
    ProductInput,
    SearchConfig,
    assemble_joint,
    bsc_kernel,
    build_degraded_chain,
    chain_less_noisy_spec,
    evaluate_expression,
    falsify_condition,
    grouped_chain_conditions_spec,
    identity_kernel,
    less_noisy_per_user_spec,
    many_to_one_condition_spec,
    many_to_one_ic,
    many_to_one_tin_capacity,
    maximize_expression,
    parallel_ic,
    receiver_groups_conditions_spec,
    set_less_noisy_spec,
    two_user_mixed_spec,
)
from .oracle import (
    GaussianSystem,
    GridMaximum,
    RandomCode,
    brute_force_sum_capacity,
    conditioning_preservation_check,
    degradation_equivalence_check,
    nletter_inequality_check,
    side_conditioned_aux_spec,
    side_conditioned_set_spec,
    side_conditioned_subset_spec,
)
from .reports import BoundResult, ConditionCheck, RegimeReport, SearchStats

__version__ = "0.1.0"
