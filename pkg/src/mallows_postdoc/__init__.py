"""Second-best ("postdoc") stopping under Mallows-distributed interview orders.

The package solves, optimizes, and simulates the sequential selection game
whose goal is to stop exactly on the second-best of n candidates when the
interview order follows the Mallows distribution with parameter theta:
exact finite-n solutions (prefix-tree DP and level recurrences), q-analog
closed forms for threshold strategies, asymptotic optima per theta regime,
an exhaustive test oracle, and a seeded Monte Carlo estimator.
"""

from .closedform import (
    asymptotic_f,
    case31_value,
    h1,
    h2,
    j3,
    t1,
    t1_two,
    t2,
    t2_recurrence,
    threshold_roots,
    w1_star,
    w1_star_recurrence,
    w1_total,
    w1_two,
    w1_two_solved,
    w2,
    w2_asymptotic_ratio,
    w2_recurrence,
    w2_win_ratio,
)
from .engine import (
    ALL_NEGATIVE_BELOW_N,
    QLevelTable,
    StrikeSet,
    StrikeSetError,
    ThresholdReport,
    TreeSolution,
    level_recurrence,
    positivity_thresholds,
    tree_dp,
)
from .mallows import (
    MallowsModel,
    decode_rank_code,
    mallows_pmf,
    sample_mallows,
    sample_mallows_batch,
    sample_rank_codes,
)
from .optimizer import (
    AsymptoticStrategy,
    RegimeResult,
    dispatch,
    optimize_gt1,
    optimize_mid,
    optimize_small,
)
from .permutations import (
    Prefix,
    PrefixClass,
    apply_prefix_operator,
    earlier_larger_counts,
    inversions,
    pattern_of,
    prefix_pattern,
    prefix_patterns,
)
from .qpoly import QPoly, gaussian_binomial, p_factorial, p_poly
from .scalars import REL_TOL, Scalar, parse_theta
from .simulate import MonteCarloResult, monte_carlo
from .strategies import (
    ExplicitStrikeSet,
    PlayOutcome,
    Strategy,
    TwoThreshold,
    Type1ThresholdLastAccept,
    Type2Threshold,
    no_pick_weight,
    oracle_exact,
    play,
    strategy_to_strike_set,
    validate_strategy,
    win_weight,
)

__version__ = "0.1.0"
