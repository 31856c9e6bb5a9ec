"""Semi-tensor-product toolkit for finite static Bayesian games.

Covers the STP kernel, normal-form games and exact potentials, Bayesian games
with type-dependent admissible actions, the Harsanyi / Selten / Action-Type
conversions, Bayesian potential tests, and best-response and logit dynamics.
"""
from .bayes_potential import (
    BayesPotentialReport,
    at_potential,
    at_potential_system,
    bayes_potential,
    deletion_operator,
    harsanyi_potential,
    selten_potential,
    th_potential,
    tn_potential,
    verify_bayes_potential,
)
from .bayesian import (
    BayesianGame,
    assemble,
    belief,
    belief_matrix,
    expected_payoff_th,
    expected_payoff_tn,
    from_vectors,
    interim_bne,
    marginal_prior,
)
from .conversions import (
    ConvertedGame,
    at_bne,
    at_convert,
    at_lift,
    h_bne,
    harsanyi_convert,
    s_bne,
    selten_convert,
    type_selector,
)
from .dynamics import (
    StationaryResult,
    SurConfig,
    TransitionMatrix,
    detailed_balance_check,
    fixed_points,
    gibbs_distribution,
    logit_matrix,
    marginal,
    mbra_map,
    player_maps,
    simulate,
    stationary_distribution,
    step,
    step_maps,
    transition_matrix,
)
from .errors import *  # noqa: F401,F403
from .extreal import NEG_INF
from .io import dump_game, load_game, parse_game
from .normal_game import (
    NormalGame,
    best_responses,
    equivalent_vector_form,
    finite_box,
    pure_nash,
    restrict,
)
from .potential import (
    PotentialResult,
    build_potential_system,
    face_matrix,
    solve_potential,
    verify_potential,
    verify_weighted_potential,
)
from .stp import (
    LogicalMatrix,
    ProfileSpace,
    as_matrix,
    delta,
    khatri_rao,
    kron,
    order_reducing_matrix,
    profile_index,
    profile_unindex,
    stp,
    swap_matrix,
)

__version__ = "0.1.0"
