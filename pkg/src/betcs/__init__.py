"""Anytime-valid confidence sequences for bounded means.

Streaming trackers that invert betting-wealth lower bounds into
time-uniform confidence intervals for the conditional mean of [0,1]-valued
observations, with a simulation harness and CLI on top.
"""

from .approx import ApproxPortfolioTracker, beta_tilde, g_lower, g_upper
from .exact import ExactPortfolioTracker, first_interval_closed_form
from .explicit import (
    EmpiricalBernsteinTracker,
    MixedPortfolioTracker,
    epsilon_bernstein,
)
from .harness import (
    ALGORITHMS,
    ClopperPearsonTracker,
    ExperimentSpec,
    clopper_pearson,
    generate,
    make_tracker,
    run_experiment,
    true_mean,
)
from .moments import RunningMoments, SampleStore
from .regret import RegretBound, argmax_k, f_regret, side_regret, worst_case_regret
from .robbins import (
    ROBBINS_C,
    RobbinsMixtureTracker,
    h_robbins,
    lil_width_bound,
    regret_ratio,
    robbins_density,
)
from .special import inc_beta, inc_beta_inv, kl_bernoulli, lambert_w_m1, ln_gamma, psi
from .wealth import (
    CoinOutcome,
    MixturePrior,
    QuadratureError,
    WealthMax,
    coin_to_market,
    h_profile,
    max_log_wealth,
    mixture_log_wealth,
)

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS",
    "ApproxPortfolioTracker",
    "ClopperPearsonTracker",
    "CoinOutcome",
    "EmpiricalBernsteinTracker",
    "ExactPortfolioTracker",
    "ExperimentSpec",
    "MixedPortfolioTracker",
    "MixturePrior",
    "QuadratureError",
    "RegretBound",
    "ROBBINS_C",
    "RobbinsMixtureTracker",
    "RunningMoments",
    "SampleStore",
    "WealthMax",
    "argmax_k",
    "beta_tilde",
    "clopper_pearson",
    "coin_to_market",
    "epsilon_bernstein",
    "f_regret",
    "first_interval_closed_form",
    "g_lower",
    "g_upper",
    "generate",
    "h_profile",
    "h_robbins",
    "inc_beta",
    "inc_beta_inv",
    "kl_bernoulli",
    "lambert_w_m1",
    "lil_width_bound",
    "ln_gamma",
    "make_tracker",
    "max_log_wealth",
    "mixture_log_wealth",
    "psi",
    "regret_ratio",
    "robbins_density",
    "run_experiment",
    "side_regret",
    "true_mean",
    "worst_case_regret",
]
