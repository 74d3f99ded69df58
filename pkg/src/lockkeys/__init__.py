"""Opening n locks with a ring of N >= n keys: strategies, exact laws, simulation."""

from .analytic import (
    GammaParams,
    MomentPair,
    gamma_match_random,
    key_first_marginal,
    moments_ordered,
    moments_random,
    per_lock_pmf_ordered,
    per_lock_pmf_random,
    verify_chu_vandermonde,
)
from .core import Keyring, Problem, RngStream, TrialTrace, make_problem, random_keyring
from .exact import (
    TruncationPolicy,
    brute_force_pmf,
    exact_pmf_ordered,
    exact_pmf_random,
    recursion_pmf_random,
)
from .montecarlo import (
    Campaign,
    FitReport,
    Histogram,
    chi_square_gof,
    fit_gamma_moments,
    fit_normal_moments,
    run_campaign,
)
from .pmf import Pmf, pmf_convolve, pmf_moments
from .special import gamma_cdf
from .strategies import (
    StrategyKind,
    equivalent_on,
    play_key_first,
    play_lock_first,
    play_totally_random,
)

__version__ = "0.1.0"
