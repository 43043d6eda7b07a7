"""Friable (smooth) integer counts and the Dickman rho family of delay equations.

The package splits into five layers:

- ``dde``: a generic solver for u f'(u) + a f(u) + b f(u-1) = 0 by the method
  of steps, plus the adjoint equation and its invariant scalar product.
- ``special``: the named solutions (Dickman rho, Buchstab omega, sigma_kappa,
  tau_delta), their Laplace transforms, and series identities.
- ``xi``: the saddle function xi(u) and the closed-form asymptotics of rho.
- ``primes`` / ``counting``: exact Psi(x, y) and Phi(x, y) by recursion over a
  prime table, with every classical estimator next to them for comparison.
- ``stats``: largest-prime-factor sums and longest-cycle statistics sharing
  the Golomb-Dickman constant.

Everything re-exported here is stable API; module internals are not.
"""

from .counting import (
    CountResult,
    EstimateBundle,
    buchstab_identity_check,
    estimate_bundle,
    hildebrand_identity_check,
    lambda_debruijn,
    log_psi_Z,
    phi_buchstab_estimate,
    phi_debruijn_refined,
    phi_exact,
    psi_binomial_lower,
    psi_bruteforce,
    psi_dickman,
    psi_exact,
    psi_rankin_upper,
    psi_saddle_ht,
    rankin_alpha,
    rankin_alpha_approx,
)
from .dde import (
    AdjointSolution,
    DdeSpec,
    PiecewiseSolution,
    max_relative_residual,
    ratio_convergence_check,
    scalar_product,
    solve_adjoint_backward,
    solve_forward,
)
from .errors import (
    BoundsError,
    CostError,
    CoverageError,
    DomainError,
    FriableError,
    SpecMismatchError,
    ToleranceError,
)
from .primes import (
    PrimeTable,
    largest_factor_sieve,
    log_zeta_derivatives,
    mertens_product,
    partial_zeta,
    prime_pi,
    sieve_primes,
    sum_log_primes,
    sum_reciprocal_primes,
)
from .special import (
    EULER_GAMMA,
    EXP_GAMMA,
    EXP_NEG_GAMMA,
    OmegaEvaluator,
    RhoEvaluator,
    SigmaEvaluator,
    TauDeltaEvaluator,
    canfield_A,
    canfield_B,
    default_omega,
    default_rho,
    ein,
    euler_gamma_sum_identity,
    log_rho,
    omega,
    omega_laplace_numeric,
    ramanujan_Ik,
    ramanujan_rho_series,
    rho,
    rho_laplace_closed,
    rho_laplace_numeric,
    rho_tau_squared,
    sigma_kappa,
    tau_delta,
)
from .stats import (
    PartitionCycleSummary,
    golomb_dickman_rho,
    golomb_dickman_shepp_lloyd,
    longest_cycle_cdf,
    mu_exact,
    sum_log_P,
    sum_log_P_prediction,
    sum_recip_P,
    sum_recip_P_estimate,
)
from .xi import (
    XiValue,
    eerstdick_estimate,
    rho_alladi,
    rho_debruijn_asymptotic,
    rho_sandwich,
    xi,
    xi_integral,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # errors
    "FriableError", "DomainError", "SpecMismatchError",
    "BoundsError", "CoverageError", "CostError", "ToleranceError",
    # dde
    "DdeSpec", "PiecewiseSolution", "AdjointSolution",
    "solve_forward", "solve_adjoint_backward", "scalar_product",
    "ratio_convergence_check", "max_relative_residual",
    # special
    "EULER_GAMMA", "EXP_GAMMA", "EXP_NEG_GAMMA",
    "RhoEvaluator", "OmegaEvaluator", "SigmaEvaluator", "TauDeltaEvaluator",
    "default_rho", "default_omega",
    "rho", "log_rho", "omega", "sigma_kappa", "tau_delta",
    "ein", "rho_laplace_closed", "rho_laplace_numeric",
    "omega_laplace_numeric", "euler_gamma_sum_identity",
    "ramanujan_Ik", "ramanujan_rho_series", "rho_tau_squared",
    "canfield_A", "canfield_B",
    # xi
    "XiValue", "xi", "xi_integral", "rho_debruijn_asymptotic",
    "rho_alladi", "rho_sandwich", "eerstdick_estimate",
    # primes
    "PrimeTable", "sieve_primes", "prime_pi", "largest_factor_sieve",
    "sum_reciprocal_primes", "sum_log_primes", "mertens_product",
    "partial_zeta", "log_zeta_derivatives",
    # counting
    "CountResult", "EstimateBundle", "psi_exact", "psi_bruteforce",
    "phi_exact", "buchstab_identity_check", "hildebrand_identity_check",
    "psi_dickman", "lambda_debruijn", "rankin_alpha", "rankin_alpha_approx",
    "psi_rankin_upper", "psi_binomial_lower", "psi_saddle_ht", "log_psi_Z",
    "phi_buchstab_estimate", "phi_debruijn_refined", "estimate_bundle",
    # stats
    "PartitionCycleSummary", "golomb_dickman_rho",
    "golomb_dickman_shepp_lloyd", "mu_exact", "longest_cycle_cdf",
    "sum_log_P", "sum_log_P_prediction",
    "sum_recip_P", "sum_recip_P_estimate",
]
