"""Largest-prime-factor statistics and longest cycles of random permutations.

The Golomb-Dickman constant lambda is computed by two independent routes
(the Dickman-density integral and the Shepp-Lloyd exponential-integral
form) that must agree to 1e-9.  Permutation statistics are exact rationals
from partition enumeration, which is why they stop at n = 20.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy import integrate

from .errors import CostError, DomainError, ToleranceError
from .primes import largest_factor_sieve
from .special import EULER_GAMMA, default_rho, ein

__all__ = [
    "PartitionCycleSummary",
    "golomb_dickman_rho",
    "golomb_dickman_shepp_lloyd",
    "mu_exact",
    "longest_cycle_cdf",
    "sum_log_P",
    "sum_log_P_prediction",
    "sum_recip_P",
    "sum_recip_P_estimate",
]

MAX_CYCLE_N = 20
MAX_SIEVE_X = 10**7


def golomb_dickman_rho(tail_start: float = 20.0) -> float:
    """lambda = integral of rho(u)/(1+u)^2 over [0, inf), to 1e-10 absolute.

    Panels follow the unit knots of rho; the discarded tail is certified by
    monotonicity: it is below rho(U)/(1+U), which at U=20 is ~1e-30.
    """
    ev = default_rho()
    U = int(tail_start)
    tail_bound = ev.rho(float(U)) / (1.0 + U)
    if tail_bound > 1e-12:
        raise ToleranceError(f"tail at U={U} only bounded by {tail_bound:.2e}")
    total, err = 0.0, 0.0
    for k in range(U):
        val, e = integrate.quad(lambda u: ev.rho(u) / (1.0 + u) ** 2,
                                k, k + 1, epsabs=1e-13, epsrel=1e-13, limit=100)
        total += val
        err += e
    if err + tail_bound > 1e-10:
        raise ToleranceError(f"quadrature error {err:.2e} exceeds the target")
    return total


def _e1(x: float) -> float:
    # exponential integral E_1(x) = Ein(x) - gamma - log x, x > 0
    return ein(x) - EULER_GAMMA - math.log(x)


def golomb_dickman_shepp_lloyd(cutoff: float = 40.0) -> float:
    """lambda = integral of exp(-x - E_1(x)) over [0, inf), to 1e-10 absolute.

    The integrand decays like e^(-x) once E_1 is negligible, so truncating
    at the cutoff leaves less than e^(-cutoff) ~ 4e-18 behind.
    """
    val, err = integrate.quad(lambda x: math.exp(-x - _e1(x)),
                              0.0, cutoff, epsabs=1e-12, epsrel=1e-12, limit=200)
    tail = math.exp(-cutoff)
    if err + tail > 1e-10:
        raise ToleranceError(f"quadrature error {err:.2e} exceeds the target")
    return val


@lru_cache(maxsize=None)
def _golomb_dickman() -> float:
    return golomb_dickman_rho()


@dataclass(frozen=True)
class PartitionCycleSummary:
    """Expected longest-cycle length of a uniform permutation, exactly."""

    n: int
    L_n: Fraction
    mu_n: Fraction


def _partitions(n: int, max_part: int):
    # yields partitions of n as tuples of (part, multiplicity), parts descending
    if n == 0:
        yield ()
        return
    for part in range(min(n, max_part), 0, -1):
        for count in range(n // part, 0, -1):
            for rest in _partitions(n - part * count, part - 1):
                yield ((part, count),) + rest


def _cycle_type_count(n_fact: int, partition) -> int:
    # permutations of S_n with the given cycle type: n! / prod(k^c_k c_k!)
    denom = 1
    for part, count in partition:
        denom *= part**count * math.factorial(count)
    return n_fact // denom


def mu_exact(n: int) -> PartitionCycleSummary:
    """Exact expected longest cycle L_n and mu_n = L_n/n via cycle types.

    Enumerates the partitions of n; the permutation counts per cycle type
    sum to n! exactly, so the result is an exact rational.
    """
    if not (1 <= int(n) == n):
        raise DomainError(f"n must be a positive integer, got {n}")
    n = int(n)
    if n > MAX_CYCLE_N:
        raise CostError(f"partition enumeration guarded at n <= {MAX_CYCLE_N}")
    n_fact = math.factorial(n)
    total = 0
    for part in _partitions(n, n):
        total += part[0][0] * _cycle_type_count(n_fact, part)
    L = Fraction(total, n_fact)
    return PartitionCycleSummary(n=n, L_n=L, mu_n=L / n)


def longest_cycle_cdf(n: int, u: float) -> Fraction:
    """Exact fraction of permutations of n letters with longest cycle <= n/u.

    Converges to rho(u) as n grows (within 3/n on the tested grid).
    """
    if not (1 <= int(n) == n):
        raise DomainError(f"n must be a positive integer, got {n}")
    n = int(n)
    if n > MAX_CYCLE_N:
        raise CostError(f"partition enumeration guarded at n <= {MAX_CYCLE_N}")
    u = float(u)
    if math.isnan(u) or u < 1.0:
        raise DomainError(f"longest_cycle_cdf needs u >= 1, got {u}")
    bound = int(n / u)
    n_fact = math.factorial(n)
    total = sum(_cycle_type_count(n_fact, part)
                for part in _partitions(n, n) if part[0][0] <= bound)
    return Fraction(total, n_fact)


def _lpf(x) -> np.ndarray:
    x = float(x)
    if math.isnan(x) or x < 1.0:
        raise DomainError(f"need x >= 1, got {x}")
    if x > MAX_SIEVE_X:
        raise CostError(f"factor sieve at x={x:g} exceeds the guard {MAX_SIEVE_X:g}")
    return largest_factor_sieve(int(x), max_limit=MAX_SIEVE_X)


def sum_log_P(x) -> float:
    """Exact sum of log P(n) for n <= x, by the largest-factor sieve."""
    lpf = _lpf(x)
    return float(np.sum(np.log(lpf[1:].astype(np.float64))))


def sum_log_P_prediction(x) -> float:
    """Sharpened two-term model lambda*x*log x - lambda*(1-gamma)*x."""
    x = float(x)
    lam = _golomb_dickman()
    return lam * x * math.log(x) - lam * (1.0 - EULER_GAMMA) * x


def sum_recip_P(x) -> float:
    """Exact sum of 1/P(n) for n <= x (P(1)=1 contributes 1)."""
    lpf = _lpf(x)
    return float(np.sum(1.0 / lpf[1:].astype(np.float64)))


def sum_recip_P_estimate(x) -> float:
    """Integral model x * int_2^x rho(log x/log t)/t^2 dt for the 1/P sum.

    Panels split where the argument of rho crosses integers, at t = x^(1/k).
    """
    x = float(x)
    if math.isnan(x) or x < 2.0:
        raise DomainError(f"need x >= 2, got {x}")
    ev = default_rho()
    lx = math.log(x)
    breaks = sorted({2.0, x} | {x ** (1.0 / k) for k in range(1, int(lx / math.log(2.0)) + 1)
                    if x ** (1.0 / k) > 2.0})
    total = 0.0
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        val, _ = integrate.quad(lambda t: ev.rho(lx / math.log(t)) / t**2,
                                lo, hi, epsabs=1e-12, epsrel=1e-10, limit=100)
        total += val
    return x * total
