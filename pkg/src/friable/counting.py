"""Exact friable counts Psi(x,y), sieved counts Phi(x,y), and the estimators.

The exact counters are integer recursions memoized per prime table; every
classical approximation (Dickman, de Bruijn's Lambda, Rankin upper
bounds, the binomial lower bound, the Hildebrand-Tenenbaum saddle point, the
two-term log estimate Z, and the Buchstab estimates for Phi) lives next to
them so they can be compared on one grid.

Counts are exact integers; only logs and quadratures introduce floating
error, and the tolerances in the checks say so explicitly.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import BoundsError, CostError, DomainError, ToleranceError
from .primes import (
    PrimeTable,
    largest_factor_sieve,
    log_zeta_derivatives,
    mertens_product,
    partial_zeta,
    sieve_primes,
)
from .special import EXP_GAMMA, default_rho, omega, rho

__all__ = [
    "CountResult",
    "EstimateBundle",
    "psi_exact",
    "psi_bruteforce",
    "phi_exact",
    "buchstab_identity_check",
    "hildebrand_identity_check",
    "psi_dickman",
    "lambda_debruijn",
    "rankin_alpha",
    "rankin_alpha_approx",
    "psi_rankin_upper",
    "psi_binomial_lower",
    "psi_saddle_ht",
    "log_psi_Z",
    "phi_buchstab_estimate",
    "phi_debruijn_refined",
    "estimate_bundle",
]

PSI_EXACT_MAX_X = 10**9
BRUTE_MAX_X = 10**6
LAMBDA_MAX_X = 10**5
_MEMO_CAPACITY = 1 << 20


@dataclass(frozen=True)
class CountResult:
    """An exact count together with the query that produced it."""

    x: float
    y: float
    u: float
    value: int
    method: str


@dataclass(frozen=True)
class EstimateBundle:
    """Every estimator evaluated at one (x, y), for side-by-side reports.

    ``lambda_`` is de Bruijn's Lambda (None when the jump sum would be too
    costly); ``exact`` is None above the exact-count guard.
    """

    x: float
    y: float
    u: float
    dickman: float
    rankin_upper: float
    binomial_lower: int
    saddle: float
    z_log: float
    lambda_: float | None = None
    exact: int | None = None


def _u_of(x: float, y: float) -> float:
    if x <= 1.0:
        return 0.0
    return math.log(x) / math.log(y) if y > 1.0 else math.inf


def _default_table(limit: float) -> PrimeTable:
    # ceil, not truncate: the table must cover fractional query points
    return sieve_primes(max(2, math.ceil(limit)))


def _psi_counter(table: PrimeTable):
    # per-table memoized recursion; (n, k) keys are canonical so the LRU
    # cache sees one entry per state regardless of the call path
    try:
        return table._psi_counter
    except AttributeError:
        pass
    primes = [int(p) for p in table.primes]

    @lru_cache(maxsize=_MEMO_CAPACITY)
    def rec(n: int, k: int) -> int:
        # count of m <= n whose prime factors lie among the first k primes,
        # all of which are <= n; descends by largest prime factor so the
        # recursion depth is log2(n)
        total = 1
        for j in range(k):
            m = n // primes[j]
            total += rec(m, min(j + 1, bisect_right(primes, m)))
        return total

    table._psi_counter = rec
    return rec


def psi_exact(x, y, table: PrimeTable | None = None,
              max_x: float = PSI_EXACT_MAX_X) -> CountResult:
    """Psi(x, y): number of n <= x whose largest prime factor is <= y.

    Buchstab recursion over one prime at a time, memoized on (floor(x),
    prime index).  Cost grows roughly like x^(2/3) in the worst case; the
    guard refuses x beyond max_x.
    """
    x, y = float(x), float(y)
    if math.isnan(x) or x < 1.0:
        raise DomainError(f"psi_exact needs x >= 1, got {x}")
    if x > max_x:
        raise CostError(f"psi_exact at x={x:g} exceeds the guard {max_x:g}")
    n = int(x)
    if y >= x:
        value = n
    elif y < 2.0:
        value = 1  # only n = 1, since P(1) = 1
    else:
        if table is None:
            table = _default_table(min(x, y))
        if table.limit < min(x, y):
            raise BoundsError(
                f"prime table limit {table.limit} below y={y:g}; sieve further")
        rec = _psi_counter(table)
        primes = table.primes
        k = int(np.searchsorted(primes, math.floor(min(y, n)), side="right"))
        value = rec(n, k)
    return CountResult(x=x, y=y, u=_u_of(x, y), value=value, method="buchstab")


def psi_bruteforce(x, y, max_x: float = BRUTE_MAX_X) -> int:
    """Oracle count by sieving P(n) for every n <= x.  Guarded at max_x."""
    x = float(x)
    if math.isnan(x) or x < 1.0:
        raise DomainError(f"psi_bruteforce needs x >= 1, got {x}")
    if x > max_x:
        raise CostError(f"brute force at x={x:g} exceeds the guard {max_x:g}")
    lpf = largest_factor_sieve(int(x))
    return int(np.count_nonzero(lpf[1:] <= y))


def _phi_counter(table: PrimeTable):
    try:
        return table._phi_counter
    except AttributeError:
        pass
    primes = [int(p) for p in table.primes]
    limit = table.limit
    tprimes = table.primes

    @lru_cache(maxsize=_MEMO_CAPACITY)
    def rec(n: int, a: int) -> int:
        # integers <= n with no prime factor among the first a primes
        if n <= 0:
            return 0
        if a == 0:
            return n
        p = primes[a - 1]
        if p >= n:
            return 1
        if p * p > n and n <= limit:
            # survivors are 1 and the primes in (p_a, n]
            return 1 + int(np.searchsorted(tprimes, n, side="right")) - a
        total = n
        for j in range(a):
            total -= rec(n // primes[j], j)
        return total

    table._phi_counter = rec
    return rec


def phi_exact(x, y, table: PrimeTable | None = None,
              max_x: float = PSI_EXACT_MAX_X) -> CountResult:
    """Phi(x, y): number of n <= x with no prime factor <= y (Legendre).

    Satisfies Phi(x, sqrt(x)) = 1 + pi(x) - pi(sqrt(x)); giving a table
    that covers x (not just y) lets the recursion collapse early.
    """
    x, y = float(x), float(y)
    if math.isnan(x) or x < 1.0:
        raise DomainError(f"phi_exact needs x >= 1, got {x}")
    if x > max_x:
        raise CostError(f"phi_exact at x={x:g} exceeds the guard {max_x:g}")
    n = int(x)
    if y < 2.0:
        value = n  # no primes <= y, nothing is sieved
    else:
        if table is None:
            table = _default_table(min(x, max(y, math.isqrt(n) + 1)))
        if table.limit < min(x, y):
            raise BoundsError(
                f"prime table limit {table.limit} below y={y:g}; sieve further")
        a = table.count(min(y, x))
        value = _phi_counter(table)(n, a)
    return CountResult(x=x, y=y, u=_u_of(x, y), value=value, method="legendre")


def buchstab_identity_check(x, y, z, table: PrimeTable | None = None) -> int:
    """Residual of Psi(x,y) = Psi(x,z) - sum_{y<p<=z} Psi(x/p, p); exactly 0."""
    x, y, z = float(x), float(y), float(z)
    if not (1.0 <= y <= z <= x):
        raise DomainError(f"need 1 <= y <= z <= x, got y={y}, z={z}, x={x}")
    if table is None:
        table = _default_table(z)
    total = psi_exact(x, y, table).value - psi_exact(x, z, table).value
    for p in table.primes_up_to(z):
        p = int(p)
        if p > y:
            total += psi_exact(x / p, p, table).value
    return total


def hildebrand_identity_check(x, y, table: PrimeTable | None = None,
                              max_x: float = 1e5) -> float:
    """Residual of the log-weighted identity for Psi; zero up to float error.

    Psi(x,y) log x = sum_{n in S(x,y)} log(x/n)
                     + sum_{p^m <= x, p <= y} Psi(x/p^m, y) log p,
    where the first sum equals the integral of Psi(t,y)/t over [1, x].
    """
    x, y = float(x), float(y)
    if math.isnan(x) or x < 1.0 or y < 2.0:
        raise DomainError(f"need x >= 1 and y >= 2, got x={x}, y={y}")
    if x > max_x:
        raise CostError(f"identity check needs enumeration; x={x:g} > {max_x:g}")
    if table is None:
        table = _default_table(min(x, y))
    n = int(x)
    lpf = largest_factor_sieve(n)
    members = np.flatnonzero(lpf[: n + 1] <= y)[1:]  # drops index 0
    left = psi_exact(x, y, table).value * math.log(x)
    smooth_sum = len(members) * math.log(x) - math.fsum(np.log(members))
    prime_sum = 0.0
    for p in table.primes_up_to(min(y, x)):
        p = int(p)
        pm = p
        while pm <= x:
            prime_sum += psi_exact(x / pm, y, table).value * math.log(p)
            pm *= p
    return left - smooth_sum - prime_sum


def psi_dickman(x, y) -> float:
    """Dickman approximation x * rho(log x / log y)."""
    x, y = float(x), float(y)
    if math.isnan(y) or y < 2.0:
        raise DomainError(f"psi_dickman needs y >= 2, got {y}")
    if x < 1.0:
        return 0.0
    return x * rho(_u_of(x, y))


def _rho_vec(u: np.ndarray) -> np.ndarray:
    # vectorized Dickman rho; closed forms below 2, solved pieces beyond
    ev = default_rho()
    out = np.ones_like(u)
    out[u < 0.0] = 0.0
    mid = (u > 1.0) & (u <= 2.0)
    out[mid] = 1.0 - np.log(u[mid])
    high = u > 2.0
    if np.any(high):
        ev._ensure(float(u[high].max()))
        out[high] = ev.solution.evaluate(u[high])
    return out


_GAUSS8 = np.polynomial.legendre.leggauss(8)
_GAUSS12 = np.polynomial.legendre.leggauss(12)


def _lambda_continuous(x: float, y: float, rule) -> float:
    # integral of rho(log(x/t)/log y) * floor(t) / t^2 over [1, x], panels
    # split at integers and at the rho kinks t = x * y^(-j)
    nodes, weights = rule
    breaks = set(range(1, int(x) + 1)) | {x}
    j = 1
    while x * y ** (-j) > 1.0:
        breaks.add(x * y ** (-j))
        j += 1
    pts = np.array(sorted(breaks))
    lo, hi = pts[:-1], pts[1:]
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    t = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
    vals = _rho_vec(np.log(x / t) / math.log(y)) * np.floor(t + 1e-12) / t**2
    return float(np.dot(vals.reshape(len(lo), -1) @ weights, half))


def lambda_debruijn(x, y, max_x: float = LAMBDA_MAX_X) -> float:
    """De Bruijn's Lambda(x, y): the Stieltjes smoothing of the Dickman model.

    x * integral rho(log(x/t)/log y) d([t]/t), split into the jump part
    (mass 1/n at each integer n) and the continuous part -[t]/t^2 dt.  At
    integer x the jump at t=x counts fully (right-limit convention).  The
    jump sum costs one rho evaluation per integer below x, hence the guard.
    """
    x, y = float(x), float(y)
    if math.isnan(x) or x < 1.0 or y < 2.0:
        raise DomainError(f"need x >= 1 and y >= 2, got x={x}, y={y}")
    if x > max_x:
        raise CostError(f"Lambda jump sum at x={x:g} exceeds the guard {max_x:g}")
    n = np.arange(1, int(x) + 1, dtype=np.float64)
    if x <= y:
        return float(len(n))
    jump = float(np.dot(_rho_vec(np.log(x / n) / math.log(y)), 1.0 / n))
    cont = _lambda_continuous(x, y, _GAUSS8)
    refined = _lambda_continuous(x, y, _GAUSS12)
    if abs(refined - cont) > 1e-6 * x:
        raise ToleranceError(
            f"Lambda quadrature did not settle: {cont!r} vs {refined!r}")
    return x * (jump - refined)


def rankin_alpha(x, y, table: PrimeTable | None = None) -> float:
    """Saddle point alpha(x, y): root of sum_{p<=y} log p/(p^a - 1) = log x.

    Bracket by doubling/halving, then Newton with the analytic derivative,
    falling back to bisection when a step leaves the bracket.  Residual is
    driven below 1e-10 * log x.
    """
    x, y = float(x), float(y)
    if math.isnan(x) or x <= 1.0 or y < 2.0:
        raise DomainError(f"need x > 1 and y >= 2, got x={x}, y={y}")
    if table is None:
        table = _default_table(y)
    lx = math.log(x)

    def g(a: float) -> float:
        return -log_zeta_derivatives(a, y, table, 1) - lx

    lo, hi = 1e-3, 2.0
    while g(lo) < 0.0:
        lo /= 8.0
        if lo < 1e-300:
            raise ToleranceError("rankin_alpha bracket collapsed at 0")
    while g(hi) > 0.0:
        hi *= 2.0
        if hi > 1e6:
            raise ToleranceError("rankin_alpha bracket ran away")
    a = 0.5 * (lo + hi)
    for _ in range(200):
        val = g(a)
        if abs(val) <= 1e-10 * lx:
            return a
        if val > 0.0:
            lo = a
        else:
            hi = a
        step = val / log_zeta_derivatives(a, y, table, 2)  # g' = -phi_2
        nxt = a + step
        a = nxt if lo < nxt < hi else 0.5 * (lo + hi)
    raise ToleranceError(f"rankin_alpha did not converge at x={x:g}, y={y:g}")


def rankin_alpha_approx(x, y) -> float:
    """Asymptotic companion log(1 + y/log x)/log y for comparing with alpha."""
    x, y = float(x), float(y)
    if x <= 1.0 or y <= 1.0:
        raise DomainError(f"need x > 1 and y > 1, got x={x}, y={y}")
    return math.log1p(y / math.log(x)) / math.log(y)


def psi_rankin_upper(x, y, table: PrimeTable | None = None,
                     sigma: float | None = None) -> float:
    """Rankin bound x^sigma * zeta(sigma, y); an upper bound for every sigma > 0.

    Defaults to the optimizing sigma = rankin_alpha(x, y).
    """
    x, y = float(x), float(y)
    if math.isnan(y) or y < 2.0:
        raise DomainError(f"psi_rankin_upper needs y >= 2, got {y}")
    if table is None:
        table = _default_table(y)
    if sigma is None:
        sigma = rankin_alpha(x, y, table)
    if not sigma > 0.0:
        raise DomainError(f"sigma must be positive, got {sigma}")
    return x**sigma * partial_zeta(sigma, y, table)


def psi_binomial_lower(x, y, table: PrimeTable | None = None,
                       max_n: int = 100_000) -> int:
    """Lower bound C(floor(u) + pi(y), pi(y)) <= Psi(x, y).

    Counts the products of at most floor(u) primes <= y with multiplicity;
    each such product is <= y^floor(u) <= x.
    """
    x, y = float(x), float(y)
    if math.isnan(x) or x < 1.0 or y < 2.0:
        raise DomainError(f"need x >= 1 and y >= 2, got x={x}, y={y}")
    if table is None:
        table = _default_table(y)
    k = int(_u_of(x, y)) if x > 1.0 else 0
    py = table.count(y)
    if k + py > max_n:
        raise CostError(f"binomial C({k + py}, {py}) exceeds the width guard")
    return math.comb(k + py, py)


def psi_saddle_ht(x, y, table: PrimeTable | None = None) -> float:
    """Saddle-point estimate x^a zeta(a,y) / (a sqrt(2 pi phi_2(a,y))).

    phi_2 is the second derivative of log zeta(s, y) at s = a; the quotient
    psi_rankin_upper(alpha) / psi_saddle_ht is a sqrt(2 pi phi_2) exactly.
    """
    x, y = float(x), float(y)
    if math.isnan(y) or y < 2.0:
        raise DomainError(f"psi_saddle_ht needs y >= 2, got {y}")
    if math.isnan(x) or x < y:
        raise DomainError(f"psi_saddle_ht needs x >= y, got x={x}, y={y}")
    if table is None:
        table = _default_table(y)
    a = rankin_alpha(x, y, table)
    phi2 = log_zeta_derivatives(a, y, table, 2)
    return x**a * partial_zeta(a, y, table) / (a * math.sqrt(2.0 * math.pi * phi2))


def log_psi_Z(x, y) -> float:
    """The two-term estimate Z of log Psi(x, y), uniform over x >= y >= 2:

    Z = (log x/log y) log(1 + y/log x) + (y/log y) log(1 + log x/y).
    """
    x, y = float(x), float(y)
    if math.isnan(x) or math.isnan(y) or not (x >= y >= 2.0):
        raise DomainError(f"log_psi_Z needs x >= y >= 2, got x={x}, y={y}")
    lx, ly = math.log(x), math.log(y)
    return (lx / ly) * math.log1p(y / lx) + (y / ly) * math.log1p(lx / y)


def phi_buchstab_estimate(x, y, table: PrimeTable | None = None) -> float:
    """Buchstab's approximation x e^gamma omega(u) prod_{p<y} (1 - 1/p)."""
    x, y = float(x), float(y)
    if math.isnan(y) or y < 2.0:
        raise DomainError(f"need y >= 2, got {y}")
    u = _u_of(x, y)
    if u < 1.0:
        raise DomainError(f"need u = log x/log y >= 1, got {u:g}")
    if table is None:
        table = _default_table(y)
    return x * EXP_GAMMA * omega(u) * mertens_product(y, table)


def phi_debruijn_refined(x, y, table: PrimeTable | None = None) -> float:
    """Refinement x prod_{p<y}(1-1/p) e^gamma log y int_1^u y^(t-u) omega(t) dt.

    The integrand is evaluated on integer-aligned panels (omega has corners
    at small integers) with a fixed Gauss rule per panel.
    """
    x, y = float(x), float(y)
    if math.isnan(y) or y < 2.0:
        raise DomainError(f"need y >= 2, got {y}")
    u = _u_of(x, y)
    if u < 1.0:
        raise DomainError(f"need u = log x/log y >= 1, got {u:g}")
    if table is None:
        table = _default_table(y)
    nodes, weights = _GAUSS12
    ly = math.log(y)
    total = 0.0
    k = 1.0
    while k < u:
        hi = min(k + 1.0, u)
        half, mid = 0.5 * (hi - k), 0.5 * (hi + k)
        t = mid + half * nodes
        vals = np.exp((t - u) * ly) * np.array([omega(tt) for tt in t])
        total += half * float(np.dot(weights, vals))
        k += 1.0
    return x * mertens_product(y, table) * EXP_GAMMA * ly * total


def estimate_bundle(x, y, table: PrimeTable | None = None,
                    exact_max_x: float = PSI_EXACT_MAX_X,
                    lambda_max_x: float = LAMBDA_MAX_X) -> EstimateBundle:
    """Evaluate every Psi estimator at (x, y); cost-guarded fields become None."""
    x, y = float(x), float(y)
    if math.isnan(x) or math.isnan(y) or not (x >= y >= 2.0):
        raise DomainError(f"need x >= y >= 2, got x={x}, y={y}")
    if table is None:
        table = _default_table(min(x, max(y, math.sqrt(x) + 1.0)))
    exact = psi_exact(x, y, table).value if x <= exact_max_x else None
    lam = lambda_debruijn(x, y) if x <= lambda_max_x else None
    return EstimateBundle(
        x=x,
        y=y,
        u=_u_of(x, y),
        dickman=psi_dickman(x, y),
        rankin_upper=psi_rankin_upper(x, y, table),
        binomial_lower=psi_binomial_lower(x, y, table),
        saddle=psi_saddle_ht(x, y, table),
        z_log=log_psi_Z(x, y),
        lambda_=lam,
        exact=exact,
    )
