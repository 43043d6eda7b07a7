"""Prime tables: segmented sieve plus prefix sums used all over the package.

A PrimeTable is an immutable list of primes up to a limit together with three
lazily built prefix caches: sum of 1/p, sum of log p, and the running Mertens
product prod(1 - 1/p).  The caches are accumulated in extended precision so
queries stay within 1e-12 relative error even at the default limit guard of
1e8, and they are persisted to the cache directory keyed by the table limit.
"""

from __future__ import annotations

import math
import os
import tempfile
from dataclasses import dataclass, field

import numpy as np

from .caching import FORMAT_VERSION, cache_dir
from .errors import BoundsError, CostError, DomainError

DEFAULT_MAX_LIMIT = 10**8
DEFAULT_SEGMENT_SIZE = 1 << 20

__all__ = [
    "PrimeTable",
    "sieve_primes",
    "prime_pi",
    "sum_reciprocal_primes",
    "sum_log_primes",
    "mertens_product",
    "partial_zeta",
    "log_zeta_derivatives",
    "largest_factor_sieve",
]


@dataclass(eq=False)
class PrimeTable:
    """Primes up to ``limit`` with cached prefix sums.

    The prefix arrays are aligned with ``primes``: entry i holds the sum (or
    product) over primes[0..i].  They are built on first use and reused.
    """

    limit: int
    primes: np.ndarray
    _prefixes: dict | None = field(default=None, repr=False)

    def __post_init__(self):
        self.primes = np.asarray(self.primes, dtype=np.int64)
        self.primes.flags.writeable = False

    def count(self, x) -> int:
        """Number of table primes <= x (x may exceed limit; no guard here)."""
        return int(np.searchsorted(self.primes, math.floor(x), side="right"))

    def primes_up_to(self, y) -> np.ndarray:
        return self.primes[: self.count(y)]

    # -- prefix caches -----------------------------------------------------

    def _cache_path(self):
        return cache_dir() / f"prime-prefix-{self.limit}.npz"

    def _load_prefixes(self) -> dict | None:
        path = self._cache_path()
        if not path.is_file():
            return None
        try:
            with np.load(path) as data:
                if int(data["format_version"]) != FORMAT_VERSION:
                    return None
                if int(data["limit"]) != self.limit:
                    return None
                out = {k: data[k] for k in ("recip", "logp", "mertens")}
        except (OSError, KeyError, ValueError):
            return None
        if any(len(v) != len(self.primes) for v in out.values()):
            return None
        return out

    def _store_prefixes(self, prefixes: dict) -> None:
        path = self._cache_path()
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".npz")
            with os.fdopen(fd, "wb") as fh:
                np.savez(
                    fh,
                    format_version=FORMAT_VERSION,
                    limit=self.limit,
                    **prefixes,
                )
            os.replace(tmp, path)
        except OSError:
            pass  # cache is an optimization; never fail a query over it

    def _build_prefixes(self) -> dict:
        p = self.primes.astype(np.longdouble)
        recip = np.cumsum(1.0 / p)
        logp = np.cumsum(np.log(p))
        mertens = np.cumprod(1.0 - 1.0 / p)
        return {
            "recip": recip.astype(np.float64),
            "logp": logp.astype(np.float64),
            "mertens": mertens.astype(np.float64),
        }

    @property
    def prefixes(self) -> dict:
        if self._prefixes is None:
            loaded = self._load_prefixes()
            if loaded is None:
                loaded = self._build_prefixes()
                self._store_prefixes(loaded)
            self._prefixes = loaded
        return self._prefixes


def sieve_primes(
    limit: int,
    segment_size: int | None = None,
    max_limit: int | None = None,
) -> PrimeTable:
    """Segmented sieve of Eratosthenes up to and including ``limit``."""
    limit = int(limit)
    seg = int(segment_size or DEFAULT_SEGMENT_SIZE)
    cap = int(max_limit or DEFAULT_MAX_LIMIT)
    if limit < 2:
        raise DomainError(f"sieve limit must be >= 2, got {limit}")
    if limit > cap:
        raise BoundsError(f"sieve limit {limit} exceeds the guard {cap}")
    if seg < 64:
        raise DomainError(f"segment size too small: {seg}")

    root = math.isqrt(limit)
    base = _simple_sieve(max(root, 2))
    if limit <= seg:
        return PrimeTable(limit, _simple_sieve(limit))

    chunks = [base[base <= limit]]
    lo = root + 1
    while lo <= limit:
        hi = min(lo + seg - 1, limit)
        flags = np.ones(hi - lo + 1, dtype=bool)
        for p in base:
            p = int(p)
            start = max(p * p, ((lo + p - 1) // p) * p)
            if start > hi:
                continue
            flags[start - lo :: p] = False
        chunks.append(np.flatnonzero(flags).astype(np.int64) + lo)
        lo = hi + 1
    return PrimeTable(limit, np.concatenate(chunks))


def _simple_sieve(limit: int) -> np.ndarray:
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags).astype(np.int64)


def _check_range(y, table: PrimeTable, lo=2.0) -> None:
    if not np.isfinite(y) or y < lo:
        raise DomainError(f"argument must be finite and >= {lo}, got {y}")
    if y > table.limit:
        raise BoundsError(
            f"query at {y} exceeds table limit {table.limit}; sieve further"
        )


def prime_pi(x, table: PrimeTable) -> int:
    """pi(x): number of primes <= x.  Requires x <= table.limit."""
    if x < 0 or not np.isfinite(x):
        raise DomainError(f"prime_pi needs finite x >= 0, got {x}")
    if x > table.limit:
        raise BoundsError(
            f"prime_pi({x}) exceeds table limit {table.limit}; sieve further"
        )
    return table.count(x)


def sum_reciprocal_primes(y, table: PrimeTable) -> float:
    """Sum of 1/p over primes p <= y."""
    _check_range(y, table)
    return float(table.prefixes["recip"][table.count(y) - 1])


def sum_log_primes(y, table: PrimeTable) -> float:
    """Chebyshev theta: sum of log p over primes p <= y."""
    _check_range(y, table)
    return float(table.prefixes["logp"][table.count(y) - 1])


def mertens_product(y, table: PrimeTable) -> float:
    """prod(1 - 1/p) over primes p < y (strict; p = y is excluded)."""
    _check_range(y, table)
    n_below = int(np.searchsorted(table.primes, y, side="left"))
    if n_below == 0:
        return 1.0
    return float(table.prefixes["mertens"][n_below - 1])


def partial_zeta(s, y, table: PrimeTable) -> float:
    """Truncated Euler product prod_{p<=y} (1 - p^{-s})^{-1}; needs s > 0."""
    if not (s > 0):
        raise DomainError(f"partial_zeta needs s > 0, got {s}")
    _check_range(y, table)
    p = table.primes_up_to(y).astype(np.float64)
    log_terms = np.log1p(-np.exp(-s * np.log(p)))
    return float(np.exp(-np.sum(log_terms, dtype=np.longdouble)))


def log_zeta_derivatives(s, y, table: PrimeTable, k: int) -> float:
    """k-th derivative (k in {1, 2}) of log of the truncated Euler product.

    phi_1(s, y) = -sum log p / (p^s - 1)
    phi_2(s, y) =  sum (log p)^2 p^s / (p^s - 1)^2
    """
    if k not in (1, 2):
        raise DomainError(f"derivative order must be 1 or 2, got {k}")
    if not (s > 0):
        raise DomainError(f"log_zeta_derivatives needs s > 0, got {s}")
    _check_range(y, table)
    logp = np.log(table.primes_up_to(y).astype(np.float64))
    growth = np.expm1(s * logp)  # p^s - 1 without cancellation for small s
    if k == 1:
        terms = -logp / growth
    else:
        terms = (logp / growth) ** 2 * (growth + 1.0)
    return float(np.sum(terms, dtype=np.longdouble))


def largest_factor_sieve(limit: int, max_limit: int = 10**7) -> np.ndarray:
    """Array lpf with lpf[n] = P(n), the largest prime factor, for 0 <= n <= limit.

    P(1) = 1 by convention, P(0) = 0.  Built by overwriting multiples in
    increasing prime order, so the last write at each index wins.
    """
    limit = int(limit)
    if limit < 1:
        raise DomainError(f"sieve limit must be >= 1, got {limit}")
    if limit > max_limit:
        raise CostError(f"factor sieve at {limit} exceeds the guard {max_limit}")
    lpf = np.zeros(limit + 1, dtype=np.int32)
    lpf[1] = 1
    if limit >= 2:
        for p in sieve_primes(limit).primes:
            lpf[p::p] = p
    return lpf
