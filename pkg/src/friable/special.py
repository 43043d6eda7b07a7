"""Named evaluators for the Dickman rho family and its companions.

Everything here sits on top of the delay-equation engine in ``dde``:

* ``RhoEvaluator`` -- the Dickman-de Bruijn density rho(u), with the exact
  conventions rho = 0 for u < 0, rho = 1 on [0, 1] and the closed form
  1 - log u on [1, 2].
* ``OmegaEvaluator`` -- the Buchstab function omega(u), computed through the
  centered difference D(u) = omega(u) - e^{-gamma} so the exponentially small
  oscillation around the limit stays resolvable long after omega itself
  flattens out in double precision.
* ``TauDeltaEvaluator`` / ``SigmaEvaluator`` -- the one-parameter families
  tau_delta (density of integers free of small primes outside a delta-fraction
  of residues) and sigma_kappa (sieve auxiliary family, sigma_1 = rho).
* scalar helpers: Ein, the Laplace transform of rho in closed and numeric
  form, the e^gamma summation identity, Ramanujan's nested-integral series,
  and Canfield's step-function brackets for rho.

Evaluators are immutable in the sense that lazy coverage growth replaces the
underlying solution object in a single attribute assignment; concurrent
readers either see the old coverage or the new one, never a half-built state.
"""

import collections
import math
import os

import numpy as np
from mpmath import mp, mpf
from numpy.polynomial import chebyshev
from scipy import integrate
from scipy.interpolate import CubicSpline

from . import caching
from .dde import DdeSpec, PiecewiseSolution, solve_forward
from .errors import BoundsError, DomainError, ToleranceError

__all__ = [
    "EULER_GAMMA",
    "EXP_GAMMA",
    "EXP_NEG_GAMMA",
    "RhoEvaluator",
    "OmegaEvaluator",
    "TauDeltaEvaluator",
    "SigmaEvaluator",
    "default_rho",
    "default_omega",
    "rho",
    "log_rho",
    "omega",
    "tau_delta",
    "sigma_kappa",
    "rho_tau_squared",
    "ein",
    "rho_laplace_closed",
    "rho_laplace_numeric",
    "omega_laplace_numeric",
    "euler_gamma_sum_identity",
    "ramanujan_Ik",
    "ramanujan_rho_series",
    "canfield_A",
    "canfield_B",
]

# Standard constants (Euler-Mascheroni and exponentials thereof), fixed
# high-precision literals rounded to float64.
EULER_GAMMA = 0.5772156649015328606065120900824024
EXP_GAMMA = 1.7810724179901979852365041031071795
EXP_NEG_GAMMA = 0.5614594835668851698241432147908808

_GROWTH_FLOOR = 32.0  # smallest coverage worth building; startup cost is tiny


def _atomic_save(solution, path):
    # best effort; a shared cache dir may be read-only or racy
    try:
        tmp = f"{path}.tmp.{os.getpid()}"
        solution.save(tmp)
        os.replace(tmp, path)
    except OSError:
        pass


def _try_load(path):
    try:
        return PiecewiseSolution.load(path)
    except (OSError, ValueError, KeyError):
        return None


class RhoEvaluator:
    """Dickman-de Bruijn density rho(u).

    Conventions: rho(u) = 0 for u < 0, rho(u) = 1 on [0, 1], and the closed
    form 1 - log u on [1, 2].  Beyond u = 2 values come from the delay
    equation u f' + f(u-1) = 0 integrated from initial data identically 1 on
    [0, 1]; the solver reproduces the closed form on [1, 2] to working
    precision, so the handoff at u = 2 is seamless.

    Coverage grows lazily (geometric growth with a floor of 32) up to
    ``u_max`` and is persisted to the shared disk cache so later sessions
    skip the extended-precision rebuild.  ``log_rho`` stays meaningful to the
    far end of the range where rho itself underflows float64 (u ~ 171).
    """

    def __init__(self, u_max: float = 500.0, m: int = 30, use_disk_cache: bool = True):
        if not u_max >= 4.0:
            raise DomainError(f"u_max={u_max} too small; need at least 4")
        self.u_max = float(u_max)
        self.m = int(m)
        self.use_disk_cache = bool(use_disk_cache)
        self._spec = DdeSpec(a=0.0, b=1.0, u0=1.0, initial=[1.0], m=self.m)
        self._solution = _try_load(self._cache_path()) if use_disk_cache else None

    def _cache_path(self):
        return os.path.join(caching.cache_dir(), f"rho-m{self.m}.json")

    @property
    def coverage(self) -> float:
        return 2.0 if self._solution is None else self._solution.coverage

    @property
    def solution(self) -> PiecewiseSolution:
        return self._ensure(min(_GROWTH_FLOOR, self.u_max))

    def _ensure(self, u: float) -> PiecewiseSolution:
        if u > self.u_max * (1 + 1e-12):
            raise BoundsError(
                f"u={u} beyond configured u_max={self.u_max}; "
                "construct the evaluator with a larger u_max"
            )
        cur = self._solution
        if cur is not None and u <= cur.coverage:
            return cur
        grown = 0.0 if cur is None else 1.5 * cur.coverage
        target = min(self.u_max, max(_GROWTH_FLOOR, float(math.ceil(u)) + 8.0, grown))
        sol = solve_forward(self._spec, target)
        if self.use_disk_cache:
            _atomic_save(sol, self._cache_path())
        self._solution = sol
        return sol

    def rho(self, u: float) -> float:
        u = float(u)
        if math.isnan(u):
            raise DomainError("u is NaN")
        if u < 0.0:
            return 0.0
        if u <= 1.0:
            return 1.0
        if u <= 2.0:
            return 1.0 - math.log(u)
        return float(self._ensure(u).evaluate(u))

    __call__ = rho

    def log_rho(self, u: float) -> float:
        """log rho(u); -inf for u < 0."""
        u = float(u)
        if math.isnan(u):
            raise DomainError("u is NaN")
        if u < 0.0:
            return -math.inf
        if u <= 1.0:
            return 0.0
        if u <= 2.0:
            return math.log(1.0 - math.log(u))
        sign, lg = self._ensure(u).evaluate_log(u)
        if sign <= 0:
            # mathematically impossible (rho > 0); would mean render noise
            # exceeded the piece scale
            raise ToleranceError(f"solution sign anomaly at u={u}")
        return lg


def _omega_difference_series(n):
    # Taylor coefficients about u = 1.5 of 1/u - e^{-gamma}, in the active
    # mp context (called by the solver inside its working precision)
    base = mpf(3) / 2
    coeffs = [(-1) ** j / base ** (j + 1) for j in range(max(n, 1))]
    coeffs[0] -= mp.exp(-mp.euler)
    return coeffs


class OmegaEvaluator:
    """Buchstab function omega(u) for u >= 1.

    omega = 1/u on [1, 2] exactly.  Beyond, the evaluator integrates the
    delay equation for the difference D(u) = omega(u) - e^{-gamma}; constants
    solve u f' + f - f(u-1) = 0, so D satisfies the same equation as omega
    with initial data 1/u - e^{-gamma} on [1, 2].  Tracking D instead of
    omega keeps |omega - e^{-gamma}| ~ 1/[u]! resolvable in the scaled
    piecewise representation, which is what makes the sign changes of
    e^gamma omega - 1 detectable out to u ~ 30.
    """

    def __init__(self, u_max: float = 500.0, m: int = 30, use_disk_cache: bool = True):
        if not u_max >= 4.0:
            raise DomainError(f"u_max={u_max} too small; need at least 4")
        self.u_max = float(u_max)
        self.m = int(m)
        self.use_disk_cache = bool(use_disk_cache)
        coeffs = [(-1.0) ** j / 2.0 ** (j + 1) for j in range(self.m + 1)]
        coeffs[0] -= EXP_NEG_GAMMA
        self._spec = DdeSpec(
            a=1.0,
            b=-1.0,
            u0=2.0,
            initial=coeffs,
            m=self.m,
            initial_series=_omega_difference_series,
            data_singularity=0.0,  # pole of 1/u propagates along the delay chain
        )
        self._solution = _try_load(self._cache_path()) if use_disk_cache else None

    def _cache_path(self):
        return os.path.join(caching.cache_dir(), f"omega-diff-m{self.m}.json")

    @property
    def coverage(self) -> float:
        return 3.0 if self._solution is None else self._solution.coverage

    @property
    def solution(self) -> PiecewiseSolution:
        return self._ensure(min(_GROWTH_FLOOR, self.u_max))

    def _ensure(self, u: float) -> PiecewiseSolution:
        if u > self.u_max * (1 + 1e-12):
            raise BoundsError(
                f"u={u} beyond configured u_max={self.u_max}; "
                "construct the evaluator with a larger u_max"
            )
        cur = self._solution
        if cur is not None and u <= cur.coverage:
            return cur
        grown = 0.0 if cur is None else 1.5 * cur.coverage
        target = min(self.u_max, max(_GROWTH_FLOOR, float(math.ceil(u)) + 8.0, grown))
        sol = solve_forward(self._spec, target)
        if self.use_disk_cache:
            _atomic_save(sol, self._cache_path())
        self._solution = sol
        return sol

    def omega_minus_limit(self, u: float) -> float:
        """D(u) = omega(u) - e^{-gamma}; exact closed form on [1, 2]."""
        u = float(u)
        if math.isnan(u) or u < 1.0:
            raise DomainError(f"omega needs u >= 1, got {u}")
        if u <= 2.0:
            return 1.0 / u - EXP_NEG_GAMMA
        return float(self._ensure(u).evaluate(u))

    def omega(self, u: float) -> float:
        u = float(u)
        if math.isnan(u) or u < 1.0:
            raise DomainError(f"omega needs u >= 1, got {u}")
        if u <= 2.0:
            return 1.0 / u
        return EXP_NEG_GAMMA + self.omega_minus_limit(u)

    __call__ = omega


class TauDeltaEvaluator:
    """tau_delta(u): 1 on [0, 1], then u tau' = -delta tau(u - 1).

    For delta < 1 the solution decays only algebraically (~ u^{-delta}); the
    forward integration then carries no deep cancellation and a fixed modest
    working precision suffices, which keeps construction cheap (hence no disk
    cache).  delta = 1 reduces to rho and is handled at the solver's own
    suggested precision.
    """

    def __init__(self, delta: float, u_max: float = 500.0, m: int = 30):
        delta = float(delta)
        if not 0.0 < delta <= 1.0:
            raise DomainError(f"delta={delta} outside (0, 1]")
        if not u_max >= 4.0:
            raise DomainError(f"u_max={u_max} too small; need at least 4")
        self.delta = delta
        self.u_max = float(u_max)
        self.m = int(m)
        self._spec = DdeSpec(a=0.0, b=delta, u0=1.0, initial=[1.0], m=self.m)
        # slow-mode content 1 - delta vanishes only at delta = 1
        self._working_dps = None if delta > 1.0 - 1e-6 else 60
        self._solution = None

    @property
    def coverage(self) -> float:
        return 1.0 if self._solution is None else self._solution.coverage

    @property
    def solution(self) -> PiecewiseSolution:
        return self._ensure(min(_GROWTH_FLOOR, self.u_max))

    def _ensure(self, u: float) -> PiecewiseSolution:
        if u > self.u_max * (1 + 1e-12):
            raise BoundsError(
                f"u={u} beyond configured u_max={self.u_max}; "
                "construct the evaluator with a larger u_max"
            )
        cur = self._solution
        if cur is not None and u <= cur.coverage:
            return cur
        grown = 0.0 if cur is None else 1.5 * cur.coverage
        target = min(self.u_max, max(_GROWTH_FLOOR, float(math.ceil(u)) + 8.0, grown))
        self._solution = solve_forward(self._spec, target, working_dps=self._working_dps)
        return self._solution

    def tau(self, u: float) -> float:
        u = float(u)
        if math.isnan(u) or u < 0.0:
            raise DomainError(f"tau_delta needs u >= 0, got {u}")
        if u <= 1.0:
            return 1.0
        return float(self._ensure(u).evaluate(u))

    __call__ = tau


def _binomial_initial(kappa_int: int):
    # u^{kappa-1} = (1 + (u-1))^{kappa-1}, exact for integer order
    return [float(math.comb(kappa_int - 1, j)) for j in range(kappa_int)]


class SigmaEvaluator:
    """Sieve auxiliary family sigma_kappa(u), sigma_1 = rho.

    sigma_kappa(u) = u^{kappa-1} on (0, 1], then
    u sigma' + (1 - kappa) sigma + kappa sigma(u - 1) = 0.

    Integer kappa: the initial segment is the exact binomial polynomial
    (1 + (u-1))^{kappa-1}, analyticity holds piece by piece, and values carry
    the engine's full accuracy over the whole configured range.

    Non-integer kappa: u^{kappa-1} has a branch point at u = 0 that the delay
    chain drags to every knot (piece k is singular like (u-k)^{kappa+k-1} at
    its left end), so piecewise Taylor expansions have convergence ratio 1
    and the extended-precision engine does not apply.  Instead the integral
    form  u^{1-kappa} sigma(u) = const - kappa int t^{-kappa} sigma(t-1) dt
    is stepped interval by interval on meshes graded toward the singular
    knot, with cubic-spline interpolants between nodes.  That path carries
    absolute (not relative) accuracy around 1e-8, degrading for kappa < 0.2,
    and is capped at u = 12; sigma_kappa decays below its own accuracy floor
    well before that, so deeper continuation would return noise anyway.
    """

    #: coverage cap for the non-integer (graded-spline) path
    SPLINE_U_CAP = 12.0
    _SPLINE_NODES = 600

    def __init__(self, kappa: float, u_max: float = 500.0, m: int = 30,
                 use_disk_cache: bool = True):
        kappa = float(kappa)
        if math.isnan(kappa) or kappa <= 0.0:
            raise DomainError(f"kappa={kappa} must be positive")
        if not u_max >= 4.0:
            raise DomainError(f"u_max={u_max} too small; need at least 4")
        self.kappa = kappa
        self.m = int(m)
        self.use_disk_cache = bool(use_disk_cache)
        self._solution = None
        self._tables = []
        if kappa.is_integer():
            k = int(kappa)
            if k - 1 > self.m:
                raise DomainError(f"integer kappa={k} needs degree m >= {k - 1}")
            self.u_max = float(u_max)
            self._spec = DdeSpec(
                a=1.0 - kappa, b=kappa, u0=1.0, initial=_binomial_initial(k), m=self.m
            )
            if use_disk_cache:
                self._solution = _try_load(self._cache_path())
        else:
            self.u_max = min(float(u_max), self.SPLINE_U_CAP)
            self._spec = None

    def _cache_path(self):
        return os.path.join(caching.cache_dir(), f"sigma-k{int(self.kappa)}-m{self.m}.json")

    @property
    def coverage(self) -> float:
        if self._spec is not None:
            return 1.0 if self._solution is None else self._solution.coverage
        return 1.0 + len(self._tables)

    @property
    def solution(self):
        """Piecewise solution for integer order; None on the spline path."""
        if self._spec is None:
            return None
        return self._ensure_dde(min(_GROWTH_FLOOR, self.u_max))

    def _ensure_dde(self, u: float) -> PiecewiseSolution:
        cur = self._solution
        if cur is not None and u <= cur.coverage:
            return cur
        grown = 0.0 if cur is None else 1.5 * cur.coverage
        target = min(self.u_max, max(_GROWTH_FLOOR, float(math.ceil(u)) + 8.0, grown))
        sol = solve_forward(self._spec, target)
        if self.use_disk_cache:
            _atomic_save(sol, self._cache_path())
        self._solution = sol
        return sol

    def _ensure_tables(self, u: float):
        # splines live in the offset variable s = u - k so the graded mesh
        # near the singular knot is not flattened by float64 cancellation
        need = int(math.ceil(u - 1.0 - 1e-12))
        gauss_x, gauss_w = np.polynomial.legendre.leggauss(12)
        while len(self._tables) < need:
            k = len(self._tables) + 1  # next piece lives on [k, k+1]
            kap = self.kappa
            alpha = kap + k - 1.0  # singular exponent at the left knot
            grade = 1.0 if alpha >= 4.0 else min(40.0, math.ceil(4.5 / alpha))
            s = (np.arange(self._SPLINE_NODES + 1) / self._SPLINE_NODES) ** grade
            vals = np.empty_like(s)
            if k == 1:
                # t^-kap (t-1)^{kap-1} dt turns smooth under v = (t-1)^kap
                v = s ** kap
                acc = 0.0
                vals[0] = 1.0
                for j in range(1, s.size):
                    half = 0.5 * (v[j] - v[j - 1])
                    mid = 0.5 * (v[j] + v[j - 1])
                    vv = mid + half * gauss_x
                    acc += half * float(np.dot(gauss_w, (1.0 + vv ** (1.0 / kap)) ** -kap))
                    vals[j] = (1.0 + s[j]) ** (kap - 1.0) * (1.0 - acc)
            else:
                spline = self._tables[-1]
                right_val = float(spline(1.0))
                vals[0] = right_val
                const = k ** (1.0 - kap) * right_val
                acc = 0.0
                for j in range(1, s.size):
                    half = 0.5 * (s[j] - s[j - 1])
                    mid = 0.5 * (s[j] + s[j - 1])
                    ss = mid + half * gauss_x
                    src = spline(ss)  # sigma(t-1) at offset ss within [k-1, k]
                    acc += half * float(np.dot(gauss_w, (k + ss) ** (-kap) * src))
                    vals[j] = (k + s[j]) ** (kap - 1.0) * (const - kap * acc)
            self._tables.append(CubicSpline(s, vals))
        return self._tables

    def sigma(self, u: float) -> float:
        u = float(u)
        if math.isnan(u) or u <= 0.0:
            raise DomainError(f"sigma_kappa needs u > 0, got {u}")
        if u <= 1.0:
            return float(u ** (self.kappa - 1.0))
        if u > self.u_max * (1 + 1e-12):
            if self._spec is None:
                raise BoundsError(
                    f"u={u} beyond the non-integer-order cap {self.u_max}; "
                    "values there sit below the method's absolute accuracy"
                )
            raise BoundsError(
                f"u={u} beyond configured u_max={self.u_max}; "
                "construct the evaluator with a larger u_max"
            )
        if self._spec is not None:
            return float(self._ensure_dde(u).evaluate(u))
        tables = self._ensure_tables(u)
        piece = min(int(math.ceil(u)) - 1, len(tables))  # u in (piece, piece+1]
        return float(tables[piece - 1](u - piece))

    __call__ = sigma


# module-level default evaluators; construction is cheap, solving is lazy
_defaults: dict = {}


def default_rho() -> RhoEvaluator:
    ev = _defaults.get("rho")
    if ev is None:
        ev = _defaults["rho"] = RhoEvaluator()
    return ev


def default_omega() -> OmegaEvaluator:
    ev = _defaults.get("omega")
    if ev is None:
        ev = _defaults["omega"] = OmegaEvaluator()
    return ev


def rho(u: float) -> float:
    """Dickman-de Bruijn rho(u) via the shared default evaluator."""
    return default_rho().rho(u)


def log_rho(u: float) -> float:
    """log rho(u), usable far beyond the float64 underflow point of rho."""
    return default_rho().log_rho(u)


def omega(u: float) -> float:
    """Buchstab omega(u), u >= 1."""
    return default_omega().omega(u)


def tau_delta(u: float, delta: float) -> float:
    key = ("tau", float(delta))
    ev = _defaults.get(key)
    if ev is None:
        ev = _defaults[key] = TauDeltaEvaluator(delta)
    return ev.tau(u)


def sigma_kappa(u: float, kappa: float) -> float:
    key = ("sigma", float(kappa))
    ev = _defaults.get(key)
    if ev is None:
        ev = _defaults[key] = SigmaEvaluator(kappa)
    return ev.sigma(u)


def rho_tau_squared() -> float:
    """rho at the squared golden ratio, in closed form (about 0.1046)."""
    lt = math.log((1.0 + math.sqrt(5.0)) / 2.0)
    return 1.0 - 2.0 * lt + lt * lt - math.pi ** 2 / 60.0


def _e1_continued_fraction(x: float) -> float:
    # E1(x) = e^-x / (x+1 - 1/(x+3 - 4/(x+5 - 9/(...)))), modified Lentz
    tiny = 1e-300
    b = x + 1.0
    c = 1.0 / tiny
    d = 1.0 / b
    f = d
    for n in range(1, 300):
        a = -float(n * n)
        b = x + 2.0 * n + 1.0
        d = b + a * d
        if d == 0.0:
            d = tiny
        c = b + a / c
        if c == 0.0:
            c = tiny
        d = 1.0 / d
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    return math.exp(-x) * f


def ein(s: float) -> float:
    """Complementary exponential integral Ein(s) = int_0^s (1 - e^-t)/t dt.

    The everywhere-convergent series sum_{k>=1} (-1)^{k+1} s^k / (k k!) is
    summed with compensation for |s| <= 12 (negative arguments give a
    single-sign series, no cancellation); between 12 and 30 the alternating
    terms peak near e^s/s, so the same series runs in extended precision;
    for s > 30 cancellation is avoided entirely through
    Ein(s) = gamma + log s + E1(s) with a continued-fraction E1.  Results
    whose magnitude exceeds float range (s below about -700) come back -inf.
    """
    s = float(s)
    if math.isnan(s):
        raise DomainError("s is NaN")
    if abs(s) > 750.0:
        raise BoundsError(f"|s|={abs(s)} > 750; companion exponential overflows")
    if s == 0.0:
        return 0.0
    if s > 30.0:
        return EULER_GAMMA + math.log(s) + _e1_continued_fraction(s)
    if abs(s) <= 12.0:
        terms = []
        a = 1.0  # s^k / k!
        for k in range(1, 200):
            a *= s / k
            t = a / k
            terms.append(t if k % 2 == 1 else -t)
            if abs(t) < 1e-20 * (1.0 + abs(s)) and k > abs(s):
                break
        return math.fsum(terms)
    with mp.workdps(40):
        total = mp.zero
        a = mpf(1)
        sm = mpf(s)
        for k in range(1, 4000):
            a = a * sm / k
            t = a / k
            total += t if k % 2 == 1 else -t
            if abs(t) < mpf("1e-35") * (1 + abs(total)) and k > abs(s):
                break
        return float(total)


def rho_laplace_closed(s: float) -> float:
    """Laplace transform of rho in closed form: exp(gamma - Ein(s))."""
    e = EULER_GAMMA - ein(s)
    if e > 709.0:
        return math.inf
    return math.exp(e)


def _rho_tail_start(s: float, tol: float, u_limit: float) -> int:
    # first integer U with sum_{k>=U} max(e^{-us}) / k! below tol, using
    # rho <= 1/[u]! on each [k, k+1]
    for U in range(3, int(u_limit)):
        bound = 0.0
        for k in range(U, U + 400):
            lt = -s * (k if s >= 0.0 else k + 1) - math.lgamma(k + 1)
            term = math.exp(lt) if lt < 700.0 else math.inf
            bound += term
            if term < tol * 1e-3:
                break
        if bound <= tol:
            return U
    raise BoundsError(
        f"cannot certify the integral tail at s={s} within coverage {u_limit}"
    )


def rho_laplace_numeric(s: float, evaluator: RhoEvaluator | None = None) -> float:
    """int_0^inf rho(u) e^{-us} du by panelwise adaptive quadrature.

    The integral is truncated at the first integer where the factorial bound
    certifies the remaining tail below 1e-12; if no such point exists inside
    the evaluator's range (strongly negative s), a range error is raised.
    """
    s = float(s)
    if math.isnan(s):
        raise DomainError("s is NaN")
    ev = evaluator if evaluator is not None else default_rho()
    U = _rho_tail_start(s, 1e-12, ev.u_max)
    parts = []
    # [0, 1]: rho = 1 exactly
    parts.append((1.0 - math.exp(-s)) / s if s != 0.0 else 1.0)
    for k in range(1, U):
        val, _ = integrate.quad(
            lambda x: ev.rho(x) * math.exp(-x * s),
            k, k + 1.0, epsabs=1e-13, epsrel=1e-13, limit=200,
        )
        parts.append(val)
    return math.fsum(parts)


def omega_laplace_numeric(s: float, u_cut: float = 40.0,
                          evaluator: OmegaEvaluator | None = None) -> float:
    """int_1^inf omega(u) e^{-us} du (omega taken as 0 below u = 1).

    Beyond ``u_cut`` the oscillation |omega - e^{-gamma}| < 1e3/[u]! is far
    below any useful tolerance, so the tail is the constant's closed form
    e^{-gamma} e^{-s u_cut}/s.
    """
    s = float(s)
    if not s > 0.0:
        raise DomainError(f"need s > 0 for a convergent transform, got {s}")
    ev = evaluator if evaluator is not None else default_omega()
    parts = []
    for k in range(1, int(u_cut)):
        val, _ = integrate.quad(
            lambda x: ev.omega(x) * math.exp(-x * s),
            k, k + 1.0, epsabs=1e-13, epsrel=1e-13, limit=200,
        )
        parts.append(val)
    parts.append(EXP_NEG_GAMMA * math.exp(-s * int(u_cut)) / s)
    return math.fsum(parts)


def euler_gamma_sum_identity(delta: float) -> float:
    """delta + sum_{n>=1} (n + delta) rho(n + delta); equals e^gamma.

    Terms are dropped once they fall below 1e-16 (around n = 14, by the
    factorial bound).
    """
    delta = float(delta)
    if math.isnan(delta) or not 0.0 <= delta <= 1.0:
        raise DomainError(f"delta={delta} outside [0, 1]")
    ev = default_rho()
    terms = [delta]
    for n in range(1, 200):
        t = (n + delta) * ev.rho(n + delta)
        terms.append(t)
        if t < 1e-16:
            break
    return math.fsum(terms)


_RAMANUJAN_U_CAP = 6.0
_RAMANUJAN_K_CAP = 5
_ramanujan_tables: dict = {}


def _ramanujan_table(k: int):
    table = _ramanujan_tables.get(k)
    if table is not None:
        return table

    def value(u: float) -> float:
        if u <= k:
            return 0.0
        val, _ = integrate.quad(
            lambda t: ramanujan_Ik(u - t, k - 1) / t,
            1.0, u - k + 1.0, epsabs=1e-12, epsrel=1e-12, limit=200,
        )
        return val

    coeffs = chebyshev.chebinterpolate(
        np.vectorize(lambda w: value(k + (_RAMANUJAN_U_CAP - k) * (w + 1.0) / 2.0)), 48
    )
    table = chebyshev.Chebyshev(coeffs, domain=[k, _RAMANUJAN_U_CAP])
    _ramanujan_tables[k] = table
    return table


def ramanujan_Ik(u: float, k: int) -> float:
    """Nested integral I_k(u) = int over t_i >= 1, sum t_i <= u of prod dt_i/t_i.

    I_0 = 1, I_k(u) = 0 for u < k, and
    I_k(u) = int_1^{u-k+1} I_{k-1}(u - t)/t dt.  k = 1 is log u in closed
    form; higher orders are cached Chebyshev fits of the recursive
    quadrature, good to ~1e-8 on the guarded range.
    """
    if k != int(k) or k < 0:
        raise DomainError(f"k={k} must be a nonnegative integer")
    k = int(k)
    u = float(u)
    if math.isnan(u):
        raise DomainError("u is NaN")
    if k > _RAMANUJAN_K_CAP or u > _RAMANUJAN_U_CAP:
        raise BoundsError(
            f"(u={u}, k={k}) outside the guarded range "
            f"u <= {_RAMANUJAN_U_CAP}, k <= {_RAMANUJAN_K_CAP}"
        )
    if k == 0:
        return 1.0
    if u <= k:
        return 0.0
    if k == 1:
        return math.log(u)
    return float(_ramanujan_table(k)(u))


def ramanujan_rho_series(u: float) -> float:
    """Terminating series sum_{k=0}^{[u]} (-1)^k I_k(u)/k! for rho(u), u <= 5."""
    u = float(u)
    if math.isnan(u) or u < 0.0:
        raise DomainError(f"u={u} must be nonnegative")
    if u > 5.0:
        raise BoundsError(f"u={u} beyond the series guard u <= 5")
    total = 0.0
    for k in range(int(math.floor(u)) + 1):
        total += (-1) ** k * ramanujan_Ik(u, k) / math.factorial(k)
    return total


_CANFIELD_COST_CAP = 10 ** 7


def _canfield_check(N, j, j_min):
    if N != int(N) or N < 2:
        raise DomainError(f"N={N} must be an integer >= 2")
    if j != int(j) or j < j_min:
        raise DomainError(f"j={j} must be an integer >= {j_min}")
    if int(N) * int(j) > _CANFIELD_COST_CAP:
        raise BoundsError(f"N*j = {int(N) * int(j)} exceeds the cost cap {_CANFIELD_COST_CAP}")
    return int(N), int(j)


def canfield_A(N: int, j: int) -> float:
    """Upper step function for rho: A(N, j) >= rho(j/N), A(N, 0..N-1) = 1.

    Recurrence (j/N) A(N,j) = (1/N)(A(N,j-1) + ... + A(N,j-N)), evaluated
    with a sliding window sum.
    """
    N, j = _canfield_check(N, j, 0)
    if j < N:
        return 1.0
    win = collections.deque([1.0] * N)
    running = float(N)
    a = 1.0
    for i in range(N, j + 1):
        a = running / i
        running += a - win.popleft()
        win.append(a)
    return a


def canfield_B(N: int, j: int) -> float:
    """Lower step function for rho: B(N, j) <= rho(j/N), B(N, 1..N-1) = 1.

    Same sliding-window recurrence as ``canfield_A`` but the window spans
    N - 1 back terms.
    """
    N, j = _canfield_check(N, j, 1)
    if j < N:
        return 1.0
    win = collections.deque([1.0] * (N - 1))
    running = float(N - 1)
    b = 1.0
    for i in range(N, j + 1):
        b = running / i
        running += b - win.popleft()
        win.append(b)
    return b
