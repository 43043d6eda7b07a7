"""The saddle function xi(u) and closed-form asymptotics for rho(u).

xi(u) is the unique positive root of (e^x - 1)/x = u for u > 1.  Every
classical estimate of rho runs through it: the integral
int_1^u xi(t) dt has the closed form u xi + Ein(-xi), and the saddle-point
formulas differ only in the prefactor multiplying exp(gamma - int xi).

All estimators offer a log-space form so they stay usable far beyond the
float64 underflow point of rho itself (u ~ 171).
"""

import math
from dataclasses import dataclass

from .errors import DomainError, ToleranceError
from .special import EULER_GAMMA, ein

__all__ = [
    "XiValue",
    "xi",
    "xi_integral",
    "rho_debruijn_asymptotic",
    "rho_alladi",
    "rho_sandwich",
    "eerstdick_estimate",
]

_E = math.e


@dataclass(frozen=True)
class XiValue:
    """Root xi of (e^xi - 1)/xi = u together with its derivative in u."""

    u: float
    xi: float
    xi_prime: float


def _mean_exp(x: float) -> float:
    # (e^x - 1)/x; series through x^8 keeps the removable singularity tame
    if abs(x) < 1e-3:
        s = 0.0
        for k in range(8, 0, -1):
            s = (s + 1.0) * x / (k + 1)
        return 1.0 + s
    return math.expm1(x) / x


def _mean_exp_prime(x: float) -> float:
    # d/dx (e^x - 1)/x = (e^x (x - 1) + 1)/x^2; Horner on sum k x^{k-1}/(k+1)!
    if abs(x) < 1e-3:
        s = 0.0
        for k in range(8, 0, -1):
            s = s * x + k / math.factorial(k + 1)
        return s
    return (math.exp(x) * (x - 1.0) + 1.0) / (x * x)


def xi(u: float) -> XiValue:
    """Solve (e^x - 1)/x = u by Newton iteration.

    Initial guess 2(u - 1) for u <= e (exact to first order at u -> 1+),
    log u + log log u beyond.  Converged when the equation residual is
    below 1e-14 * u.
    """
    u = float(u)
    if math.isnan(u) or u <= 1.0 + 1e-12:
        raise DomainError(f"xi(u) needs u > 1, got {u}")
    x = 2.0 * (u - 1.0) if u <= _E else math.log(u) + math.log(math.log(u))
    for _ in range(100):
        r = _mean_exp(x) - u
        if abs(r) <= 1e-14 * u:
            break
        step = r / _mean_exp_prime(x)
        x -= step
        if x <= 0.0:
            x = 1e-12  # convexity keeps Newton above 0 except on wild overshoot
    else:
        raise ToleranceError(f"xi(u) Newton failed to converge at u={u}")
    xp = x * x / (math.exp(x) * (x - 1.0) + 1.0)
    return XiValue(u=u, xi=x, xi_prime=xp)


def xi_integral(u: float) -> float:
    """int_1^u xi(t) dt in closed form: u xi(u) + Ein(-xi(u))."""
    v = xi(u)
    return u * v.xi + ein(-v.xi)


def rho_debruijn_asymptotic(u: float, log: bool = False) -> float:
    """Saddle-point estimate (2 pi u)^{-1/2} exp(gamma - u xi - Ein(-xi)).

    Relative error O(1/u) against rho(u); with ``log=True`` the natural log
    is returned instead (usable where the value itself underflows).
    """
    u = float(u)
    v = xi(u)
    lg = -0.5 * math.log(2.0 * math.pi * u) + EULER_GAMMA - u * v.xi - ein(-v.xi)
    return lg if log else math.exp(lg)


def rho_alladi(u: float, log: bool = False) -> float:
    """Estimate sqrt(xi'/(2 pi)) exp(gamma - int_1^u xi); error O(1/u)."""
    u = float(u)
    v = xi(u)
    lg = 0.5 * math.log(v.xi_prime / (2.0 * math.pi)) + EULER_GAMMA \
        - (u * v.xi + ein(-v.xi))
    return lg if log else math.exp(lg)


def rho_sandwich(u: float) -> tuple:
    """Rigorous bracket exp(-int_2^{u+1} xi) <= rho(u) <= exp(-int_1^u xi)."""
    u = float(u)
    if math.isnan(u) or u < 1.0:
        raise DomainError(f"sandwich needs u >= 1, got {u}")
    base = xi_integral(2.0)
    lower = math.exp(-(xi_integral(u + 1.0) - base))
    upper = 1.0 if u <= 1.0 else math.exp(-xi_integral(u))
    return lower, upper


def eerstdick_estimate(u: float) -> float:
    """Two-term expansion of log rho(u):

    -u (log u + log log u - 1 + (log log u - 1)/log u),  u >= 3.

    Returned in log scale; the error band is O(u (log log u / log u)^2).
    """
    u = float(u)
    if math.isnan(u) or u < 3.0:
        raise DomainError(f"estimate needs u >= 3, got {u}")
    lu = math.log(u)
    llu = math.log(lu)
    return -u * (lu + llu - 1.0 + (llu - 1.0) / lu)
