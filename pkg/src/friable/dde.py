"""Method-of-steps solver for the linear delay equation

    u f'(u) + a f(u) + b f(u-1) = 0,        u > u0,

with a polynomial initial segment on [u0-1, u0], plus the adjoint equation

    u g'(u) + (1-a) g(u) - b g(u+1) = 0

integrated backwards, and the bilinear pairing that is constant in u0 along
solution/adjoint pairs.

Representation.  Knots sit at u0 + integers.  Each unit interval carries one
Chebyshev series of degree m (default 30) stored as a unit-scale coefficient
vector plus a log scale factor, so instances that decay below the double
range (rho drops under 1e-3500 before u = 500) remain representable; a
log-space evaluation path is part of the public surface.

Propagation.  Within an interval the right-hand side is polynomial, so the
piece follows from an exact coefficient recurrence: writing the piece about
the interval midpoint mu = c + 1/2 (midpoints are exactly one apart, which
lets the delayed term reuse the previous piece's coefficients unshifted),

    mu (j+1) f_{j+1} = -(j + a) f_j - b g_j,

with the free f_0 fixed by matching the left endpoint.  The recurrence runs
in mpmath at a working precision chosen from the instance's decay rate:
computing a super-exponentially decaying solution forward loses about
xi(u)/ln 10 decimal digits per unit interval to cancellation in
u f(u) = (integral of f over [u-1, u]) - type identities, so the digits must
be there to begin with.  With them, the forward recurrence is exact down to
the last piece; the float64 Chebyshev pieces are only a view of that run.

The adjoint equation is integrated backwards by float64 collocation: that
direction follows the dominant solution branch and is numerically stable.
Solving mutates the global mpmath context and is single-threaded; solutions
are immutable afterwards and safe to share across threads.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from mpmath import mp, mpf
from numpy.polynomial import chebyshev as C
from numpy.polynomial import polynomial as P

from .errors import (
    BoundsError,
    CostError,
    CoverageError,
    DomainError,
    SpecMismatchError,
)

DEFAULT_DEGREE = 30
DEFAULT_MAX_INTERVALS = 500
FORMAT_VERSION = 1
_MIN_DPS = 30

__all__ = [
    "DdeSpec",
    "PiecewiseSolution",
    "AdjointSolution",
    "solve_forward",
    "solve_adjoint_backward",
    "scalar_product",
    "ratio_convergence_check",
    "suggested_dps",
    "max_relative_residual",
    "adjoint_max_relative_residual",
]


# -- problem statement ---------------------------------------------------------


@dataclass(frozen=True)
class DdeSpec:
    """Coefficients (a, b), start point u0 > 0, and the initial segment.

    ``initial`` holds ascending power coefficients in (u - u0), valid on
    [u0-1, u0].  ``initial_series``, if given, must return the first n Taylor
    coefficients of the initial segment about u0 - 1/2 as exact values in the
    caller's active mpmath context; the solver prefers it over ``initial``,
    which lets non-polynomial initial data (omega's 1/u) enter at full
    working precision.  ``data_singularity`` locates the nearest singularity
    of the initial data's analytic continuation (None for entire data); the
    delay chain drags it along and it caps the pieces' radii of analyticity,
    so the solver needs it to budget series lengths.  ``from_callable`` fits
    a polynomial through Chebyshev interpolation; that path is float64-grade
    (roughly 1e-9 after basis conversion) and meant for exploratory inputs.
    """

    a: float
    b: float
    u0: float
    initial: np.ndarray
    m: int = DEFAULT_DEGREE
    initial_series: Callable | None = field(default=None, compare=False)
    data_singularity: float | None = None

    def __post_init__(self):
        if not (self.u0 > 1e-6):
            raise DomainError(
                f"u0 must exceed 1e-6 (equation divides by u), got {self.u0}"
            )
        if self.m < 4:
            raise DomainError(f"degree m must be >= 4, got {self.m}")
        given = np.atleast_1d(np.asarray(self.initial, dtype=np.float64))
        if given.ndim != 1 or len(given) > self.m + 1:
            raise DomainError(
                f"initial polynomial needs <= {self.m + 1} coefficients"
            )
        if not np.all(np.isfinite(given)):
            raise DomainError("initial segment coefficients must be finite")
        coeffs = given.copy()
        coeffs.flags.writeable = False
        object.__setattr__(self, "initial", coeffs)

    @classmethod
    def from_callable(cls, a, b, u0, func, m: int = DEFAULT_DEGREE,
                      initial_series: Callable | None = None) -> "DdeSpec":
        """Fit the initial segment from ``func`` on [u0-1, u0]."""
        cheb = C.chebinterpolate(
            np.vectorize(lambda w: func(u0 + (w - 1.0) / 2.0),
                         otypes=[np.float64]), m
        )
        keep = np.nonzero(np.abs(cheb) > 1e-15 * np.max(np.abs(cheb)))[0]
        cheb = cheb[: keep[-1] + 1] if len(keep) else cheb[:1]
        # w = 2(u - u0) + 1 on the initial interval
        poly = C.cheb2poly(cheb)
        comp = np.zeros(1)
        for ck in poly[::-1]:
            comp = P.polyadd(P.polymul(comp, [1.0, 2.0]), [ck])
        return cls(a, b, u0, comp, m, initial_series=initial_series)

    def evaluate_initial(self, u):
        """Initial-segment value at u in [u0-1, u0]."""
        return P.polyval(np.asarray(u, dtype=np.float64) - self.u0,
                         self.initial)


# -- solution containers -------------------------------------------------------


@dataclass(eq=False)
class PiecewiseSolution:
    """Forward solution; pieces[k] covers [u0-1+k, u0+k], pieces[0] being the
    initial segment.  Value = exp(log_scales[k]) * chebval(w, pieces[k]) with
    w = 2(u - left knot) - 1.  Knot evaluation returns the right-limit piece.
    Immutable after solve_forward."""

    spec: DdeSpec
    pieces: list = field(repr=False)
    log_scales: list = field(repr=False)
    built_dps: int = 0

    @property
    def start(self) -> float:
        return self.spec.u0 - 1.0

    @property
    def coverage(self) -> float:
        """Largest u the solution can evaluate."""
        return self.start + len(self.pieces)

    @property
    def knots(self) -> np.ndarray:
        return self.start + np.arange(len(self.pieces) + 1, dtype=np.float64)

    def _piece_index(self, u):
        k = np.floor(np.asarray(u, dtype=np.float64) - self.start)
        return np.clip(k, 0, len(self.pieces) - 1).astype(np.intp)

    def _check_coverage(self, u) -> None:
        u = np.asarray(u, dtype=np.float64)
        if np.any(u < self.start - 1e-12) or np.any(u > self.coverage + 1e-12):
            raise CoverageError(
                f"u outside coverage [{self.start}, {self.coverage}]"
            )

    def evaluate(self, u):
        """Value at u (scalar or array), linear scale; underflows to 0."""
        self._check_coverage(u)
        scalar = np.isscalar(u) or np.ndim(u) == 0
        uu = np.atleast_1d(np.asarray(u, dtype=np.float64))
        out = np.empty_like(uu)
        idx = self._piece_index(uu)
        for k in np.unique(idx):
            sel = idx == k
            w = 2.0 * (uu[sel] - (self.start + k)) - 1.0
            ls = self.log_scales[k]
            if ls <= -700.0:
                scale = 0.0
            elif ls >= 700.0:
                scale = math.inf
            else:
                scale = math.exp(ls)
            out[sel] = scale * C.chebval(w, self.pieces[k])
        return float(out[0]) if scalar else out

    __call__ = evaluate

    def evaluate_log(self, u) -> tuple[int, float]:
        """(sign, log|f(u)|) at scalar u; sign 0 means an exact zero."""
        self._check_coverage(u)
        k = int(self._piece_index(u))
        w = 2.0 * (float(u) - (self.start + k)) - 1.0
        v = float(C.chebval(w, self.pieces[k]))
        if v == 0.0:
            return 0, -math.inf
        return (1 if v > 0 else -1), self.log_scales[k] + math.log(abs(v))

    # -- serialization ---------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "format_version": FORMAT_VERSION,
            "a": self.spec.a,
            "b": self.spec.b,
            "u0": self.spec.u0,
            "m": self.spec.m,
            "initial": [float(c) for c in self.spec.initial],
            "data_singularity": self.spec.data_singularity,
            "built_dps": self.built_dps,
            "knots": [float(k) for k in self.knots],
            "coefficients": [list(map(float, p)) for p in self.pieces],
            "log_scales": [float(s) for s in self.log_scales],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PiecewiseSolution":
        if data.get("format_version") != FORMAT_VERSION:
            raise SpecMismatchError(
                f"unsupported solution format {data.get('format_version')}"
            )
        spec = DdeSpec(data["a"], data["b"], data["u0"],
                       np.asarray(data["initial"], dtype=np.float64),
                       m=data["m"],
                       data_singularity=data.get("data_singularity"))
        pieces = [np.asarray(p, dtype=np.float64) for p in data["coefficients"]]
        for p in pieces:
            p.flags.writeable = False
        return cls(spec, pieces, [float(s) for s in data["log_scales"]],
                   built_dps=int(data.get("built_dps", 0)))

    def save(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh)

    @classmethod
    def load(cls, path) -> "PiecewiseSolution":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


@dataclass(eq=False)
class AdjointSolution:
    """Backward (adjoint) solution; same storage layout as the forward one.
    pieces[k] covers [start + k, start + k + 1]; the last piece is the
    terminal segment on [U, U+1]."""

    a: float
    b: float
    start: float
    pieces: list = field(repr=False)
    log_scales: list = field(repr=False)

    @property
    def coverage(self) -> tuple[float, float]:
        return (self.start, self.start + len(self.pieces))

    def evaluate(self, u):
        lo, hi = self.coverage
        scalar = np.isscalar(u) or np.ndim(u) == 0
        uu = np.atleast_1d(np.asarray(u, dtype=np.float64))
        if np.any(uu < lo - 1e-12) or np.any(uu > hi + 1e-12):
            raise CoverageError(f"u outside adjoint coverage [{lo}, {hi}]")
        idx = np.clip(np.floor(uu - self.start), 0,
                      len(self.pieces) - 1).astype(np.intp)
        out = np.empty_like(uu)
        for k in np.unique(idx):
            sel = idx == k
            w = 2.0 * (uu[sel] - (self.start + k)) - 1.0
            out[sel] = math.exp(self.log_scales[k]) * C.chebval(
                w, self.pieces[k]
            )
        return float(out[0]) if scalar else out

    __call__ = evaluate


# -- working precision ---------------------------------------------------------


def _local_rate(mu: float, a: float, b: float) -> float:
    """Crude per-interval decay exponent zeta ~ log|f(u-1)/f(u)| near mu,
    from the quasi-static balance mu*zeta = |a| + |b| e^zeta."""
    if b == 0.0:
        return max(abs(a) / max(mu, 0.5), 0.5)
    z = 1.0
    for _ in range(60):
        z = 0.5 * (z + math.log(max(mu * z + abs(a) + 1.0, 2.0) / abs(b)))
    return max(z, 0.1)


def suggested_dps(spec: DdeSpec, u_max: float) -> int:
    """Working precision for solve_forward: the decay-rate integral of the
    instance (total decimal digits a super-exponentially decaying solution
    loses to cancellation by u_max) plus headroom."""
    if spec.b == 0.0:
        return _MIN_DPS + 5
    total = 0.0
    n_steps = max(1, math.ceil(u_max - spec.u0 - 1e-9))
    for k in range(1, n_steps + 1):
        total += _local_rate(spec.u0 + k - 0.5, spec.a, spec.b)
    return max(_MIN_DPS, int(total / math.log(10.0)) + 35)


def _piece_radius(spec: DdeSpec) -> float:
    """Radius of analyticity of the propagated pieces about their midpoints.

    Pieces are not entire: the equation's singular point u = 0 propagates
    through the delay chain, leaving piece k a branch point at u = k - 1, a
    fixed distance u0 + 1/2 from its midpoint.  A singularity of the initial
    data at s gets dragged to s + k, at fixed distance u0 - 1/2 - s.  Taylor
    tails at |t| = 1/2 therefore decay geometrically with ratio twice the
    radius."""
    r = spec.u0 + 0.5
    if spec.data_singularity is not None:
        r = min(r, spec.u0 - 0.5 - spec.data_singularity)
    return r


def _taylor_degree(digits: float, radius: float, m: int) -> int:
    """Taylor length keeping the tail at |t| = 1/2 below 10^-digits for a
    piece analytic in the given radius about its midpoint."""
    lam = math.log(2.0 * radius)
    if lam <= 1e-9:
        raise CostError(
            f"piece analyticity radius {radius} leaves no series convergence"
        )
    return math.ceil(digits * math.log(10.0) / lam) + m + 12


# -- forward solve (exact coefficient recurrence in mpmath) ---------------------


def _horner_mp(coeffs, t):
    acc = mp.zero
    for cj in reversed(coeffs):
        acc = acc * t + cj
    return acc


def _initial_taylor_mp(spec: DdeSpec, n: int):
    """Taylor coefficients of the initial segment about u0 - 1/2, in the
    active mp context."""
    if spec.initial_series is not None:
        out = [mp.mpf(c) for c in spec.initial_series(n)]
        return out[:n]
    # rebase sum c_i x^i, x = (u - u0), onto t = x + 1/2: x = t - 1/2
    taylor = [mp.zero]
    half = mpf(1) / 2
    for c in reversed([mpf(float(ci)) for ci in spec.initial]):
        # taylor <- taylor * (t - 1/2) + c
        shifted = [mp.zero] + taylor
        taylor = [s - half * t for s, t in zip(shifted, taylor + [mp.zero])]
        taylor[0] += c
    return taylor[:n] if n <= len(taylor) else taylor


def _emit_piece(taylor, nodes, V, m):
    """Convert one mp Taylor piece (about the interval midpoint, |t| <= 1/2)
    to a float64 Chebyshev mantissa and log scale."""
    half = mpf(1) / 2
    scale = max(abs(taylor[0]), abs(_horner_mp(taylor, -half)),
                abs(_horner_mp(taylor, half)))
    if scale == 0:
        return np.zeros(m + 1), 0.0
    ft = np.array([float(fj / scale) for fj in taylor], dtype=np.float64)
    vals = P.polyval(nodes / 2.0, ft)
    cheb = (2.0 / (m + 1)) * (V.T @ vals)
    cheb[0] *= 0.5
    peak = float(np.max(np.abs(cheb)))
    if peak == 0.0 or not np.isfinite(peak):
        return np.zeros(m + 1), 0.0
    out = cheb / peak
    out.flags.writeable = False
    return out, float(mp.log(scale)) + math.log(peak)


def solve_forward(spec: DdeSpec, u_max: float, *,
                  start_value: float | None = None,
                  working_dps: int | None = None,
                  max_intervals: int = DEFAULT_MAX_INTERVALS
                  ) -> PiecewiseSolution:
    """Integrate the delay equation from the initial segment up to u_max.

    ``start_value`` overrides continuity at u0 (integral-equation anchors
    jump there).  ``working_dps`` overrides the automatic precision choice;
    the default follows suggested_dps(spec, u_max).
    """
    if not np.isfinite(u_max) or u_max <= spec.u0:
        raise DomainError(f"u_max must exceed u0={spec.u0}, got {u_max}")
    n_steps = max(1, math.ceil(u_max - spec.u0 - 1e-9))
    if n_steps > max_intervals:
        raise CostError(
            f"solve to u={u_max} needs {n_steps} intervals "
            f"(> {max_intervals})"
        )
    dps = working_dps if working_dps is not None else suggested_dps(spec, u_max)
    dps = max(dps, _MIN_DPS)

    m = spec.m
    nodes = C.chebpts1(m + 1)
    V = C.chebvander(nodes, m)

    # Truncation at interval k feeds the same cancellation channel as
    # rounding, amplified by the decay still ahead, so its budget is the
    # suffix of the decay-rate integral; degrees taper toward the end.
    rates = [_local_rate(spec.u0 + k - 0.5, spec.a, spec.b)
             for k in range(1, n_steps + 1)]
    suffix = np.cumsum(rates[::-1])[::-1] / math.log(10.0)
    radius = _piece_radius(spec)
    degs = [_taylor_degree(min(dps, s + 22.0), radius, m) for s in suffix]
    if sum(degs) > 4_000_000:
        raise CostError(
            f"solve needs ~{sum(degs):.2e} series terms; u0={spec.u0} this "
            f"close to the singular point makes the target depth infeasible"
        )

    pieces: list = []
    logs: list = []
    half = mpf(1) / 2
    with mp.workdps(dps + 10):
        a, b = mpf(spec.a), mpf(spec.b)
        tail_tol = mpf(10) ** (-(dps + 4))
        g = _initial_taylor_mp(spec, degs[0] + 1)
        piece, ls = _emit_piece(g, nodes, V, m)
        pieces.append(piece)
        logs.append(ls)
        g_anchor = max(abs(_horner_mp(g, -half)), abs(_horner_mp(g, half)),
                       abs(g[0]), mpf(10) ** (-dps))
        for k in range(1, n_steps + 1):
            mu = mpf(spec.u0) + k - half
            deg = degs[k - 1]
            while deg < len(g) - 1 and \
                    abs(g[deg]) * half ** deg > tail_tol * g_anchor:
                deg += 8
            h = [mp.one]
            p = [mp.zero]
            for j in range(deg):
                gj = g[j] if j < len(g) else mp.zero
                denom = mu * (j + 1)
                h.append(-((j + a) * h[j]) / denom)
                p.append(-((j + a) * p[j] + b * gj) / denom)
            if k == 1 and start_value is not None:
                target = mpf(start_value)
            else:
                target = _horner_mp(g, half)
            hl = _horner_mp(h, -half)
            if hl == 0:
                raise DomainError(
                    f"degenerate left-endpoint system at interval {k} "
                    f"(a={spec.a}, u0={spec.u0})"
                )
            x = (target - _horner_mp(p, -half)) / hl
            f = [x * hj + pj for hj, pj in zip(h, p)]
            piece, ls = _emit_piece(f, nodes, V, m)
            pieces.append(piece)
            logs.append(ls)
            g = f
            g_anchor = max(abs(target), abs(f[0]), abs(_horner_mp(f, half)),
                           tail_tol)
    return PiecewiseSolution(spec, pieces, logs, built_dps=dps)


# -- backward adjoint solve (float64 collocation, stable direction) -------------


class _AdjointBasis:
    _cache: dict[int, "_AdjointBasis"] = {}

    def __init__(self, m: int):
        self.w = C.chebpts1(m)
        self.V = C.chebvander(self.w, m)
        deriv = np.zeros((m + 1, m + 1))
        for j in range(1, m + 1):
            ej = np.zeros(j + 1)
            ej[j] = 1.0
            dj = C.chebder(ej)
            deriv[: len(dj), j] = dj
        self.Vd = self.V @ deriv
        self.right = np.ones(m + 1)

    @classmethod
    def get(cls, m: int) -> "_AdjointBasis":
        if m not in cls._cache:
            cls._cache[m] = cls(m)
        return cls._cache[m]


def _normalize(coeffs: np.ndarray) -> tuple[np.ndarray, float]:
    s = float(np.max(np.abs(coeffs)))
    if s == 0.0 or not np.isfinite(s):
        return coeffs, 0.0
    return coeffs / s, math.log(s)


def solve_adjoint_backward(a: float, b: float, terminal, U: float,
                           u_min: float, m: int = DEFAULT_DEGREE,
                           max_intervals: int = DEFAULT_MAX_INTERVALS
                           ) -> AdjointSolution:
    """Integrate the adjoint equation from a terminal segment on [U, U+1]
    down to (at most one interval above) u_min > 0.

    ``terminal`` is an ascending power-coefficient vector in (u - U) on
    [U, U+1], or a callable to interpolate there.  For u in a piece [c, c+1]
    the shifted argument u+1 lies in the piece above with the same local
    coordinate, so each backward interval is one dense collocation solve.
    """
    if not (u_min > 0):
        raise DomainError(f"u_min must be positive, got {u_min}")
    if U < u_min + 1.0 - 1e-12:
        raise DomainError(f"need U >= u_min + 1, got U={U}, u_min={u_min}")
    n_back = math.floor(U - u_min + 1e-12)
    if n_back > max_intervals:
        raise CostError(f"{n_back} adjoint intervals exceeds {max_intervals}")
    if callable(terminal):
        coeffs = C.chebinterpolate(
            np.vectorize(lambda w: terminal(U + (w + 1.0) / 2.0),
                         otypes=[np.float64]), m
        )
    else:
        power = np.atleast_1d(np.asarray(terminal, dtype=np.float64))
        if len(power) > m + 1:
            raise DomainError("terminal polynomial needs <= m+1 coefficients")
        # u - U = (w + 1) / 2 on [U, U+1]
        cheb = np.zeros(1)
        for ck in power[::-1]:
            cheb = C.chebadd(C.chebmul(cheb, [0.5, 0.5]), [ck])
        coeffs = np.zeros(m + 1)
        coeffs[: len(cheb)] = cheb
    basis = _AdjointBasis.get(m)
    coeffs, scale = _normalize(coeffs)
    pieces = [coeffs]
    scales = [scale]
    for k in range(1, n_back + 1):
        above = pieces[0]
        c = U - k
        u = c + (basis.w + 1.0) / 2.0
        A = (2.0 * u)[:, None] * basis.Vd + (1.0 - a) * basis.V
        rhs = b * C.chebval(basis.w, above)
        A = np.vstack([A, basis.right])
        rhs = np.append(rhs, float(C.chebval(-1.0, above)))
        raw = np.linalg.solve(A, rhs)
        new, bump = _normalize(raw)
        pieces.insert(0, new)
        scales.insert(0, scales[0] + bump)
    for p in pieces:
        p.flags.writeable = False
    return AdjointSolution(a, b, U - n_back, pieces, scales)


# -- pairing and checks ----------------------------------------------------------


def scalar_product(f: PiecewiseSolution, g: AdjointSolution,
                   u0: float) -> float:
    """u0 f(u0) g(u0) - b * integral_{u0-1}^{u0} f(u) g(u+1) du.

    Constant in u0 when f solves the forward equation and g the adjoint for
    the same (a, b) with b != 0.  The integrand is split at the knots of both
    factors and each panel uses a Gauss rule exact for the product degree.
    """
    if (f.spec.a, f.spec.b) != (g.a, g.b):
        raise SpecMismatchError(
            f"coefficient mismatch: forward {(f.spec.a, f.spec.b)}, "
            f"adjoint {(g.a, g.b)}"
        )
    glo, ghi = g.coverage
    if u0 - 1 < f.start - 1e-12 or u0 > f.coverage + 1e-12:
        raise CoverageError(f"forward solution does not cover [{u0-1}, {u0}]")
    if u0 < glo - 1e-12 or u0 + 1 > ghi + 1e-12:
        raise CoverageError(f"adjoint solution does not cover [{u0}, {u0+1}]")

    breaks = {u0 - 1.0, u0}
    for knot in f.knots:
        if u0 - 1.0 < knot < u0:
            breaks.add(float(knot))
    for k in range(len(g.pieces) + 1):
        knot = g.start + k - 1.0  # knot of g(u+1) in u coordinates
        if u0 - 1.0 < knot < u0:
            breaks.add(knot)
    breaks = sorted(breaks)

    nodes, weights = np.polynomial.legendre.leggauss(f.spec.m + 2)
    total = 0.0
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        mid, halfw = (lo + hi) / 2.0, (hi - lo) / 2.0
        uu = mid + halfw * nodes
        total += halfw * float(
            np.dot(weights, f.evaluate(uu) * g.evaluate(uu + 1.0))
        )
    return u0 * f.evaluate(u0) * g.evaluate(u0) - f.spec.b * total


def ratio_convergence_check(initial, u_max: float = 64.0,
                            m: int = DEFAULT_DEGREE
                            ) -> list[tuple[float, float]]:
    """Solve u F(u) = integral_{u-1}^{u} F(t) dt forward from F given on
    [0, 1] and report F(u) / rho(u) at integer u.

    ``initial`` is an ascending power-coefficient vector in u on [0, 1], or
    a callable there.  Differentiating the integral relation gives the delay
    equation with a = 0, b = 1; the relation itself anchors
    F(1+) = integral_0^1 F, so the solution may jump at u = 1.  The reported
    ratios converge at an O(u^{-1/2}) rate to a limit depending linearly on
    the initial data.
    """
    if u_max < 2 or u_max > DEFAULT_MAX_INTERVALS:
        raise BoundsError(f"u_max must be in [2, {DEFAULT_MAX_INTERVALS}]")
    if callable(initial):
        spec = DdeSpec.from_callable(0.0, 1.0, 1.0, initial, m=m)
    else:
        poly = np.atleast_1d(np.asarray(initial, dtype=np.float64))
        # rebase from powers of u to powers of (u - 1)
        comp = np.zeros(1)
        for ck in poly[::-1]:
            comp = P.polyadd(P.polymul(comp, [1.0, 1.0]), [ck])
        spec = DdeSpec(0.0, 1.0, 1.0, comp, m=m)

    n_ratios = math.floor(u_max + 1e-12)
    if not np.any(np.abs(spec.initial) > 0):
        return [(float(u), 0.0) for u in range(1, n_ratios + 1)]

    anchor = float(P.polyval(0.0, P.polyint(spec.initial, lbnd=-1.0)))
    sol = solve_forward(spec, u_max, start_value=anchor)
    rho = solve_forward(DdeSpec(0.0, 1.0, 1.0, [1.0], m=m), u_max)
    out = []
    for u in range(1, n_ratios + 1):
        sf, lf = sol.evaluate_log(float(u))
        sr, lr = rho.evaluate_log(float(u))
        ratio = 0.0 if sf == 0 else sf * sr * math.exp(lf - lr)
        out.append((float(u), ratio))
    return out


def max_relative_residual(sol: PiecewiseSolution, n_samples: int = 10) -> float:
    """Largest sampled |u f' + a f + b f(u-1)| / max|f| over the propagated
    intervals, each interval handled in its own scale frame."""
    worst = 0.0
    ws = np.linspace(-0.96, 0.96, n_samples)
    for k in range(1, len(sol.pieces)):
        piece, prev = sol.pieces[k], sol.pieces[k - 1]
        c = sol.start + k
        dscale = math.exp(min(sol.log_scales[k - 1] - sol.log_scales[k], 700.0))
        u = c + (ws + 1.0) / 2.0
        fprime = 2.0 * C.chebval(ws, C.chebder(piece))
        res = (
            u * fprime
            + sol.spec.a * C.chebval(ws, piece)
            + sol.spec.b * dscale * C.chebval(ws, prev)
        )
        scale = max(float(np.max(np.abs(C.chebval(ws, piece)))), 1e-300)
        worst = max(worst, float(np.max(np.abs(res))) / scale)
    return worst


def adjoint_max_relative_residual(g: AdjointSolution,
                                  n_samples: int = 10) -> float:
    """Largest sampled |u g' + (1-a) g - b g(u+1)| / max|g| over the
    propagated (non-terminal) intervals."""
    worst = 0.0
    ws = np.linspace(-0.96, 0.96, n_samples)
    for k in range(len(g.pieces) - 1):
        piece, above = g.pieces[k], g.pieces[k + 1]
        c = g.start + k
        dscale = math.exp(g.log_scales[k + 1] - g.log_scales[k])
        u = c + (ws + 1.0) / 2.0
        gprime = 2.0 * C.chebval(ws, C.chebder(piece))
        res = (
            u * gprime
            + (1.0 - g.a) * C.chebval(ws, piece)
            - g.b * dscale * C.chebval(ws, above)
        )
        scale = max(float(np.max(np.abs(C.chebval(ws, piece)))), 1e-300)
        worst = max(worst, float(np.max(np.abs(res))) / scale)
    return worst
