"""The named delay-equation solutions and their identities."""

import math
from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest
from scipy import integrate

from friable.errors import BoundsError, DomainError
from friable.special import (
    EULER_GAMMA,
    EXP_GAMMA,
    EXP_NEG_GAMMA,
    RhoEvaluator,
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

# -- rho ------------------------------------------------------------------


def test_rho_trivial_region():
    assert rho(0.0) == 1.0
    assert rho(0.5) == 1.0
    assert rho(1.0) == 1.0
    assert rho(-3.0) == 0.0


def test_rho_closed_form_on_second_interval():
    for u in np.linspace(1.0, 2.0, 101):
        assert abs(rho(float(u)) - (1.0 - math.log(u))) <= 1e-12


def test_rho_tau_squared_closed_form_vs_solver():
    # golden ratio squared: the one point past u=2 with an elementary value
    tau_sq = ((1.0 + math.sqrt(5.0)) / 2.0) ** 2
    closed = rho_tau_squared()
    assert abs(closed - rho(tau_sq)) <= 1e-10
    assert abs(closed - 0.1046) <= 5e-5


def test_rho_strictly_decreasing_and_positive():
    us = np.linspace(1.0, 30.0, 571)
    vals = [rho(float(u)) for u in us]
    assert all(v > 0.0 for v in vals)
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_rho_factorial_bound():
    for u in np.linspace(0.0, 20.0, 401):
        bound = 1.0 / math.factorial(int(u))
        assert rho(float(u)) <= bound * (1.0 + 1e-12)


def test_rho_delay_integral_identity():
    # u rho(u) = integral of rho over [u-1, u]
    ev = default_rho()
    for u in (1.5, 2.5, 5.5, 10.3):
        val, err = integrate.quad(ev.rho, u - 1.0, u,
                                  epsabs=1e-14, epsrel=1e-13, limit=200)
        assert abs(u * ev.rho(u) - val) <= 1e-12 + 10.0 * err


def test_rho_classical_table_spot_values():
    # classical 6-figure table values
    assert abs(rho(2.0) - 0.306853) <= 5e-7
    assert abs(rho(3.0) - 0.0486084) <= 5e-8
    assert abs(rho(4.0) - 0.00491093) <= 5e-9


def test_log_rho_matches_rho():
    for u in (0.5, 2.0, 10.0, 25.0):
        lg = log_rho(u)
        assert abs(math.exp(lg) - rho(u)) <= 1e-12 * rho(u)


def test_rho_evaluator_coverage_and_disk_cache():
    a = RhoEvaluator(u_max=40.0)
    v1 = a.rho(12.5)
    assert a.coverage >= 12.5
    b = RhoEvaluator(u_max=40.0)  # second instance loads the cached pieces
    assert b.rho(12.5) == v1


# -- Ein and Laplace transforms -------------------------------------------


def _ein_oracle(s: float) -> float:
    # Ein(s) = gamma + log|s| + E1(s) for s > 0; for s = -x < 0 use
    # Ein(-x) = gamma + log x - Ei(x).  50-digit mpmath arithmetic.
    with mp.workdps(50):
        if s > 0:
            val = mp.euler + mp.log(s) + mp.e1(s)
        else:
            val = mp.euler + mp.log(-s) - mp.ei(-s)
        return float(val)


@pytest.mark.parametrize("s", [1e-4, 0.5, 5.0, 11.9, 12.1, 29.9, 30.5,
                               200.0, 700.0, -1e-4, -0.5, -5.0, -30.0,
                               -200.0, -700.0])
def test_ein_against_high_precision(s):
    want = _ein_oracle(s)
    assert abs(ein(s) - want) <= 1e-12 * max(1.0, abs(want))


def test_ein_zero_and_guard():
    assert ein(0.0) == 0.0
    with pytest.raises(BoundsError):
        ein(1000.0)


def test_laplace_closed_vs_numeric():
    for s in (-2.0, -1.0, 0.0, 1.0, 2.0, 5.0):
        closed = rho_laplace_closed(s)
        numeric = rho_laplace_numeric(s)
        assert abs(numeric - closed) <= 1e-8 * abs(closed)


def test_rho_integral_is_exp_gamma():
    assert abs(rho_laplace_numeric(0.0) - EXP_GAMMA) <= 1e-8


def test_delta_shifted_sum_identity():
    # delta + sum_{n >= 1} (n + delta) rho(n + delta) = e^gamma for all
    # delta in [0, 1]; measured agreement is ~1e-15
    for d in (0.0, 0.25, 0.5, 1.0):
        assert abs(euler_gamma_sum_identity(d) - EXP_GAMMA) <= 1e-6
    with pytest.raises(DomainError):
        euler_gamma_sum_identity(1.5)


# -- omega -----------------------------------------------------------------


def test_omega_closed_form_and_limit():
    assert omega(1.5) == 2.0 / 3.0
    assert omega(1.0) == 1.0
    assert abs(omega(20.0) - EXP_NEG_GAMMA) <= 1e-10
    with pytest.raises(DomainError):
        omega(0.8)


def test_omega_difference_changes_sign_in_every_unit_interval():
    ev = default_omega()
    for k in range(3, 16):
        samples = [ev.omega_minus_limit(k + t)
                   for t in np.linspace(0.0, 1.0, 65)]
        assert min(samples) < 0.0 < max(samples), k


def test_omega_laplace_pairing():
    # 1 + omega-hat(s) = 1 / (s rho-hat(s)) with omega taken as 0 below 1
    for s in (0.5, 1.0, 2.0, 5.0):
        lhs = 1.0 + omega_laplace_numeric(s)
        rhs = 1.0 / (s * rho_laplace_closed(s))
        assert abs(lhs - rhs) <= 1e-6 * abs(rhs)
    with pytest.raises(DomainError):
        omega_laplace_numeric(0.0)


# -- sigma_kappa and tau_delta ----------------------------------------------


def test_sigma_one_is_rho():
    for u in np.linspace(0.1, 20.0, 64):
        assert abs(sigma_kappa(float(u), 1.0) - rho(float(u))) <= 1e-10


def test_sigma_initial_power_segment():
    for kappa in (0.5, 2.0, 3.0):
        for u in (0.3, 0.7, 1.0):
            assert abs(sigma_kappa(u, kappa) - u ** (kappa - 1.0)) <= 1e-10


def test_sigma_positive_and_decaying():
    vals = [sigma_kappa(u, 2.0) for u in (2.0, 4.0, 6.0, 8.0)]
    assert all(v > 0 for v in vals)
    assert vals[0] > vals[-1]


def test_sigma_non_integer_kappa_smoke():
    # half-integer kappa exercises the non-polynomial initial data path
    v = sigma_kappa(3.0, 0.5)
    assert 0.0 < v < 1.0


def test_tau_delta_extremes():
    for u in (0.5, 1.5, 3.0, 7.5):
        assert abs(tau_delta(u, 1.0) - rho(u)) <= 1e-12
    assert tau_delta(0.5, 0.5) == 1.0  # initial segment
    with pytest.raises(DomainError):
        tau_delta(2.0, 0.0)
    with pytest.raises(DomainError):
        tau_delta(2.0, 1.5)


def test_tau_delta_monotone_in_delta():
    # thinning the primes (smaller delta) leaves more unsieved integers
    for u in (2.0, 4.0):
        vals = [tau_delta(u, d) for d in (0.25, 0.5, 0.75, 1.0)]
        assert all(a > b for a, b in zip(vals, vals[1:]))


# -- series and step-function brackets --------------------------------------


def test_ramanujan_nested_integrals():
    assert ramanujan_Ik(3.0, 0) == 1.0
    assert ramanujan_Ik(3.0, 1) == math.log(3.0)
    assert ramanujan_Ik(1.5, 2) == 0.0  # support starts at u = k
    with pytest.raises(BoundsError):
        ramanujan_Ik(3.0, 6)
    with pytest.raises(BoundsError):
        ramanujan_Ik(7.0, 2)
    with pytest.raises(DomainError):
        ramanujan_Ik(3.0, -1)


def test_ramanujan_series_reproduces_rho():
    # terminating series; measured max rel error 1.2e-13 on this grid
    for u in (0.5, 1.5, 2.5, 3.3, 4.5):
        assert abs(ramanujan_rho_series(u) - rho(u)) <= 1e-10 * rho(u)


def test_canfield_brackets_rho():
    for N in (10, 100):
        for u in (1.1, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0):
            j = int(u * N)
            assert canfield_B(N, j) <= rho(u) <= canfield_A(N, j)


def test_canfield_flat_head():
    assert canfield_A(10, 9) == 1.0
    assert canfield_B(10, 9) == 1.0


def test_canfield_generating_series():
    # x exp(x + x^2/2 + ... + x^N/N) = sum_j A(N, j) x^{j+1}: the Taylor
    # coefficients obey m E_m = sum_{k<=N} E_{m-k}, the same window
    # recurrence A satisfies.  Exact rational series for N = 4.
    N, top = 4, 12
    g = [Fraction(0)] + [Fraction(1, k) for k in range(1, N + 1)]
    E = [Fraction(1)]
    for m in range(1, top + 1):
        acc = Fraction(0)
        for k in range(1, min(N, m) + 1):
            acc += k * g[k] * E[m - k]
        E.append(acc / m)
    for j in range(top + 1):
        a = canfield_A(N, j)
        assert abs(a - float(E[j])) <= 1e-12 * max(1.0, a), j


def test_canfield_guards():
    with pytest.raises(DomainError):
        canfield_A(1, 5)
    with pytest.raises(DomainError):
        canfield_B(10, 0)  # B starts at j = 1
    with pytest.raises(BoundsError):
        canfield_A(10**4, 10**4)


# -- constants ---------------------------------------------------------------


def test_gamma_literals_consistent():
    assert abs(math.exp(EULER_GAMMA) - EXP_GAMMA) <= 1e-15 * EXP_GAMMA
    assert abs(EXP_GAMMA * EXP_NEG_GAMMA - 1.0) <= 1e-15
    with mp.workdps(30):
        assert abs(EULER_GAMMA - float(mp.euler)) == 0.0
