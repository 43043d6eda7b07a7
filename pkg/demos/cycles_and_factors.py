"""The permutation side of the story.

The normalized longest cycle of a random permutation and the largest prime
factor of a random integer share one limit law.  This prints the exact
finite-n cycle statistics next to their integer counterparts.
"""

from friable import (
    golomb_dickman_rho,
    golomb_dickman_shepp_lloyd,
    longest_cycle_cdf,
    mu_exact,
    rho,
    sum_log_P,
    sum_log_P_prediction,
)


def main() -> None:
    a = golomb_dickman_rho()
    b = golomb_dickman_shepp_lloyd()
    print("Golomb-Dickman constant, two independent quadrature routes")
    print(f"  via the rho tail integral : {a:.15f}")
    print(f"  via the Shepp-Lloyd route : {b:.15f}")
    print(f"  |difference|              : {abs(a - b):.2e}")
    print()

    print("expected longest cycle, exact rationals")
    print(f"{'n':>3} {'L_n':>14} {'mu_n = L_n/n':>16} {'float':>10}")
    for n in (1, 2, 3, 4, 6, 10, 16, 20):
        s = mu_exact(n)
        print(f"{n:3d} {str(s.L_n):>14} {str(s.mu_n):>16} {float(s.mu_n):10.6f}")
    print(f"  limit is the constant above: {a:.6f}")
    print()

    print("P(longest cycle <= n/u) vs the integer density rho(u), n = 20")
    print(f"{'u':>5} {'exact cdf':>12} {'rho(u)':>10} {'gap':>9}")
    for u in (1.0, 1.5, 2.0, 2.5, 3.0):
        c = longest_cycle_cdf(20, u)
        print(f"{u:5.1f} {float(c):12.6f} {rho(u):10.6f} "
              f"{float(c) - rho(u):9.2e}")
    print(f"  (n = 4, u = 2 exactly: {longest_cycle_cdf(4, 2.0)})")
    print()

    x = 10**6
    s = sum_log_P(x)
    m = sum_log_P_prediction(x)
    print(f"sum of log(largest prime factor) over n <= {x}")
    print(f"  measured  : {s:.1f}")
    print(f"  predicted : {m:.1f}   (ratio {s / m:.5f})")


if __name__ == "__main__":
    main()
