"""Exact friable counts against the whole estimate family.

For each (x, y) cell: the exact count Psi(x, y), the continuous
approximation x*rho(u), the de Bruijn integral count, the saddle-point
estimate, and the Rankin / binomial bracket, all as ratios to exact.
"""

import argparse
import math

from friable import (
    estimate_bundle,
    phi_buchstab_estimate,
    phi_debruijn_refined,
    phi_exact,
    sieve_primes,
)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--prime-limit", type=int, default=10**6)
    args = ap.parse_args()
    table = sieve_primes(args.prime_limit)

    cells = [(10**4, 30.0), (10**4, 100.0), (10**5, 50.0),
             (10**5, 316.23), (10**6, 100.0), (10**6, 1000.0)]
    print(f"{'x':>9} {'y':>8} {'u':>6} {'exact':>10} "
          f"{'dickman':>9} {'debruijn':>9} {'saddle':>9} "
          f"{'rankin':>9} {'binom':>9}")
    def ratio(v, e):
        return f"{v / e:9.4f}" if v is not None else f"{'-':>9}"

    for x, y in cells:
        b = estimate_bundle(x, y, table=table)
        e = b.exact
        u = math.log(x) / math.log(y)
        print(f"{x:9d} {y:8.2f} {u:6.2f} {e:10d} "
              f"{ratio(b.dickman, e)} {ratio(b.lambda_, e)} "
              f"{ratio(b.saddle, e)} {ratio(b.rankin_upper, e)} "
              f"{ratio(b.binomial_lower, e)}")

    print()
    print("unsieved counts Phi(x, y) against the continuous estimate")
    print(f"{'x':>9} {'y':>8} {'exact':>10} {'buchstab':>9} {'refined':>9}")
    for x, y in [(10**5, 100.0), (10**6, 100.0), (10**6, 1000.0)]:
        e = phi_exact(x, y, table=table).value
        plain = phi_buchstab_estimate(x, y, table=table)
        refined = phi_debruijn_refined(x, y, table=table)
        print(f"{x:9d} {y:8.1f} {e:10d} {plain / e:9.4f} {refined / e:9.4f}")


if __name__ == "__main__":
    main()
