"""Tabulate the density functions rho, omega, sigma_kappa, tau_delta on a grid.

Prints a plot-ready table plus a second table showing how fast the two
log-scale approximations of rho close in as u grows.
"""

import argparse
import math

from friable import (
    EXP_NEG_GAMMA,
    log_rho,
    omega,
    rho,
    rho_alladi,
    rho_debruijn_asymptotic,
    sigma_kappa,
    tau_delta,
)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-u", type=float, default=8.0)
    ap.add_argument("--step", type=float, default=0.5)
    args = ap.parse_args()

    print(f"{'u':>6} {'rho':>12} {'omega':>12} {'sigma_2':>12} "
          f"{'tau_0.5':>12} {'omega-e^-g':>12}")
    u = args.step
    while u <= args.max_u + 1e-9:
        om = omega(u) if u >= 1.0 else float("nan")
        print(f"{u:6.2f} {rho(u):12.6g} {om:12.6g} "
              f"{sigma_kappa(u, 2.0):12.6g} {tau_delta(u, 0.5):12.6g} "
              f"{om - EXP_NEG_GAMMA:12.3e}")
        u += args.step

    print()
    print(f"{'u':>6} {'log rho':>14} {'corrected/exact':>16} {'plain/exact':>14}")
    for u in (5.0, 10.0, 20.0, 50.0, 100.0, 200.0):
        lr = log_rho(u)
        corrected = math.exp(rho_alladi(u, log=True) - lr)
        plain = math.exp(rho_debruijn_asymptotic(u, log=True) - lr)
        print(f"{u:6.0f} {lr:14.6f} {corrected:16.6f} {plain:14.6f}")


if __name__ == "__main__":
    main()
