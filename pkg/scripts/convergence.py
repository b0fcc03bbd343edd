"""Temporal convergence of the exponential Euler, RK2 and RK3 methods on the
semilinear manufactured-solution problem, with fitted slopes."""

import argparse

import numpy as np

from phiquad.cli import converge_table


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--r", type=int, default=5)
    ap.add_argument("--kmax", type=int, default=6, help="finest step is 2**-kmax")
    ap.add_argument("--rule", choices=["gauss", "cc"], default="gauss")
    args = ap.parse_args()

    taus = [2.0**-k for k in range(1, args.kmax + 1)]
    rows, _ = converge_table(args.r, taus, mode=args.rule)
    print("tau,err_euler,err_rk2,err_rk3")
    for row in rows:
        print(",".join(f"{v:.6e}" for v in row))
    errs = np.array([row[1:] for row in rows])
    fit = slice(1, None) if len(taus) > 4 else slice(None)
    for name, col in zip(("euler", "rk2", "rk3"), errs.T):
        slope = np.polyfit(np.log(taus[fit]), np.log(col[fit]), 1)[0]
        print(f"# slope {name}: {slope:.2f}")


if __name__ == "__main__":
    main()
