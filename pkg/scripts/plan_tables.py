"""Scaling/node-count plans for the heat and advection-diffusion norms.

Prints one CSV row per (alpha, rule): alpha,rule,l,n,points,C.
"""

import argparse

from phiquad.bounds import CostModel, setup_quadrature
from phiquad.kron import infnorm_bound
from phiquad.problems import advdiff2d, heat3d


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--eps", type=float, default=1e-14)
    ap.add_argument("--p", type=int, default=20)
    ap.add_argument("--tau", type=float, default=0.125)
    args = ap.parse_args()

    systems = [("heat3d", r, heat3d, 3) for r in (4, 5, 6, 7)]
    systems += [("advdiff2d", r, advdiff2d, 2) for r in (5, 6)]
    print("problem,r,alpha,rule,l,n,points,C")
    for name, r, build, d in systems:
        A, _ = build(r)
        alpha = args.tau * infnorm_bound(A)
        for rule in ("gauss", "cc"):
            plan = setup_quadrature(args.eps, args.p, alpha, 1.0, rule, CostModel(d=d))
            print(f"{name},{r},{alpha:g},{rule},{plan.l},{plan.n},{plan.points},{plan.cost:g}")


if __name__ == "__main__":
    main()
