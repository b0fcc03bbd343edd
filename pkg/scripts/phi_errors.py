"""Relative errors of phi_1..phi_p(-tau A) b against the dense oracle for the
heat (problem 1) and advection-diffusion (problem 2) systems."""

import argparse
import time

from phiquad.kron import assemble_dense
from phiquad.oracle import MAX_ORACLE_DIM, phi_dense_oracle
from phiquad.phiaction import phiquadmv
from phiquad.problems import advdiff2d, heat3d, relative_error


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=int, default=20)
    ap.add_argument("--tau", type=float, default=0.125)
    args = ap.parse_args()

    print("problem,r,dim,rule,p,rel_err,seconds")
    for problem, r, build in ((1, 2, heat3d), (1, 3, heat3d), (2, 3, advdiff2d), (2, 4, advdiff2d)):
        A, b = build(r)
        M = A.scaled(-args.tau)
        if M.dim > MAX_ORACLE_DIM:
            continue
        ref = phi_dense_oracle(args.p, assemble_dense(M), b)
        for rule in ("gauss", "cc"):
            for p in range(1, args.p + 1):
                t0 = time.perf_counter()
                Y = phiquadmv(p, M, b, mode=rule)
                dt = time.perf_counter() - t0
                err = relative_error(Y[:, p - 1], ref[:, p - 1])
                print(f"{problem},{r},{M.dim},{rule},{p},{err:.3e},{dt:.4f}")


if __name__ == "__main__":
    main()
