"""Command-line front end: ``plan``, ``bench``, ``converge`` and ``phi``.

Exit status is 0 on success, 2 for invalid flags or inputs and 3 when the
adaptive quadrature fails to converge.
"""

from __future__ import annotations

import argparse
import sys
from contextlib import contextmanager

import numpy as np

from .bounds import CostModel, setup_quadrature
from .dense import format_value, read_matrix
from .integrators import PhiEvaluator, SemilinearProblem, integrate
from .kron import KroneckerSum, assemble_dense
from .oracle import MAX_ORACLE_DIM, phi_dense_oracle
from .phiaction import ConvergenceError, phiquadmv
from .problems import (ExperimentSpec, advdiff2d, heat3d, ho_exact, hochbruck_ostermann,
                       relative_error)
from .quadrature import RuleKind

DEFAULT_TAUS = "0.5,0.25,0.125,0.0625,0.03125,0.015625"


class FlagError(ValueError):
    pass


def _fmt_alpha(alpha: float) -> str:
    return np.format_float_positional(alpha, trim="-")


@contextmanager
def _output(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def _cost(args, d: int) -> CostModel:
    return CostModel(c1=args.c1, c2=args.c2_cost, d=d)


def _plan_line(l, n, rule, eps) -> str:
    return f"# plan: l={l},n={n},rule={rule},eps={format_value(eps)}\n"


def cmd_plan(args) -> int:
    if not args.alpha > 0:
        raise FlagError("--alpha must be positive")
    plan = setup_quadrature(args.eps, args.p, args.alpha, args.beta, args.rule,
                            _cost(args, args.d))
    with _output(args.out) as fh:
        fh.write(f"{_fmt_alpha(args.alpha)},{args.rule},{plan.l},{plan.n},"
                 f"{format_value(plan.cost)}\n")
    return 0


def _problem_system(problem: int, r: int):
    if problem == 1:
        return heat3d(r)
    if problem == 2:
        return advdiff2d(r)
    A, _, u0, _ = hochbruck_ostermann(r)
    return A, u0


def cmd_bench(args) -> int:
    spec = ExperimentSpec(args.problem, args.r, args.p, args.tau, args.rule, args.eps,
                          verify=args.verify)
    A, b = _problem_system(spec.problem, spec.r)
    M = A.scaled(-spec.tau)
    if spec.verify and M.dim > MAX_ORACLE_DIM:
        raise FlagError(f"--verify needs dim <= {MAX_ORACLE_DIM}; this system has {M.dim}")
    ref = phi_dense_oracle(spec.p_max, assemble_dense(M), b) if spec.verify else None
    cost = _cost(args, M.ndim)
    rows, info = [], None
    for p in range(1, spec.p_max + 1):
        Y, info = phiquadmv(p, M, b, eps=spec.eps, l=args.l, mode=spec.mode, cost=cost,
                            threads=args.threads, full_output=True)
        err = relative_error(Y[:, p - 1], ref[:, p - 1]) if ref is not None else float("nan")
        rows.append((p, err))
    with _output(args.out) as fh:
        fh.write("p,rel_err\n")
        for p, err in rows:
            fh.write(f"{p},{format_value(err)}\n")
        fh.write(f"# dim: {M.dim}\n")
        fh.write(_plan_line(info["l"], info["n"], info["rule"], spec.eps))
    return 0


def _parse_taus(text: str) -> list[float]:
    try:
        taus = [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise FlagError(f"bad --taus list {text!r}") from exc
    if not taus or any(not t > 0 for t in taus):
        raise FlagError("--taus needs positive step sizes")
    return taus


def converge_table(r: int, taus, c2=None, mode=RuleKind.GAUSS, eps=1e-14, threads=None,
                   T: float = 1.0):
    """Final-time max-norm errors of each method for each step size.

    Returns the rows ``(tau, err_euler, err_rk2, err_rk3)`` and the
    evaluator used for the last run.
    """
    A, nodes, u0, f = hochbruck_ostermann(r)
    exact = ho_exact(nodes)(T)
    rows, phi = [], None
    for tau in taus:
        m = round(T / tau)
        if m < 1 or abs(m * tau - T) > 1e-12 * T:
            raise FlagError(f"tau={tau} does not divide T={T}")
        row = [tau]
        for method in ("euler", "rk2", "rk3"):
            phi = PhiEvaluator(A, eps=eps, mode=RuleKind(mode), cost=CostModel(d=A.ndim),
                               threads=threads)
            u = integrate(SemilinearProblem(A, f, u0, T, m), method,
                          c2=None if method == "euler" else c2, evaluator=phi)
            row.append(float(np.max(np.abs(u - exact))))
        rows.append(tuple(row))
    return rows, phi


def cmd_converge(args) -> int:
    ExperimentSpec(3, args.r, tau=1.0, mode=args.rule, eps=args.eps, c2=args.c2_rk)
    rows, phi = converge_table(args.r, _parse_taus(args.taus), args.c2_rk, args.rule,
                               args.eps, args.threads)
    l, n = next(reversed(phi.plans.values()))
    with _output(args.out) as fh:
        fh.write("tau,err_euler,err_rk2,err_rk3\n")
        for row in rows:
            fh.write(",".join(format_value(v) for v in row) + "\n")
        fh.write(_plan_line(l, n, args.rule, args.eps))
    return 0


def cmd_phi(args) -> int:
    A = KroneckerSum(tuple(read_matrix(path) for path in args.matrix_file))
    b = np.ones(A.dim) if args.vector_file is None else read_matrix(args.vector_file).reshape(-1)
    Y, info = phiquadmv(args.p, A, b, eps=args.eps, l=args.l, mode=args.rule,
                        cost=_cost(args, A.ndim), threads=args.threads, full_output=True)
    with _output(args.out) as fh:
        fh.write(",".join(f"phi{j}" for j in range(1, args.p + 1)) + "\n")
        for row in Y:
            fh.write(",".join(format_value(v) for v in row) + "\n")
        fh.write(_plan_line(info["l"], info["n"], info["rule"], args.eps))
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--eps", type=float, default=1e-14)
    common.add_argument("--rule", choices=[k.value for k in RuleKind], default="gauss")
    common.add_argument("--c1", type=float, default=0.0)
    common.add_argument("--c2-cost", type=float, default=1.0)
    common.add_argument("--threads", type=int, default=None)
    common.add_argument("--out", default=None, help="output file (default: stdout)")
    scaling = common.add_mutually_exclusive_group()
    scaling.add_argument("--l", type=int, default=None, help="fixed scaling exponent")
    scaling.add_argument("--auto-plan", action="store_true", help="choose l by the cost model")

    parser = argparse.ArgumentParser(prog="phiquad", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    plan = sub.add_parser("plan", parents=[common], help="print the (l, n, C) plan")
    plan.add_argument("--p", type=int, default=20)
    plan.add_argument("--alpha", type=float, required=True)
    plan.add_argument("--beta", type=float, default=1.0)
    plan.add_argument("--d", type=int, choices=[1, 2, 3], default=3)
    plan.set_defaults(func=cmd_plan)

    bench = sub.add_parser("bench", parents=[common], help="phi_1..phi_p on a test problem")
    bench.add_argument("--problem", type=int, choices=[1, 2, 3], required=True)
    bench.add_argument("--r", type=int, required=True)
    bench.add_argument("--p", type=int, default=20)
    bench.add_argument("--tau", type=float, default=0.125)
    bench.add_argument("--verify", action="store_true")
    bench.set_defaults(func=cmd_bench)

    conv = sub.add_parser("converge", parents=[common], help="time convergence on problem 3")
    conv.add_argument("--r", type=int, default=5)
    conv.add_argument("--c2-rk", type=float, default=None)
    conv.add_argument("--taus", default=DEFAULT_TAUS)
    conv.set_defaults(func=cmd_converge)

    phi = sub.add_parser("phi", parents=[common], help="phi-actions for matrices read from files")
    phi.add_argument("--matrix-file", nargs="+", required=True)
    phi.add_argument("--vector-file", default=None)
    phi.add_argument("--p", type=int, default=1)
    phi.set_defaults(func=cmd_phi)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads is not None and args.threads < 1:
        parser.error("--threads must be >= 1")
    try:
        return args.func(args)
    except ConvergenceError as exc:
        print(f"phiquad: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"phiquad: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
