"""Actions of phi-functions of Kronecker sums by quadrature.

``phi_j(A) b`` is the integral over [0, 1] of
``exp((1 - x) A) b x**(j-1) / (j-1)!``. A single set of integrand values
``exp((1 - x_i) A) b`` serves every ``j = 1..p`` at once, and each value is a
sequence of small dense products with 1-D exponentials.

Outputs are arrays of shape ``(dim, p)`` whose column ``j - 1`` holds
``phi_j(A) b``. When ``b`` is a block of shape ``(dim, k)`` the result has
shape ``(dim, p, k)``.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .bounds import CostModel, quadnodes, setup_quadrature
from .dense import expm
from .kron import KroneckerSum, exp_action, infnorm_bound, mode_products
from .quadrature import QuadratureRule, RuleKind, clenshaw_curtis, gauss_legendre

DEFAULT_EPS = 1e-14
MAX_P = 20
MAX_ADAPTIVE_POINTS = 2**14 + 1
# planning below this norm gains nothing and the bound quartic degenerates
ALPHA_FLOOR = 1e-3


class ConvergenceError(RuntimeError):
    pass


def _check_inputs(p: int, A: KroneckerSum, b) -> np.ndarray:
    if not 1 <= p <= MAX_P:
        raise ValueError(f"p must lie in [1, {MAX_P}], got {p}")
    b = np.asarray(b, dtype=np.float64)
    if b.ndim not in (1, 2) or b.shape[0] != A.dim:
        raise ValueError(f"b must have leading dimension {A.dim}, got shape {b.shape}")
    return b


def _map(func, items, threads):
    if threads is None:
        threads = os.cpu_count() or 1
    if threads <= 1 or len(items) <= 1:
        return [func(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, items))


def integrand_values(A: KroneckerSum, b, nodes, threads=None) -> list[np.ndarray]:
    """``exp((1 - x) A) b`` for each node ``x``, in node order."""

    def one(x):
        factors = [expm((1.0 - x) * F) for F in A.factors]
        return exp_action(factors, b)

    return _map(one, [float(x) for x in nodes], threads)


def _moment_coefficients(nodes, weights, p: int) -> np.ndarray:
    """``c[i, j-1] = w_i x_i**(j-1) / (j-1)!``."""
    nodes = np.asarray(nodes)
    c = np.empty((len(nodes), p))
    c[:, 0] = weights
    for j in range(1, p):
        c[:, j] = c[:, j - 1] * nodes / j
    return c


def _combine(values, coef: np.ndarray) -> np.ndarray:
    v0 = values[0]
    p = coef.shape[1]
    Y = np.zeros((v0.shape[0], p) + v0.shape[1:])
    for v, c in zip(values, coef):
        if v.ndim == 1:
            Y += v[:, None] * c[None, :]
        else:
            Y += v[:, None, :] * c[None, :, None]
    return Y


def phi_fixed(p: int, A: KroneckerSum, b, rule: QuadratureRule, threads=None) -> np.ndarray:
    """``phi_j(A) b`` for ``j = 1..p`` with a fixed quadrature rule."""
    b = _check_inputs(p, A, b)
    values = integrand_values(A, b, rule.nodes, threads)
    return _combine(values, _moment_coefficients(rule.nodes, rule.weights, p))


def _relative_change(Y: np.ndarray, Y_old: np.ndarray) -> float:
    num = np.max(np.abs(Y - Y_old), axis=0)
    den = np.max(np.abs(Y), axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(den > 0, num / np.where(den > 0, den, 1.0), np.where(num > 0, np.inf, 0.0))
    return float(np.max(ratio))


def phi_adaptive(p: int, A: KroneckerSum, b, eps: float = DEFAULT_EPS, threads=None,
                 full_output: bool = False):
    """``phi_j(A) b`` by nested Clenshaw-Curtis rules of 7, 13, 25, ... points.

    Each refinement keeps the integrand values at the previous nodes and only
    evaluates the new midpoints. Stops once the largest relative change of any
    column between two levels is at most ``eps``. With ``full_output`` a dict
    with the final ``points`` and ``err`` is returned as well.
    """
    b = _check_inputs(p, A, b)
    n = 3
    rule = clenshaw_curtis(2 * n + 1)
    values = integrand_values(A, b, rule.nodes, threads)
    Y = _combine(values, _moment_coefficients(rule.nodes, rule.weights, p))
    err = math.inf
    while err > eps:
        n *= 2
        if 2 * n + 1 > MAX_ADAPTIVE_POINTS:
            raise ConvergenceError(
                f"adaptive quadrature did not reach eps={eps} with {n + 1} points (err={err:.3e})")
        rule = clenshaw_curtis(2 * n + 1)
        fresh = integrand_values(A, b, rule.nodes[1::2], threads)
        merged = [None] * (2 * n + 1)
        merged[0::2] = values
        merged[1::2] = fresh
        values = merged
        Y_old = Y
        Y = _combine(values, _moment_coefficients(rule.nodes, rule.weights, p))
        err = _relative_change(Y, Y_old)
    if full_output:
        return Y, {"points": len(values), "err": err}
    return Y


def squaring_step(Y: np.ndarray, exp_factors) -> np.ndarray:
    """Map ``phi_j(A) b`` to ``phi_j(2A) b`` given the 1-D factors of ``exp(A)``."""
    Y = np.asarray(Y, dtype=np.float64)
    dim, p = Y.shape[0], Y.shape[1]
    flat = Y.reshape(dim, -1)
    EY = mode_products(list(exp_factors), flat).reshape(Y.shape)
    out = np.empty_like(Y)
    inv_fact = [1.0 / math.factorial(k) for k in range(p)]
    for i in range(1, p + 1):
        acc = EY[:, i - 1].copy()
        for j in range(1, i + 1):
            acc += inv_fact[i - j] * Y[:, j - 1]
        out[:, i - 1] = acc / 2.0**i
    return out


def phiquadmv(p: int, A: KroneckerSum, b, *, alpha: float | None = None,
              eps: float = DEFAULT_EPS, l: int | None = None, n: int | None = None,
              mode=RuleKind.GAUSS, cost: CostModel | None = None, threads=None,
              full_output: bool = False):
    """``phi_j(A) b`` for ``j = 1..p`` by quadrature plus modified squaring.

    ``mode="gauss"`` uses a fixed Gauss-Legendre rule whose size comes from the
    a-priori bound; ``mode="cc"`` uses adaptive Clenshaw-Curtis. ``alpha``
    defaults to the sum of the factor infinity norms, and the scaling ``l``
    is chosen by minimising the modelled cost unless given.
    """
    b = _check_inputs(p, A, b)
    mode = RuleKind(mode)
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    if alpha is None:
        alpha = infnorm_bound(A)
    alpha_plan = max(float(alpha), ALPHA_FLOOR)
    beta = float(np.max(np.abs(b))) if b.size else 0.0
    if cost is None:
        cost = CostModel(d=A.ndim)
    if l is None:
        plan = setup_quadrature(eps, p, alpha_plan, beta, mode, cost)
        l = plan.l
        if n is None:
            n = plan.n
    elif l < 0:
        raise ValueError("l must be nonnegative")
    if mode is RuleKind.GAUSS and n is None:
        n = quadnodes(eps, p, alpha_plan / 2.0**l, beta, mode)

    As = A.scaled(2.0**-l)
    info = {"l": l, "alpha": float(alpha), "beta": beta, "rule": mode.value}
    if mode is RuleKind.GAUSS:
        Y = phi_fixed(p, As, b, gauss_legendre(n + 1), threads)
        info.update(n=n, points=n + 1)
    else:
        Y, extra = phi_adaptive(p, As, b, eps, threads, full_output=True)
        info.update(n=extra["points"] - 1, **extra)

    E = [expm(F) for F in As.factors]
    for k in range(l):
        Y = squaring_step(Y, E)
        if k < l - 1:
            E = [F @ F for F in E]
    if full_output:
        return Y, info
    return Y


def phi_lincomb(bs, A: KroneckerSum, rule: QuadratureRule, threads=None) -> np.ndarray:
    """``sum_j phi_j(A) b_j`` with one quadrature pass and no scaling.

    ``bs`` is a sequence of ``p`` vectors.
    """
    B = np.column_stack([np.asarray(v, dtype=np.float64) for v in bs])
    if B.shape[0] != A.dim:
        raise ValueError(f"expected vectors of length {A.dim}, got {B.shape[0]}")
    p = B.shape[1]
    coef = _moment_coefficients(rule.nodes, np.ones(len(rule)), p)

    def one(i):
        x = float(rule.nodes[i])
        factors = [expm((1.0 - x) * F) for F in A.factors]
        return exp_action(factors, B @ coef[i])

    values = _map(one, list(range(len(rule))), threads)
    out = np.zeros(A.dim)
    for w, v in zip(rule.weights, values):
        out += w * v
    return out


@dataclass(frozen=True)
class PhiRequest:
    """Bundled arguments of :func:`phiquadmv`."""

    p: int
    A: KroneckerSum
    b: np.ndarray
    alpha: float | None = None
    eps: float = DEFAULT_EPS
    l: int | None = None
    mode: RuleKind = RuleKind.GAUSS
    cost: CostModel | None = None
    threads: int | None = field(default=None, compare=False)

    def run(self, full_output: bool = False):
        return phiquadmv(self.p, self.A, self.b, alpha=self.alpha, eps=self.eps, l=self.l,
                         mode=self.mode, cost=self.cost, threads=self.threads,
                         full_output=full_output)
