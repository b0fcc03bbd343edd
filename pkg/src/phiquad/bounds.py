"""A-priori quadrature error bounds and the scaling/node-count planner.

Every bound is returned as its natural logarithm. The bound for
``phi_{p+1}(A) b`` computed with an ``n + 1`` point rule is minimised over
the Bernstein-ellipse parameter ``rho``; the minimiser is a real root
``rho > 1`` of a monic quartic whose coefficients depend on ``n``, ``p`` and
``alpha ~ ||A||_inf``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .dense import Quartic, find_root_monotone, real_roots_gt_one_batch
from .quadrature import RuleKind

LOG_144_35 = math.log(144.0 / 35.0)
SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class BoundQuery:
    """Inputs of the bound for ``phi_{p+1}(A) b`` with ``n + 1`` nodes.

    ``n`` may be real-valued; the node-count search treats it as continuous.
    """

    n: float
    p: int
    alpha: float
    beta: float
    kind: RuleKind = RuleKind.GAUSS

    def __post_init__(self):
        object.__setattr__(self, "kind", RuleKind(self.kind))
        if self.n < self.kind.min_n:
            raise ValueError(f"n={self.n} is below the minimum {self.kind.min_n} for {self.kind.value}")
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")
        if self.beta < 0 or self.p < 0:
            raise ValueError("beta and p must be nonnegative")


@dataclass(frozen=True)
class CostModel:
    """``C(n, l, p) = c1 d n + c2 (n + l p)``."""

    c1: float = 0.0
    c2: float = 1.0
    d: int = 3

    def __post_init__(self):
        if self.c1 < 0 or not self.c2 > 0 or self.d not in (1, 2, 3):
            raise ValueError(f"invalid cost model {self}")

    def __call__(self, n: int, l: int, p: int) -> float:
        return self.c1 * self.d * n + self.c2 * (n + l * p)


@dataclass(frozen=True)
class QuadraturePlan:
    l: int
    n: int
    cost: float

    @property
    def points(self) -> int:
        return self.n + 1


def _is_even(n: float) -> bool:
    return float(n).is_integer() and int(n) % 2 == 0


def _log_beta(beta: float) -> float:
    return math.log(beta) if beta > 0 else -math.inf


def log_bound_at_rho(q: BoundQuery, rho: float) -> float:
    """Log of the quadrature error bound for a fixed ellipse parameter."""
    if not rho > 1.0:
        raise ValueError("rho must exceed 1")
    p = q.p
    g = (rho + 1.0) ** 2 / (2.0 * rho)
    log_m = (p * math.log(g) - (p + 1) * math.log(2.0) - math.lgamma(p + 1)
             + 0.5 * g * q.alpha + _log_beta(q.beta))
    if q.kind is RuleKind.GAUSS:
        expo = -2.0 * q.n
    else:
        expo = -q.n if _is_even(q.n) else 1.0 - q.n
    return LOG_144_35 + log_m + expo * math.log(rho) - math.log((rho - 1.0) * (rho + 1.0))


def bound_quartic(q: BoundQuery) -> Quartic:
    """Quartic whose real roots above 1 are the stationary points in rho."""
    n, p, inv = q.n, q.p, 1.0 / q.alpha
    a2 = -(2.0 + 8.0 * p * inv)
    if q.kind is RuleKind.GAUSS:
        return Quartic(-4.0 * inv * (2.0 * (n + 1.0) - p), a2, 4.0 * inv * (2.0 * n + p))
    if _is_even(n):
        n = n + 1.0
    return Quartic(-4.0 * inv * (n + 1.0 - p), a2, 4.0 * inv * (n - 1.0 + p))


def _theorem_bounds(queries) -> list[float]:
    polys = [bound_quartic(q) for q in queries]
    all_roots = real_roots_gt_one_batch(polys)
    out = []
    for q, P, roots in zip(queries, polys, all_roots):
        if not roots:
            # P(1) = -8/alpha < 0 and P -> +inf, so a root above 1 exists;
            # reached only if the simultaneous iteration misclassified it.
            hi = 2.0
            while P(hi) <= 0.0:
                hi *= 2.0
                if hi > 1e300:
                    raise ArithmeticError(f"no real root > 1 for {q}")
            roots = [find_root_monotone(P, 1.0, hi, tol=1e-15)]
        out.append(min(log_bound_at_rho(q, r) for r in roots))
    return out


def theorem_bound(q: BoundQuery) -> float:
    """Log of the error bound for ``phi_{p+1}(A) b``, minimised over rho."""
    return _theorem_bounds([q])[0]


def corollary_bound(q: BoundQuery) -> float:
    """Closed-form (looser) log bound, valid above an ``n`` threshold."""
    p, alpha, n = q.p, q.alpha, q.n
    if q.kind is RuleKind.GAUSS:
        threshold = max(2, math.ceil((1.0 + SQRT2) / 4.0 * alpha + p / 2.0))
    else:
        threshold = max(4, math.ceil((1.0 + SQRT2) / 2.0 * alpha + p))
    if n < threshold:
        raise ValueError(f"corollary needs n >= {threshold}, got n={n}")
    if q.kind is RuleKind.GAUSS:
        k = 2.0 * n - p
    else:
        m = math.floor(n)
        k = (m if m % 2 == 0 else m - 1) - p
    return (_log_beta(q.beta) - (p + 1) * math.log(2.0) - math.lgamma(p + 1)
            - k * math.log(k / (0.5 * math.e * alpha)))


def quaderr(n: float, p: int, alpha: float, beta: float, kind=RuleKind.GAUSS) -> float:
    """Log of a bound valid for all of ``phi_1 b, ..., phi_p b``."""
    return _quaderr(float(n), int(p), float(alpha), float(beta), RuleKind(kind))


@lru_cache(maxsize=4096)
def _quaderr(n: float, p: int, alpha: float, beta: float, kind: RuleKind) -> float:
    if p < 1:
        raise ValueError("p must be >= 1")
    if beta == 0:
        return -math.inf
    queries = [BoundQuery(n, j, alpha, beta, kind) for j in range(p)]
    return max(_theorem_bounds(queries))


def quadnodes(eps: float, p: int, alpha: float, beta: float, kind=RuleKind.GAUSS) -> int:
    """Smallest node parameter ``n`` (rule of ``n + 1`` points) whose bound
    does not exceed ``eps``."""
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    kind = RuleKind(kind)
    log_eps = math.log(eps)
    n = kind.min_n

    def h(m):
        return quaderr(m, p, alpha, beta, kind) - log_eps

    if h(n) <= 0:
        return n
    n *= 2
    while h(n) > 0:
        n *= 2
    # only the integer ceiling matters; it is corrected exactly below
    root = find_root_monotone(h, n / 2, n, tol=1e-6)
    n = max(kind.min_n, math.ceil(root))
    # the continuous root can sit a hair on either side of an integer
    while n > kind.min_n and h(n - 1) <= 0:
        n -= 1
    while h(n) > 0:
        n += 1
    return n


def setup_quadrature(eps: float, p: int, alpha: float, beta: float,
                     kind=RuleKind.GAUSS, cost: CostModel | None = None) -> QuadraturePlan:
    """Cheapest (scaling, node count) pair meeting the tolerance ``eps``.

    Scans ``l`` downward from ``ceil(log2(alpha))`` and stops at the first
    ``l`` whose modelled cost exceeds the best one found.
    """
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    cost = cost or CostModel()
    l_max = max(0, math.ceil(math.log2(alpha)))
    best = None
    for l in range(l_max, -1, -1):
        n = quadnodes(eps, p, alpha / 2.0**l, beta, kind)
        c = cost(n, l, p)
        if best is None or c < best.cost:
            best = QuadraturePlan(l, n, c)
        else:
            break
    return best
