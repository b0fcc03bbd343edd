"""Exponential Runge-Kutta methods of orders 1-3 for ``u' + A u = f(t, u)``.

A stage reads ``U_i = u + tau * sum_j a_ij(-c_i tau A) D_j`` and the step
``u+ = u + tau * sum_i b_i(-tau A) D_i`` with defects
``D_i = f(t + c_i tau, U_i) - A u``. Every coefficient is a linear
combination of phi-functions of one argument, so each stage costs a single
phi-action call on a block of defect vectors.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bounds import CostModel
from .kron import KroneckerSum, matvec
from .phiaction import DEFAULT_EPS, phiquadmv
from .quadrature import RuleKind

C2_MIN = 1e-8


@dataclass(frozen=True)
class PhiTerm:
    """``coef * phi_{phi}(arg) D_{defect}`` (``defect`` is a 0-based stage index)."""

    coef: float
    phi: int
    defect: int


@dataclass(frozen=True)
class ExpRKTableau:
    """Stage nodes ``c`` and phi-coefficients; ``a[i]`` belongs to stage ``i + 2``."""

    name: str
    c: tuple[float, ...]
    a: tuple[tuple[PhiTerm, ...], ...]
    b: tuple[PhiTerm, ...]

    def __post_init__(self):
        if not 1 <= self.stages <= 3 or self.c[0] != 0.0:
            raise ValueError("need 1 to 3 stages with c_1 = 0")
        if len(self.a) != self.stages - 1:
            raise ValueError("one coefficient row per stage after the first")
        for i, row in enumerate(self.a, start=1):
            if any(t.defect >= i for t in row):
                raise ValueError("stage coefficients may only use earlier defects")

    @property
    def stages(self) -> int:
        return len(self.c)

    @property
    def order(self) -> int:
        return self.stages


def _check_c2(c2: float) -> float:
    c2 = float(c2)
    if not C2_MIN < c2 <= 1.0:
        raise ValueError(f"c2 must lie in ({C2_MIN}, 1], got {c2}")
    return c2


def exp_euler() -> ExpRKTableau:
    return ExpRKTableau("euler", (0.0,), (), (PhiTerm(1.0, 1, 0),))


def exp_rk2(c2: float = 0.5) -> ExpRKTableau:
    c2 = _check_c2(c2)
    w = 1.0 / (2.0 * c2)
    return ExpRKTableau(
        "rk2", (0.0, c2),
        ((PhiTerm(c2, 1, 0),),),
        (PhiTerm(1.0 - w, 1, 0), PhiTerm(w, 1, 1)),
    )


def exp_rk3(c2: float = 1.0 / 3.0) -> ExpRKTableau:
    c2 = _check_c2(c2)
    k = 4.0 / (9.0 * c2)
    return ExpRKTableau(
        "rk3", (0.0, c2, 2.0 / 3.0),
        (
            (PhiTerm(c2, 1, 0),),
            (PhiTerm(2.0 / 3.0, 1, 0), PhiTerm(-k, 2, 0), PhiTerm(k, 2, 1)),
        ),
        (PhiTerm(1.0, 1, 0), PhiTerm(-1.5, 2, 0), PhiTerm(1.5, 2, 2)),
    )


METHODS = {"euler": exp_euler, "rk2": exp_rk2, "rk3": exp_rk3}


def tableau(method: str, c2: float | None = None) -> ExpRKTableau:
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {sorted(METHODS)}")
    if method == "euler" or c2 is None:
        return METHODS[method]()
    return METHODS[method](c2)


@dataclass
class PhiEvaluator:
    """Phi-actions ``phi_j(-s A) B`` with one quadrature plan per ``(s, p)``.

    The plan (scaling and node count) is chosen on the first call for a given
    argument and reused afterwards. ``calls`` counts phi-action evaluations.
    """

    A: KroneckerSum
    eps: float = DEFAULT_EPS
    mode: RuleKind = RuleKind.GAUSS
    cost: CostModel | None = None
    threads: int | None = None
    calls: int = 0
    plans: dict = field(default_factory=dict)

    def __call__(self, s: float, p: int, B) -> np.ndarray:
        """``(dim, p, k)`` array of ``phi_j(-s A) B[:, i]``."""
        key = (float(s), int(p))
        As = self.A.scaled(-s)
        plan = self.plans.get(key)
        self.calls += 1
        if plan is None:
            Y, info = phiquadmv(p, As, B, eps=self.eps, mode=self.mode, cost=self.cost,
                                threads=self.threads, full_output=True)
            self.plans[key] = (info["l"], info["n"] if self.mode is RuleKind.GAUSS else None)
            return Y
        l, n = plan
        return phiquadmv(p, As, B, eps=self.eps, l=l, n=n, mode=self.mode, cost=self.cost,
                         threads=self.threads)


def _combine_terms(u, tau, terms, Y, columns):
    out = u.copy()
    for t in terms:
        out += tau * t.coef * Y[:, t.phi - 1, columns[t.defect]]
    return out


def _phi_terms(phi: PhiEvaluator, s, terms, defects):
    used = sorted({t.defect for t in terms})
    p = max(t.phi for t in terms)
    Y = phi(s, p, np.column_stack([defects[j] for j in used]))
    return Y, {j: k for k, j in enumerate(used)}


def step_erk(u, t: float, tau: float, A: KroneckerSum, f, tab: ExpRKTableau,
             phi: PhiEvaluator | None = None) -> np.ndarray:
    """One exponential Runge-Kutta step of size ``tau`` from ``(t, u)``."""
    u = np.asarray(u, dtype=np.float64)
    if u.shape != (A.dim,):
        raise ValueError(f"u must have shape ({A.dim},), got {u.shape}")
    if not tau > 0:
        raise ValueError("tau must be positive")
    phi = phi or PhiEvaluator(A)
    Au = matvec(A, u)
    defects = [np.asarray(f(t, u), dtype=np.float64) - Au]
    for ci, row in zip(tab.c[1:], tab.a):
        Y, cols = _phi_terms(phi, ci * tau, row, defects)
        U = _combine_terms(u, tau, row, Y, cols)
        defects.append(np.asarray(f(t + ci * tau, U), dtype=np.float64) - Au)
    Y, cols = _phi_terms(phi, tau, tab.b, defects)
    return _combine_terms(u, tau, tab.b, Y, cols)


def step_exp_euler(u, t: float, tau: float, A: KroneckerSum, f,
                   phi: PhiEvaluator | None = None) -> np.ndarray:
    """``u + tau phi_1(-tau A) (f(t, u) - A u)``."""
    return step_erk(u, t, tau, A, f, exp_euler(), phi)


@dataclass(frozen=True, eq=False)
class SemilinearProblem:
    A: KroneckerSum
    f: object
    u0: np.ndarray
    T: float
    m: int

    def __post_init__(self):
        u0 = np.asarray(self.u0, dtype=np.float64)
        if u0.shape != (self.A.dim,):
            raise ValueError(f"u0 must have shape ({self.A.dim},), got {u0.shape}")
        if self.m < 1 or not self.T > 0:
            raise ValueError("need m >= 1 and T > 0")
        object.__setattr__(self, "u0", u0)

    @property
    def tau(self) -> float:
        return self.T / self.m


def integrate(problem: SemilinearProblem, method="rk3", *, c2: float | None = None,
              eps: float = DEFAULT_EPS, mode=RuleKind.GAUSS, threads=None,
              trajectory: bool = False, evaluator: PhiEvaluator | None = None):
    """Take ``problem.m`` uniform steps; return the final iterate, or the list
    of all ``m + 1`` iterates when ``trajectory`` is set."""
    tab = method if isinstance(method, ExpRKTableau) else tableau(method, c2)
    phi = evaluator or PhiEvaluator(problem.A, eps=eps, mode=RuleKind(mode),
                                    cost=CostModel(d=problem.A.ndim), threads=threads)
    tau = problem.tau
    u = problem.u0
    path = [u]
    for k in range(problem.m):
        u = step_erk(u, k * tau, tau, problem.A, problem.f, tab, phi)
        if trajectory:
            path.append(u)
    return path if trajectory else u

