"""Tensor-product finite-element test problems.

All 1-D operators are ``M^{-1} K`` for piecewise-linear elements with the
mass matrix lumped by the trapezoidal (2-point Lobatto) rule, so the
semidiscrete systems read ``u' + A u = f`` with ``A`` a Kronecker sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kron import KroneckerSum

DIRICHLET = "dirichlet"
NEUMANN = "neumann"

# Desk-scale refinement caps; problem 1 is cheaper to verify than to run.
R_CAPS = {1: (5, 7), 2: (8, 8), 3: (8, 8)}


@dataclass(frozen=True, eq=False)
class Mesh1D:
    nodes: np.ndarray
    bc: tuple[str, str] = (DIRICHLET, DIRICHLET)

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=np.float64)
        if nodes.ndim != 1 or len(nodes) < 2:
            raise ValueError("a mesh needs at least two nodes")
        if np.any(np.diff(nodes) <= 0):
            raise ValueError("mesh nodes must be strictly increasing")
        for tag in self.bc:
            if tag not in (DIRICHLET, NEUMANN):
                raise ValueError(f"unknown boundary condition {tag!r}")
        nodes.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "bc", tuple(self.bc))

    @property
    def n_elem(self) -> int:
        return len(self.nodes) - 1

    @property
    def free(self) -> np.ndarray:
        """Indices of nodes that carry a degree of freedom."""
        idx = np.arange(len(self.nodes))
        keep = np.ones(len(idx), dtype=bool)
        keep[0] = self.bc[0] != DIRICHLET
        keep[-1] = self.bc[1] != DIRICHLET
        return idx[keep]

    @property
    def dofs(self) -> np.ndarray:
        return self.nodes[self.free]

    @classmethod
    def uniform(cls, n_elem: int, interval=(0.0, 1.0), bc=(DIRICHLET, DIRICHLET)) -> "Mesh1D":
        return cls(np.linspace(interval[0], interval[1], n_elem + 1), bc)


def fe_advdiff_1d(mesh: Mesh1D, eps_diff: float, gamma: float = 0.0) -> np.ndarray:
    """Lumped-mass Galerkin matrix of ``-eps_diff u'' + gamma u'``.

    Dirichlet nodes are removed; a Neumann end keeps its degree of freedom
    (natural condition, boundary data not assembled).
    """
    x = mesh.nodes
    N = len(x)
    K = np.zeros((N, N))
    m = np.zeros(N)
    for k, h in enumerate(np.diff(x)):
        d = eps_diff / h
        K[k, k] += d - 0.5 * gamma
        K[k, k + 1] += -d + 0.5 * gamma
        K[k + 1, k] += -d - 0.5 * gamma
        K[k + 1, k + 1] += d + 0.5 * gamma
        m[k] += 0.5 * h
        m[k + 1] += 0.5 * h
    free = mesh.free
    return K[np.ix_(free, free)] / m[free, None]


def fe_laplacian_1d(n_elem: int, interval=(0.0, 1.0), bc=(DIRICHLET, DIRICHLET)) -> np.ndarray:
    """Lumped-mass P1 Laplacian on a uniform mesh; ``(1/h^2) tridiag(-1, 2, -1)``
    for Dirichlet ends."""
    if n_elem < 2:
        raise ValueError("n_elem must be >= 2")
    return fe_advdiff_1d(Mesh1D.uniform(n_elem, interval, bc), 1.0)


def shishkin_transition(n_elem: int, eps_diff: float) -> float:
    return min(0.5, 2.0 * eps_diff * math.log(n_elem))


def shishkin_mesh(n_elem: int, eps_diff: float, interval=(-1.0, 0.0), sigma: float | None = None,
                  bc=(NEUMANN, DIRICHLET)) -> Mesh1D:
    """Piecewise-uniform mesh refined towards the right end of ``interval``.

    Half of the elements cover ``[b - sigma, b]`` and half ``[a, b - sigma]``
    (``sigma`` relative to a unit-length interval).
    """
    if n_elem < 4 or n_elem % 2:
        raise ValueError("n_elem must be even and >= 4")
    a, b = interval
    if sigma is None:
        sigma = shishkin_transition(n_elem, eps_diff)
    sigma = sigma * (b - a)
    half = n_elem // 2
    coarse = np.linspace(a, b - sigma, half + 1)
    fine = np.linspace(b - sigma, b, half + 1)
    return Mesh1D(np.concatenate([coarse, fine[1:]]), bc)


def relative_error(v, v_ref) -> float:
    """``||v_ref - v||_inf / ||v_ref||_inf``."""
    v, v_ref = np.asarray(v, dtype=np.float64), np.asarray(v_ref, dtype=np.float64)
    if v.shape != v_ref.shape:
        raise ValueError(f"shape mismatch {v.shape} vs {v_ref.shape}")
    ref = np.max(np.abs(v_ref))
    if ref == 0:
        raise ValueError("reference vector is zero")
    return float(np.max(np.abs(v_ref - v)) / ref)


def grid(*coords) -> list[np.ndarray]:
    """Broadcast 1-D coordinates to flat arrays in vectorization order."""
    return [g.reshape(-1) for g in np.meshgrid(*coords, indexing="ij")]


# --- problem 1: heat equation on the unit cube ------------------------------

def heat3d(r: int) -> tuple[KroneckerSum, np.ndarray]:
    """Laplacian on (0,1)^3 with ``2**r`` elements per direction and the
    nodal vector of ``sin(pi x) sin(pi y) sin(pi z)``."""
    n = 2**r
    F = fe_laplacian_1d(n)
    x = np.arange(1, n) / n
    s = np.sin(np.pi * x)
    b = np.einsum("i,j,k->ijk", s, s, s).reshape(-1)
    return KroneckerSum((F, F, F)), b


# --- problem 2: Eriksson-Johnson advection-diffusion ------------------------

EJ_EPS = 1e-2
# Layer width of the x mesh. Independent of the refinement: it makes the
# finest x spacing 1/(8 * 2**r), so ||tau A||_inf = 332.8 * 4**(r - 5).
EJ_SIGMA = 1.0 / 16.0


def _ej_rates(eps_diff: float) -> tuple[float, float]:
    # rates as printed for this benchmark: (1 +- sqrt(4 pi^2 eps^2)) / (2 eps)
    root = math.sqrt(4.0 * math.pi**2 * eps_diff**2)
    return (1.0 + root) / (2.0 * eps_diff), (1.0 - root) / (2.0 * eps_diff)


def eriksson_johnson_initial(x, y, eps_diff: float = EJ_EPS):
    r1, r2 = _ej_rates(eps_diff)
    layer = (np.exp(r1 * x) - np.exp(r2 * x)) / (math.exp(-r1) - math.exp(-r2))
    return 10.0 * x * (y**2 - 0.25) + layer * np.cos(np.pi * y)


def advdiff2d(r: int, eps_diff: float = EJ_EPS, sigma: float | None = EJ_SIGMA
              ) -> tuple[KroneckerSum, np.ndarray]:
    """``-eps Lap + d/dx`` on (-1,0) x (-0.5,0.5), Shishkin mesh in x.

    Neumann at ``x = -1``, Dirichlet elsewhere, so the x factor has ``2**r``
    rows and the y factor ``2**r - 1``. ``sigma=None`` uses the
    ``2 eps ln N`` transition of :func:`shishkin_mesh`.
    """
    n = 2**r
    mx = shishkin_mesh(n, eps_diff, (-1.0, 0.0), sigma=sigma, bc=(NEUMANN, DIRICHLET))
    my = Mesh1D.uniform(n, (-0.5, 0.5), (DIRICHLET, DIRICHLET))
    Ax = fe_advdiff_1d(mx, eps_diff, gamma=1.0)
    Ay = fe_advdiff_1d(my, eps_diff, gamma=0.0)
    X, Y = grid(mx.dofs, my.dofs)
    return KroneckerSum((Ax, Ay)), eriksson_johnson_initial(X, Y, eps_diff)


# --- problem 3: semilinear manufactured solution ----------------------------

def ho_exact(nodes2d):
    """``t -> x(1-x) y(1-y) e^t`` at the grid built from ``nodes2d``."""
    X, Y = grid(*nodes2d)
    shape = X * (1.0 - X) * Y * (1.0 - Y)
    return lambda t: shape * math.exp(t)


def ho_linear_source(nodes2d):
    """``t -> u_t - Lap u - 1/(1 + u^2)`` for the exact solution."""
    X, Y = grid(*nodes2d)
    exact = ho_exact(nodes2d)
    neg_lap = 2.0 * Y * (1.0 - Y) + 2.0 * X * (1.0 - X)

    def f_lin(t):
        ue = exact(t)
        return ue + math.exp(t) * neg_lap - 1.0 / (1.0 + ue * ue)

    return f_lin


def problem3_manufactured(t: float, nodes2d):
    """Exact nodal solution at time ``t`` and the right-hand side
    ``f(t, u) = 1/(1+u^2) + f_lin(x, y, t)`` of ``u_t - Lap u = f``."""
    f_lin = ho_linear_source(nodes2d)

    def f(s, u):
        return 1.0 / (1.0 + u * u) + f_lin(s)

    return ho_exact(nodes2d)(t), f


def hochbruck_ostermann(r: int):
    """Laplacian on (0,1)^2 with ``2**r`` elements per direction, the
    interior node coordinates, and the manufactured data at ``t = 0``."""
    n = 2**r
    F = fe_laplacian_1d(n)
    x = np.arange(1, n) / n
    u0, f = problem3_manufactured(0.0, (x, x))
    return KroneckerSum((F, F)), (x, x), u0, f


@dataclass(frozen=True)
class ExperimentSpec:
    problem: int
    r: int
    p_max: int = 20
    tau: float = 0.125
    mode: str = "gauss"
    eps: float = 1e-14
    c2: float | None = None
    verify: bool = False

    def __post_init__(self):
        if self.problem not in R_CAPS:
            raise ValueError(f"unknown problem {self.problem}")
        cap_verify, cap = R_CAPS[self.problem]
        limit = cap_verify if self.verify else cap
        if not 2 <= self.r <= limit:
            raise ValueError(f"problem {self.problem}: r must lie in [2, {limit}], got {self.r}")
        if not 1 <= self.p_max <= 20:
            raise ValueError("p_max must lie in [1, 20]")
        if not self.tau > 0:
            raise ValueError("tau must be positive")
        if self.mode not in ("gauss", "cc"):
            raise ValueError(f"unknown quadrature mode {self.mode!r}")
        if not 0 < self.eps < 1:
            raise ValueError("eps must lie in (0, 1)")
        if self.c2 is not None and not 0 < self.c2 <= 1:
            raise ValueError("c2 must lie in (0, 1]")
