"""Gauss-Legendre and Clenshaw-Curtis rules on [0, 1]."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np


class RuleKind(str, enum.Enum):
    GAUSS = "gauss"
    CC = "cc"

    @property
    def min_n(self) -> int:
        """Smallest node parameter ``n`` (rule of ``n + 1`` points) the
        error bounds accept."""
        return 2 if self is RuleKind.GAUSS else 4


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    kind: RuleKind
    nodes: np.ndarray
    weights: np.ndarray

    def __len__(self) -> int:
        return len(self.nodes)

    def integrate(self, f) -> float:
        return float(np.dot(self.weights, f(self.nodes)))


def _freeze(kind, nodes, weights) -> QuadratureRule:
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(kind, nodes, weights)


def _symmetrize(nodes: np.ndarray, weights: np.ndarray) -> None:
    m = len(nodes)
    for i in range(m // 2):
        j = m - 1 - i
        nodes[j] = 1.0 - nodes[i]
        w = 0.5 * (weights[i] + weights[j])
        weights[i] = weights[j] = w
    if m % 2:
        nodes[m // 2] = 0.5


@lru_cache(maxsize=None)
def gauss_legendre(points: int) -> QuadratureRule:
    """``points``-node Gauss-Legendre rule mapped to [0, 1].

    Nodes come from Newton's method on the Legendre polynomial, evaluated by
    its three-term recurrence, started from Chebyshev-like angles.
    """
    m = int(points)
    if m < 1:
        raise ValueError("points must be >= 1")
    k = np.arange(1, m + 1)
    x = np.cos(np.pi * (k - 0.25) / (m + 0.5))
    for _ in range(100):
        p0, p1 = np.ones_like(x), x.copy()
        for j in range(2, m + 1):
            p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
        dp = m * (x * p1 - p0) / (x * x - 1.0)
        dx = p1 / dp
        x = x - dx
        if np.max(np.abs(dx)) <= 1e-15:
            break
    p0, p1 = np.ones_like(x), x.copy()
    for j in range(2, m + 1):
        p0, p1 = p1, ((2 * j - 1) * x * p1 - (j - 1) * p0) / j
    dp = m * (x * p1 - p0) / (x * x - 1.0)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    # x is descending on [-1, 1]; map to ascending nodes on [0, 1]
    nodes = (1.0 - x) / 2.0
    weights = w / 2.0
    _symmetrize(nodes, weights)
    return _freeze(RuleKind.GAUSS, nodes, weights)


@lru_cache(maxsize=None)
def clenshaw_curtis(points: int) -> QuadratureRule:
    """``points``-node Clenshaw-Curtis rule on [0, 1], endpoints included.

    Node ``k`` is ``sin(k pi / (2 N))**2`` with ``N = points - 1``, so the
    nodes of the ``N + 1`` rule are the even-indexed nodes of the ``2N + 1``
    rule.
    """
    N = int(points) - 1
    if N < 1:
        raise ValueError("points must be >= 2")
    theta = np.pi * np.arange(N + 1) / N
    nodes = np.sin(theta / 2.0) ** 2
    w = np.zeros(N + 1)
    v = np.ones(N - 1)
    inner = theta[1:N]
    if N % 2 == 0:
        w[0] = w[N] = 1.0 / (N * N - 1.0)
        for j in range(1, N // 2):
            v -= 2.0 * np.cos(2 * j * inner) / (4.0 * j * j - 1.0)
        v -= np.cos(N * inner) / (N * N - 1.0)
    else:
        w[0] = w[N] = 1.0 / (N * N)
        for j in range(1, (N - 1) // 2 + 1):
            v -= 2.0 * np.cos(2 * j * inner) / (4.0 * j * j - 1.0)
    w[1:N] = 2.0 * v / N
    weights = w / 2.0
    _symmetrize(nodes, weights)
    return _freeze(RuleKind.CC, nodes, weights)


def rule(kind, points: int) -> QuadratureRule:
    kind = RuleKind(kind)
    return gauss_legendre(points) if kind is RuleKind.GAUSS else clenshaw_curtis(points)
