"""Kronecker-sum operators and mode-wise products.

A Kronecker sum ``A1 (+) A2 (+) A3`` is kept as its 1-D factors. Vectors are
de-vectorized with the index of the first factor varying slowest, which is
the ordering of ``np.kron(A1, A2)`` acting on a flat vector. Every kernel
here also accepts a block of vectors of shape ``(dim, k)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dense import as_matrix, inf_norm

MAX_ASSEMBLE_DIM = 10_000


@dataclass(frozen=True, eq=False)
class KroneckerSum:
    """``factors[0] (+) factors[1] (+) ...`` with one to three square factors."""

    factors: tuple[np.ndarray, ...]

    def __post_init__(self):
        factors = tuple(as_matrix(F, square=True, name="factor") for F in self.factors)
        if not 1 <= len(factors) <= 3:
            raise ValueError(f"expected 1 to 3 factors, got {len(factors)}")
        for F in factors:
            F.setflags(write=False)
        object.__setattr__(self, "factors", factors)

    @classmethod
    def of(cls, *factors) -> "KroneckerSum":
        return cls(tuple(factors))

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(F.shape[0] for F in self.factors)

    @property
    def dim(self) -> int:
        return math.prod(self.shape)

    @property
    def ndim(self) -> int:
        return len(self.factors)

    def scaled(self, s: float) -> "KroneckerSum":
        """The Kronecker sum of ``s * factor``, i.e. ``s * A``."""
        return KroneckerSum(tuple(s * F for F in self.factors))

    def __matmul__(self, v):
        return matvec(self, v)


def _as_block(v, dim: int) -> np.ndarray:
    v = np.asarray(v, dtype=np.float64)
    if v.ndim not in (1, 2) or v.shape[0] != dim:
        raise ValueError(f"expected a vector of length {dim}, got shape {v.shape}")
    return v


def mode_products(mats, v) -> np.ndarray:
    """Apply ``mats[d]`` along mode ``d`` of the de-vectorized ``v``.

    Equivalent to ``(mats[0] kron mats[1] kron ...) @ v``.
    """
    shape = tuple(M.shape[1] for M in mats)
    dim = math.prod(shape)
    v = _as_block(v, dim)
    X = v.reshape(shape + v.shape[1:])
    for axis, M in enumerate(mats):
        X = np.moveaxis(np.tensordot(M, X, axes=(1, axis)), 0, axis)
    out_shape = (math.prod(M.shape[0] for M in mats),) + v.shape[1:]
    return np.ascontiguousarray(X).reshape(out_shape)


def assemble_dense(A: KroneckerSum) -> np.ndarray:
    """Explicit matrix of the Kronecker sum (small problems only)."""
    if A.dim > MAX_ASSEMBLE_DIM:
        raise ValueError(f"refusing to assemble a {A.dim}x{A.dim} matrix (limit {MAX_ASSEMBLE_DIM})")
    out = np.zeros((A.dim, A.dim))
    sizes = A.shape
    for d, F in enumerate(A.factors):
        left = math.prod(sizes[:d])
        right = math.prod(sizes[d + 1:])
        out += np.kron(np.kron(np.eye(left), F), np.eye(right))
    return out


def matvec(A: KroneckerSum, v) -> np.ndarray:
    """``A @ v`` through per-mode products, without assembling ``A``."""
    v = _as_block(v, A.dim)
    X = v.reshape(A.shape + v.shape[1:])
    out = np.zeros_like(X)
    for axis, F in enumerate(A.factors):
        out += np.moveaxis(np.tensordot(F, X, axes=(1, axis)), 0, axis)
    return out.reshape(v.shape)


def exp_action(exp_factors, b) -> np.ndarray:
    """``(E1 kron E2 kron ...) @ b`` for already exponentiated factors."""
    mats = [as_matrix(E, square=True, name="exponential factor") for E in exp_factors]
    if not 1 <= len(mats) <= 3:
        raise ValueError(f"expected 1 to 3 factors, got {len(mats)}")
    return mode_products(mats, b)


def infnorm_bound(A: KroneckerSum) -> float:
    """Sum of the factor infinity norms, an upper bound on ``||A||_inf``."""
    return math.fsum(inf_norm(F) for F in A.factors)
