"""Dense reference values of phi-function actions.

Uses the augmented-matrix identity: the exponential of
``[[A, b e1^T], [0, J]]`` (``J`` the p x p upper shift) carries
``phi_1(A) b, ..., phi_p(A) b`` in its top-right block.
"""

from __future__ import annotations

import numpy as np

from .dense import as_matrix, expm

MAX_ORACLE_DIM = 1000


def phi_dense_oracle(p: int, A, b) -> np.ndarray:
    """Columns ``phi_j(A) b`` for ``j = 1..p`` as an array of shape ``(dim, p)``."""
    A = as_matrix(A, square=True)
    N = A.shape[0]
    if N > MAX_ORACLE_DIM:
        raise ValueError(f"oracle limited to dim <= {MAX_ORACLE_DIM}, got {N}")
    if p < 1:
        raise ValueError("p must be >= 1")
    b = np.asarray(b, dtype=np.float64)
    if b.shape != (N,):
        raise ValueError(f"b must have shape ({N},), got {b.shape}")
    # the result is linear in b; normalising keeps a large ||b|| from
    # inflating the scaling of the augmented exponential
    beta = float(np.max(np.abs(b)))
    if beta == 0.0:
        return np.zeros((N, p))
    W = np.zeros((N + p, N + p))
    W[:N, :N] = A
    W[:N, N] = b / beta
    W[N:, N:] = np.eye(p, k=1)
    return beta * expm(W)[:N, N:]
