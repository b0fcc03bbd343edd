"""Dense matrix primitives: norms, the matrix exponential, quartic roots,
bracketed scalar root finding and the plain-text matrix format."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.optimize import brentq

# Higham (2005) coefficients of the [13/13] Pade approximant to exp.
_PADE13 = (
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
)
THETA13 = 5.371920351148152


def as_matrix(M, *, square: bool = False, name: str = "matrix") -> np.ndarray:
    """Validate and return ``M`` as a finite 2-D float64 array."""
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] < 1 or M.shape[1] < 1:
        raise ValueError(f"{name} must be a non-empty 2-D array, got shape {M.shape}")
    if square and M.shape[0] != M.shape[1]:
        raise ValueError(f"{name} must be square, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError(f"{name} has non-finite entries")
    return M


def inf_norm(M) -> float:
    """Maximum absolute row sum."""
    M = as_matrix(M)
    return float(np.abs(M).sum(axis=1).max())


def expm(M) -> np.ndarray:
    """Matrix exponential by scaling and squaring with the degree-13 Pade
    approximant.

    The matrix is scaled by ``2**-s`` so that its 1-norm is at most
    ``THETA13``, the approximant is evaluated, and the result is squared
    ``s`` times.
    """
    A = as_matrix(M, square=True)
    n = A.shape[0]
    norm1 = float(np.abs(A).sum(axis=0).max())
    if norm1 == 0.0:
        return np.eye(n)
    s = 0
    if norm1 > THETA13:
        s = max(0, int(math.ceil(math.log2(norm1 / THETA13))))
        A = A / 2.0**s

    b = _PADE13
    ident = np.eye(n)
    A2 = A @ A
    A4 = A2 @ A2
    A6 = A4 @ A2
    U = A @ (A6 @ (b[13] * A6 + b[11] * A4 + b[9] * A2)
             + b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * ident)
    V = (A6 @ (b[12] * A6 + b[10] * A4 + b[8] * A2)
         + b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * ident)
    R = np.linalg.solve(V - U, V + U)
    for _ in range(s):
        R = R @ R
    return R


@dataclass(frozen=True)
class Quartic:
    """Monic quartic ``x**4 + a3 x**3 + a2 x**2 + a1 x + 1``."""

    a3: float
    a2: float
    a1: float

    @property
    def coefficients(self) -> tuple[float, float, float, float, float]:
        return (1.0, self.a3, self.a2, self.a1, 1.0)

    def __call__(self, x):
        return (((x + self.a3) * x + self.a2) * x + self.a1) * x + 1.0

    def derivative(self, x):
        return ((4.0 * x + 3.0 * self.a3) * x + 2.0 * self.a2) * x + self.a1


def durand_kerner(coeffs, *, maxiter: int = 200, tol: float = 1e-15) -> np.ndarray:
    """All complex roots of monic polynomials by Durand-Kerner iteration.

    ``coeffs`` has shape ``(..., deg + 1)`` with leading coefficient 1, so a
    batch of polynomials is solved at once.
    """
    c = np.atleast_2d(np.asarray(coeffs, dtype=np.complex128))
    deg = c.shape[-1] - 1
    # Fujiwara bound on root modulus fixes the radius of the starting circle.
    k = np.arange(1, deg + 1)
    radius = 2.0 * np.max(np.abs(c[:, 1:]) ** (1.0 / k), axis=1)
    angles = 2.0 * np.pi * np.arange(deg) / deg + 0.4
    z = radius[:, None] * np.exp(1j * angles)[None, :]

    idx = np.arange(deg)
    for _ in range(maxiter):
        pz = np.ones_like(z)
        for j in range(1, deg + 1):
            pz = pz * z + c[:, j : j + 1]
        diff = z[:, :, None] - z[:, None, :]
        diff[:, idx, idx] = 1.0
        step = pz / np.prod(diff, axis=2)
        z = z - step
        if np.all(np.abs(step) <= tol * np.maximum(np.abs(z), 1.0)):
            break
    return z


def real_roots_gt_one(P: Quartic) -> list[float]:
    """Real roots of ``P`` strictly greater than 1, ascending."""
    return real_roots_gt_one_batch([P])[0]


def real_roots_gt_one_batch(polys) -> list[list[float]]:
    coeffs = np.array([P.coefficients for P in polys], dtype=np.float64)
    roots = durand_kerner(coeffs)
    out = []
    for P, z in zip(polys, roots):
        found = []
        for r in z:
            if abs(r.imag) > 1e-8 * (1.0 + abs(r.real)) or r.real <= 1.0:
                continue
            x = float(r.real)
            # two Newton corrections in real arithmetic
            for _ in range(2):
                d = P.derivative(x)
                if d == 0.0:
                    break
                x_new = x - P(x) / d
                if not math.isfinite(x_new):
                    break
                x = x_new
            if x > 1.0:
                found.append(x)
        out.append(sorted(found))
    return out


def find_root_monotone(f, lo: float, hi: float, tol: float = 1e-12) -> float:
    """Root of a monotone function bracketed by ``[lo, hi]``.

    Raises ``ValueError`` when ``f(lo)`` and ``f(hi)`` have the same sign.
    """
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        raise ValueError(f"no sign change on [{lo}, {hi}]: f(lo)={flo}, f(hi)={fhi}")
    return brentq(f, lo, hi, xtol=tol, rtol=4 * np.finfo(float).eps)


def vec(T) -> np.ndarray:
    """Flatten a tensor with the first index varying slowest."""
    return np.ascontiguousarray(T).reshape(-1)


def devec(v, shape) -> np.ndarray:
    v = np.asarray(v)
    if v.size != math.prod(shape):
        raise ValueError(f"cannot reshape vector of length {v.size} to {tuple(shape)}")
    return v.reshape(tuple(shape))


def format_value(x: float) -> str:
    return format(float(x), ".17g")


def write_matrix(path, M) -> None:
    """Write ``M`` as ``rows cols`` followed by the row-major entries."""
    M = as_matrix(M)
    lines = [f"{M.shape[0]} {M.shape[1]}"]
    lines.extend(" ".join(format_value(x) for x in row) for row in M)
    Path(path).write_text("\n".join(lines) + "\n")


def read_matrix(path) -> np.ndarray:
    tokens = Path(path).read_text().split()
    if len(tokens) < 2:
        raise ValueError(f"{path}: missing 'rows cols' header")
    rows, cols = int(tokens[0]), int(tokens[1])
    values = tokens[2:]
    if len(values) != rows * cols:
        raise ValueError(f"{path}: expected {rows * cols} values, found {len(values)}")
    return as_matrix(np.array([float(x) for x in values]).reshape(rows, cols))
