import numpy as np
import pytest
from hypothesis import settings, strategies as st

from phiquad.kron import KroneckerSum

settings.register_profile("default", deadline=None, derandomize=True)
settings.load_profile("default")


def random_kron(rng, sizes, norm=None, shift=True):
    """Random Kronecker sum; with ``shift`` each factor is ``R - s I`` so the
    exponentials stay moderate."""
    factors = []
    for m in sizes:
        F = rng.standard_normal((m, m))
        if shift:
            F -= (np.abs(F).sum(axis=1).max() + 0.5) * np.eye(m)
        factors.append(F)
    A = KroneckerSum(tuple(factors))
    if norm is not None:
        total = sum(np.abs(F).sum(axis=1).max() for F in A.factors)
        A = A.scaled(norm / total)
    return A


@st.composite
def kron_systems(draw, max_size=5, min_norm=0.1, max_norm=100.0, ndims=(1, 2, 3)):
    d = draw(st.sampled_from(ndims))
    sizes = [draw(st.integers(1, max_size)) for _ in range(d)]
    seed = draw(st.integers(0, 2**32 - 1))
    norm = draw(st.floats(min_norm, max_norm))
    rng = np.random.default_rng(seed)
    A = random_kron(rng, sizes, norm)
    b = rng.standard_normal(A.dim)
    return A, b


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
