import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from phiquad.kron import assemble_dense, infnorm_bound, matvec
from phiquad.oracle import phi_dense_oracle
from phiquad.phiaction import phiquadmv
from phiquad.problems import (DIRICHLET, NEUMANN, EJ_SIGMA, ExperimentSpec, Mesh1D, advdiff2d,
                              fe_advdiff_1d, fe_laplacian_1d, grid, heat3d, ho_exact,
                              ho_linear_source, hochbruck_ostermann, problem3_manufactured,
                              relative_error, shishkin_mesh, shishkin_transition)


def test_mesh_validation():
    with pytest.raises(ValueError):
        Mesh1D([0.0])
    with pytest.raises(ValueError):
        Mesh1D([0.0, 0.5, 0.5, 1.0])
    with pytest.raises(ValueError):
        Mesh1D([0.0, 1.0], ("dirichlet", "robin"))
    m = Mesh1D.uniform(4, bc=(NEUMANN, DIRICHLET))
    np.testing.assert_array_equal(m.free, [0, 1, 2, 3])
    assert m.n_elem == 4


def test_laplacian_examples():
    np.testing.assert_allclose(fe_laplacian_1d(2), [[8.0]])
    F = fe_laplacian_1d(16)
    h = 1 / 16
    np.testing.assert_allclose(F[5, 4:7], np.array([-1, 2, -1]) / h**2, rtol=1e-14)
    np.testing.assert_allclose(F, F.T, atol=0)
    A, _ = heat3d(4)
    assert A.dim == 3375
    assert 0.125 * infnorm_bound(A) == pytest.approx(384.0, rel=1e-14)
    with pytest.raises(ValueError):
        fe_laplacian_1d(1)


@pytest.mark.parametrize("r", [2, 3, 4, 5])
def test_heat3d_dimensions(r):
    A, b = heat3d(r)
    assert A.dim == (2**r - 1) ** 3 == len(b)


def test_advdiff_pure_diffusion_matches_laplacian():
    m = Mesh1D.uniform(10)
    np.testing.assert_allclose(fe_advdiff_1d(m, 0.3), 0.3 * fe_laplacian_1d(10), rtol=1e-14)


def test_advdiff_nonuniform_lumping():
    m = Mesh1D([0.0, 0.1, 0.4, 1.0])
    A = fe_advdiff_1d(m, 1.0)
    # node 1: lumped mass (0.1 + 0.3) / 2, stiffness row (-10, 10 + 10/3, -10/3)
    np.testing.assert_allclose(A[0], np.array([10 + 10 / 3, -10 / 3]) / 0.2, rtol=1e-14)


def test_shishkin_mesh():
    assert shishkin_transition(32, 1e-2) == pytest.approx(0.02 * math.log(32))
    assert shishkin_transition(32, 1e-2) == pytest.approx(0.06931, abs=1e-5)
    m = shishkin_mesh(8, 1.0)
    np.testing.assert_allclose(m.nodes, np.linspace(-1, 0, 9), atol=1e-15)
    m = shishkin_mesh(32, 1e-2)
    assert len(m.nodes) == 33 and np.all(np.diff(m.nodes) > 0)
    assert m.nodes[16] == pytest.approx(-0.02 * math.log(32))
    with pytest.raises(ValueError):
        shishkin_mesh(7, 1e-2)


def test_advdiff2d_benchmark_numbers():
    A, b = advdiff2d(5)
    assert A.shape == (32, 31) and A.dim == 992 == len(b)
    assert 0.125 * infnorm_bound(A) == pytest.approx(332.8, rel=1e-12)
    Ax, Ay = A.factors
    assert np.max(np.abs(Ax - Ax.T)) > 0
    np.testing.assert_allclose(Ay, Ay.T, rtol=1e-14)
    for r in (4, 6):
        A, _ = advdiff2d(r)
        assert 0.125 * infnorm_bound(A) == pytest.approx(332.8 * 4.0 ** (r - 5), rel=1e-12)
    # the default layer width differs from the 2 eps ln N transition
    A2, _ = advdiff2d(5, sigma=None)
    assert infnorm_bound(A2) != infnorm_bound(advdiff2d(5, sigma=EJ_SIGMA)[0])


def test_relative_error():
    assert relative_error([1.0, 2.0], [1.0, 2.0]) == 0.0
    assert relative_error([1.0], [2.0]) == 0.5
    with pytest.raises(ValueError):
        relative_error([1.0], [0.0])
    with pytest.raises(ValueError):
        relative_error([1.0], [1.0, 2.0])


def test_problem1_small_accuracy():
    A, b = heat3d(3)
    M = A.scaled(-0.125)
    ref = phi_dense_oracle(5, assemble_dense(M), b)
    Y = phiquadmv(5, M, b)
    assert relative_error(Y[:, 4], ref[:, 4]) <= 1e-12


def test_manufactured_values():
    half = np.array([0.5])
    u, f = problem3_manufactured(0.0, (half, half))
    assert u[0] == pytest.approx(1 / 16, rel=1e-15)
    assert ho_linear_source((half, half))(0.0)[0] == pytest.approx(1 / 16 + 1 - 256 / 257,
                                                                   rel=1e-14)
    assert f(0.0, u)[0] == pytest.approx(1 / 16 + 1, rel=1e-14)


@given(st.floats(0.0, 2.0), st.floats(0.01, 0.99), st.floats(0.01, 0.99))
def test_manufactured_pde_residual(t, x, y):
    # u_t - Lap u - f(t, u) with the closed-form derivatives of the exact solution
    nodes = (np.array([x]), np.array([y]))
    u, f = problem3_manufactured(t, nodes)
    ut = u
    lap = -math.exp(t) * (2 * y * (1 - y) + 2 * x * (1 - x))
    assert abs(ut[0] - lap - f(t, u)[0]) <= 1e-13


@pytest.mark.parametrize("r", [3, 5])
def test_semidiscrete_residual_vanishes(r):
    # the exact solution is quadratic in each direction, so the lumped P1
    # Laplacian reproduces -Lap u at the nodes and there is no spatial error
    A, nodes, u0, f = hochbruck_ostermann(r)
    exact = ho_exact(nodes)
    for t in (0.0, 0.7):
        u = exact(t)
        res = u + matvec(A, u) - f(t, u)
        assert np.max(np.abs(res)) <= 1e-12


def test_grid_order():
    X, Y = grid(np.array([1.0, 2.0]), np.array([10.0, 20.0, 30.0]))
    np.testing.assert_array_equal(X, [1, 1, 1, 2, 2, 2])
    np.testing.assert_array_equal(Y, [10, 20, 30, 10, 20, 30])


def test_experiment_spec_caps():
    ExperimentSpec(1, 7)
    ExperimentSpec(1, 5, verify=True)
    for bad in (dict(problem=1, r=6, verify=True), dict(problem=1, r=8), dict(problem=4, r=3),
                dict(problem=2, r=9), dict(problem=3, r=3, p_max=21),
                dict(problem=3, r=3, tau=0.0), dict(problem=1, r=3, mode="simpson"),
                dict(problem=3, r=3, c2=0.0), dict(problem=1, r=3, eps=1.0)):
        with pytest.raises(ValueError):
            ExperimentSpec(**bad)


def test_problem1_eigenvector_closed_form():
    # the sine product is an eigenvector of the discrete Laplacian, so
    # phi_j(-tau A) b = phi_j(lambda) b with a scalar lambda, even at dim 29791
    r, tau = 5, 0.125
    A, b = heat3d(r)
    h = 2.0**-r
    lam = -tau * 3 * 4 / h**2 * math.sin(math.pi * h / 2) ** 2
    # exact rational series; its terms decay monotonically for |lam| < 4
    L = Fraction(lam)
    scalars = [float(sum(L**k / math.factorial(k + j) for k in range(80))) for j in range(1, 21)]
    Y = phiquadmv(20, A.scaled(-tau), b)
    for j in range(20):
        assert relative_error(Y[:, j], scalars[j] * b) <= 1e-12
