import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from phiquad.quadrature import RuleKind, clenshaw_curtis, gauss_legendre, rule


def test_gauss_small_rules():
    g = gauss_legendre(2)
    np.testing.assert_allclose(g.nodes, [(1 - 1 / math.sqrt(3)) / 2, (1 + 1 / math.sqrt(3)) / 2],
                               rtol=1e-15)
    np.testing.assert_allclose(g.weights, [0.5, 0.5], rtol=1e-15)
    g = gauss_legendre(3)
    np.testing.assert_allclose(g.nodes, [(1 - math.sqrt(0.6)) / 2, 0.5, (1 + math.sqrt(0.6)) / 2],
                               rtol=1e-15)
    np.testing.assert_allclose(g.weights, [5 / 18, 8 / 18, 5 / 18], rtol=1e-15)


def test_gauss_37_high_moment():
    assert gauss_legendre(37).integrate(lambda x: x**73) == pytest.approx(1 / 74, abs=1e-14)


@pytest.mark.parametrize("m", [1, 5, 20, 64, 150])
def test_gauss_matches_numpy(m):
    x, w = np.polynomial.legendre.leggauss(m)
    g = gauss_legendre(m)
    np.testing.assert_allclose(g.nodes, (x + 1) / 2, atol=1e-14)
    np.testing.assert_allclose(g.weights, w / 2, atol=1e-14)


def test_cc_small_rules():
    c = clenshaw_curtis(2)
    np.testing.assert_allclose(c.nodes, [0.0, 1.0])
    np.testing.assert_allclose(c.weights, [0.5, 0.5], rtol=1e-15)
    c = clenshaw_curtis(5)
    np.testing.assert_allclose(c.weights, np.array([1, 8, 12, 8, 1]) / 30, rtol=1e-14)
    assert c.nodes[0] == 0.0 and c.nodes[-1] == 1.0


def test_cc_nesting():
    coarse, fine = clenshaw_curtis(5), clenshaw_curtis(9)
    np.testing.assert_array_equal(fine.nodes[::2], coarse.nodes)
    for n in (3, 6, 12, 24, 48, 96, 512):
        np.testing.assert_allclose(clenshaw_curtis(2 * n + 1).nodes[::2],
                                   clenshaw_curtis(n + 1).nodes, atol=1e-15, rtol=0)


def _check_invariants(r):
    m = len(r)
    assert math.fsum(r.weights) == pytest.approx(1.0, abs=1e-14)
    assert np.all(np.diff(r.nodes) > 0)
    assert np.all(r.weights >= 0)
    np.testing.assert_allclose(r.nodes + r.nodes[::-1], np.ones(m), atol=1e-14)
    np.testing.assert_allclose(r.weights, r.weights[::-1], atol=1e-14)
    if r.kind is RuleKind.GAUSS:
        assert 0 < r.nodes[0] and r.nodes[-1] < 1
    else:
        assert r.nodes[0] == 0 and r.nodes[-1] == 1


@given(st.integers(2, 1025), st.sampled_from(list(RuleKind)))
def test_rule_invariants(m, kind):
    _check_invariants(rule(kind, m))


@pytest.mark.parametrize("m", [2, 3, 8, 17, 33, 40])
def test_exactness(m):
    g, c = gauss_legendre(m), clenshaw_curtis(m)
    for k in range(2 * m):
        assert g.integrate(lambda x: x**k) == pytest.approx(1 / (k + 1), rel=1e-13)
    for k in range(m):
        assert c.integrate(lambda x: x**k) == pytest.approx(1 / (k + 1), rel=1e-13)


def test_rules_are_cached_and_readonly():
    assert gauss_legendre(11) is gauss_legendre(11)
    with pytest.raises(ValueError):
        clenshaw_curtis(7).nodes[0] = 0.5


def test_bad_sizes():
    with pytest.raises(ValueError):
        gauss_legendre(0)
    with pytest.raises(ValueError):
        clenshaw_curtis(1)
    assert RuleKind.GAUSS.min_n == 2 and RuleKind.CC.min_n == 4
