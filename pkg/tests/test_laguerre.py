"""Tests for the Gauss-Laguerre rule generator."""

import math

import numpy as np
import pytest

from secrecy_lab.specfun import gauss_laguerre


def test_weights_sum_to_one():
    # the eigenvalue route carries a mild noise floor at high order
    for n in (1, 2, 8, 32, 64, 256):
        x, w = gauss_laguerre(n)
        assert len(x) == len(w) == n
        assert np.all(np.diff(x) > 0)
        assert np.all(w > 0)
        assert abs(w.sum() - 1.0) < 5e-12


def test_low_order_nodes_are_analytic():
    x1, w1 = gauss_laguerre(1)
    assert x1[0] == pytest.approx(1.0, abs=1e-15)
    assert w1[0] == pytest.approx(1.0, abs=1e-15)
    # order two: roots of x^2 - 4x + 2
    x2, w2 = gauss_laguerre(2)
    r = math.sqrt(2.0)
    assert x2 == pytest.approx([2.0 - r, 2.0 + r], abs=1e-14)
    assert w2 == pytest.approx([(2.0 + r) / 4.0, (2.0 - r) / 4.0], abs=1e-14)


def test_polynomial_moments():
    # an n-point rule integrates x^r exp(-x) exactly for r <= 2n - 1
    for n in (4, 16, 64):
        x, w = gauss_laguerre(n)
        for r in range(0, min(2 * n, 24)):
            exact = math.factorial(r)
            got = float(w @ x**r)
            assert abs(got - exact) <= 1e-8 * exact


def test_transcendental_integral():
    # integral exp(-x) sin(x) dx = 1/2 once the rule resolves oscillation
    x, w = gauss_laguerre(64)
    assert float(w @ np.sin(x)) == pytest.approx(0.5, abs=1e-10)


def test_order_validation():
    for bad in (0, -1, 257):
        with pytest.raises(ValueError):
            gauss_laguerre(bad)
    for bad in (2.0, True, "8"):
        with pytest.raises(TypeError):
            gauss_laguerre(bad)
