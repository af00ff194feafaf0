"""Tests for the complex log-gamma kernel."""

import mpmath
import numpy as np
import pytest

from secrecy_lab.specfun import GammaPoleError, log_gamma_complex


def _reference(points):
    mpmath.mp.dps = 50
    return np.array([complex(mpmath.loggamma(complex(p))) for p in points])


def test_matches_high_precision_reference():
    re = np.array([-6.3, -2.5, -0.75, 0.1, 0.5, 1.0, 3.7, 8.0, 41.25])
    im = np.array([-40.0, -3.2, -0.5, 0.0, 1e-3, 0.5, 7.0, 120.0])
    pts = (re[:, None] + 1j * im[None, :]).ravel()
    # drop combinations landing exactly on a non-positive integer pole
    pts = pts[~((pts.imag == 0.0) & (pts.real <= 0.0)
                & (pts.real == np.floor(pts.real)))]
    ref = _reference(pts)
    got = log_gamma_complex(pts)
    err = np.abs(got - ref) / np.maximum(1.0, np.abs(ref))
    assert err.max() < 1e-13


def test_large_modulus_accuracy():
    pts = np.array([1000.0 + 0j, 2.0 + 950j, -800.5 + 0.25j, 0.5 - 990j])
    ref = _reference(pts)
    got = log_gamma_complex(pts)
    err = np.abs(got - ref) / np.maximum(1.0, np.abs(ref))
    assert err.max() < 1e-13


def test_scalar_input_returns_scalar():
    out = log_gamma_complex(2.5 + 1j)
    assert isinstance(out, complex)
    grid = log_gamma_complex(np.full((2, 3), 2.5 + 1j))
    assert grid.shape == (2, 3)
    assert np.allclose(grid, out)


def test_real_positive_matches_lgamma():
    import math

    for x in (0.1, 0.5, 1.0, 4.25, 30.0, 171.0):
        got = log_gamma_complex(x)
        assert got.imag == 0.0
        assert abs(got.real - math.lgamma(x)) <= 1e-13 * max(
            1.0, abs(math.lgamma(x)))


def test_poles_raise():
    for bad in (0.0, -1.0, -7.0):
        with pytest.raises(GammaPoleError):
            log_gamma_complex(bad)
    with pytest.raises(GammaPoleError):
        log_gamma_complex(np.array([1.0, 2.0, -3.0 + 0j]))


def test_conjugate_symmetry():
    rng = np.random.default_rng(7)
    pts = rng.uniform(-5, 5, 64) + 1j * rng.uniform(0.01, 30, 64)
    up = log_gamma_complex(pts)
    down = log_gamma_complex(pts.conj())
    assert np.max(np.abs(down - up.conj())) == 0.0


def test_recurrence_through_exponential():
    # exp(logGamma(s+1) - logGamma(s)) = s even when the two principal
    # branches differ by a 2 pi i winding, so compare after exponentiation.
    rng = np.random.default_rng(11)
    pts = rng.uniform(-6, 6, 128) + 1j * rng.uniform(-25, 25, 128)
    pts = pts[np.abs(pts.imag) > 1e-6]
    ratio = np.exp(log_gamma_complex(pts + 1.0) - log_gamma_complex(pts))
    assert np.max(np.abs(ratio - pts) / np.abs(pts)) < 1e-12
