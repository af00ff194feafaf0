"""Tests for the composite fading SNR statistics."""

import math

import numpy as np
import pytest

from secrecy_lab.channel import (
    ChannelParams,
    _clamp,
    derive_constants,
    effective_params,
    path_loss,
    reduce_special_case,
    snr_cdf,
    snr_moment,
    snr_pdf,
)

from oracles import (
    PARAM_GRID,
    alpha_mu_pointing_pdf,
    density_mass_defect,
    fisher_f_pointing_pdf,
)

MILD = ChannelParams(2.0, 1.0, 3.0, 1.2, 1.0)


def test_parameter_validation():
    with pytest.raises(ValueError):
        ChannelParams(0.0, 1.0, 3.0, 1.2, 1.0)
    with pytest.raises(ValueError):
        ChannelParams(2.0, -1.0, 3.0, 1.2, 1.0)
    with pytest.raises(ValueError):
        ChannelParams(2.0, 1.0, 1.0, 1.2, 1.0)
    with pytest.raises(ValueError):
        ChannelParams(1.0, 1.0, 1.5, 1.2, 1.0)  # m alpha <= 2
    with pytest.raises(ValueError):
        ChannelParams(2.0, 1.0, 3.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        ChannelParams(2.0, 1.0, 3.0, 1.2, -2.0)
    with pytest.raises(ValueError):
        ChannelParams(math.inf, 1.0, 3.0, 1.2, 1.0)
    # an infinite pointing coefficient is the no-misalignment sentinel
    p = ChannelParams(2.0, 1.0, 3.0, math.inf, 1.0)
    assert math.isinf(p.z)
    assert effective_params(p).z == 50.0


def test_density_mass_with_tail_restoration():
    for p in (MILD, ChannelParams(3.5, 0.8, 3.0, 1.2, 1.0)):
        assert density_mass_defect(p, n=8001) < 2e-5


def test_cdf_matches_density_derivative():
    g = np.geomspace(0.02, 40.0, 400) * MILD.gamma_bar
    cdf = snr_cdf(MILD, g)
    mid = np.sqrt(g[1:] * g[:-1])
    fd = np.diff(cdf) / np.diff(g)
    pdf = snr_pdf(MILD, mid)
    scale = np.maximum(pdf.max(), 1e-12)
    assert np.max(np.abs(fd - pdf)) / scale < 1e-3


def test_cdf_shape():
    g = np.geomspace(1e-6, 1e6, 200)
    cdf = snr_cdf(MILD, g)
    assert np.all(np.diff(cdf) >= -1e-12)
    assert np.all((cdf >= 0.0) & (cdf <= 1.0))
    assert cdf[0] < 1e-3 and cdf[-1] > 1.0 - 1e-6
    assert np.all(snr_pdf(MILD, g) >= 0.0)
    with pytest.raises(ValueError):
        snr_cdf(MILD, np.array([1.0, -2.0]))


def test_small_snr_power_law():
    # F(g) ~ C g^(min(mu, z^2/alpha) alpha/2) as g -> 0
    for p in (ChannelParams(2.0, 0.8, 1.5, 0.7, 1.0), MILD):
        expo = min(p.mu, p.z * p.z / p.alpha) * p.alpha / 2.0
        g = np.geomspace(1e-10, 1e-8, 5) * p.gamma_bar
        cdf = snr_cdf(p, g)
        slope = np.polyfit(np.log(g), np.log(cdf), 1)[0]
        assert abs(slope - expo) / expo < 0.01, f"{p}"


def test_large_snr_power_law():
    # 1 - F(g) ~ C g^(-m alpha/2) as g -> infinity; far enough out for
    # the subleading correction to fade, near enough that the complement
    # is still representable after the subtraction
    p = MILD
    g = np.geomspace(300.0, 3000.0, 5) * p.gamma_bar
    tail = 1.0 - snr_cdf(p, g)
    slope = np.polyfit(np.log(g), np.log(tail), 1)[0]
    assert abs(slope + p.m * p.alpha / 2.0) / (p.m * p.alpha / 2.0) < 0.01


def test_mean_normalization_is_exact():
    for p in PARAM_GRID:
        assert snr_moment(p, 1.0) == pytest.approx(p.gamma_bar, rel=1e-12)


def test_moments_match_quadrature():
    g = np.geomspace(1e-13, 1e13, 20001) * MILD.gamma_bar
    pdf = snr_pdf(MILD, g)
    for order in (0.5, 1.5, -0.2):
        ref = float(np.trapezoid(pdf * g**order, g))
        assert snr_moment(MILD, order) == pytest.approx(ref, rel=1e-4)


def test_nonexistent_moments_raise():
    with pytest.raises(ValueError):
        snr_moment(MILD, 3.0)  # order >= m alpha/2
    with pytest.raises(ValueError):
        snr_moment(MILD, -0.9)  # order <= -min(mu, z^2/alpha) alpha/2
    # heavy pointing tightens only the negative-order bound, to -z^2/2
    with pytest.raises(ValueError):
        snr_moment(ChannelParams(2.0, 0.8, 1.5, 0.7, 1.0), -0.3)


def test_fisher_f_special_case_density():
    p = ChannelParams(2.0, 1.5, 3.0, 1.2, 4.0)
    g = np.geomspace(0.05, 20.0, 25) * p.gamma_bar
    ref = fisher_f_pointing_pdf(p, g)
    got = snr_pdf(p, g)
    assert np.max(np.abs(got - ref) / ref) < 1e-8


def test_alpha_mu_limit_density():
    base = ChannelParams(3.5, 1.0, 3.0, 1.2, 2.0)
    p = reduce_special_case(base, "alpha_mu")
    assert p.m == 200.0
    g = np.geomspace(0.1, 8.0, 20) * p.gamma_bar
    ref = alpha_mu_pointing_pdf(p, g)
    got = snr_pdf(p, g)
    assert np.max(np.abs(got - ref)) < 1e-3 * ref.max()


def test_no_pointing_surrogate_is_converged():
    # the distribution is insensitive to the surrogate magnitude once the
    # pointing spread is negligible
    base = ChannelParams(2.0, 1.5, 3.0, math.inf, 2.0)
    lo = effective_params(base, z_surrogate=50.0)
    hi = effective_params(base, z_surrogate=200.0)
    g = np.geomspace(0.01, 100.0, 60) * base.gamma_bar
    assert np.max(np.abs(snr_cdf(lo, g) - snr_cdf(hi, g))) < 1e-4


def test_special_case_reductions():
    p = ChannelParams(3.5, 1.5, 3.0, 1.2, 2.0)
    assert reduce_special_case(p, "no_pointing").z == 50.0
    assert reduce_special_case(p, "fisher_f").alpha == 2.0
    with pytest.raises(ValueError):
        reduce_special_case(p, "rician")


def test_clamp_behavior():
    vals = np.array([-1e-12, 0.5, 1.0 + 1e-12])
    errs = np.array([1e-10, 1e-10, 1e-10])
    out = _clamp(vals.copy(), errs, 0.0, 1.0, "cdf")
    assert out[0] == 0.0 and out[2] == 1.0 and out[1] == 0.5
    with pytest.raises(RuntimeError):
        _clamp(np.array([1.5]), np.array([1e-10]), 0.0, 1.0, "cdf")


def test_derived_constants_scaling():
    # Theta carries the full mean dependence: doubling gamma_bar halves
    # Theta^(2/alpha); Lambda is scale free
    p1 = ChannelParams(3.5, 1.5, 3.0, 1.2, 2.0)
    p2 = ChannelParams(3.5, 1.5, 3.0, 1.2, 4.0)
    d1, d2 = derive_constants(p1), derive_constants(p2)
    assert d1.Lambda == d2.Lambda
    assert d2.Theta / d1.Theta == pytest.approx(0.5 ** (p1.alpha / 2.0),
                                                rel=1e-12)
    assert d1.log_Lambda == pytest.approx(math.log(d1.Lambda), rel=1e-12)


def test_path_loss():
    pl = path_loss(2.4e9, 100.0, attenuation_np_per_m=1e-4)
    assert 0.0 < pl.free_space < 1.0
    assert pl.atmospheric == pytest.approx(math.exp(-0.005), rel=1e-12)
    assert pl.total == pl.free_space * pl.atmospheric
    far = path_loss(2.4e9, 200.0)
    assert far.free_space == pytest.approx(pl.free_space / 2.0, rel=1e-12)
    with pytest.raises(ValueError):
        path_loss(-1.0, 100.0)
    with pytest.raises(ValueError):
        path_loss(2.4e9, 100.0, gain_tx=0.0)
