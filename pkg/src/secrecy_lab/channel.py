"""Instantaneous-SNR statistics of alpha-F fading with pointing errors.

The received SNR gamma of a link whose envelope follows the alpha-F
distribution with a misalignment (pointing-error) component has density and
distribution expressible through single Fox H-functions.  This module owns
the parameter bookkeeping (including the normalization that fixes
E[gamma] = gamma_bar exactly), builds the corresponding H-function kernels,
and provides deterministic SNR statistics on top of the contour engine.

Parameter meanings: ``alpha`` is the power-envelope nonlinearity, ``mu``
the number of multipath clusters, ``m`` the shadowing severity, ``z`` the
ratio of equivalent beam radius to pointing-error displacement at the
receiver (larger z = milder misalignment; +inf disables pointing error and
is handled through a large surrogate value), and ``gamma_bar`` the mean SNR.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .specfun import ContourConfig, FoxHSpec, fox_h_batch

__all__ = [
    "DEFAULT_Z_SURROGATE", "DEFAULT_M_SURROGATE",
    "ChannelParams", "DerivedConstants", "PathLoss",
    "derive_constants", "effective_params", "path_loss",
    "pdf_hspec", "cdf_hspec", "ccdf_hspec",
    "snr_pdf", "snr_cdf", "snr_moment", "reduce_special_case",
]

# Surrogate used wherever z = +inf (no pointing error) appears in numerics;
# at z = 50 the pointing-error factor is indistinguishable from 1 at the
# package's tolerances (checked by the z-surrogate stability test).
DEFAULT_Z_SURROGATE = 50.0
# Surrogate shadowing severity for the alpha-mu (no shadowing) reduction.
DEFAULT_M_SURROGATE = 200.0

_SPECIAL_CASES = ("no_pointing", "alpha_mu", "fisher_f")


@dataclass(frozen=True)
class ChannelParams:
    """One link's fading parameters.

    Constraints: alpha > 0, mu > 0, m > max(1, 2/alpha) (the mean-SNR
    normalization needs the 2/alpha moment of the shadowing term), z > 0
    (math.inf allowed as the no-pointing-error sentinel), gamma_bar > 0.
    """

    alpha: float
    mu: float
    m: float
    z: float
    gamma_bar: float

    def __post_init__(self):
        for name in ("alpha", "mu", "m", "z", "gamma_bar"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not (np.isfinite(self.alpha) and self.alpha > 0.0):
            raise ValueError("alpha must be positive and finite")
        if not (np.isfinite(self.mu) and self.mu > 0.0):
            raise ValueError("mu must be positive and finite")
        if not (np.isfinite(self.m) and self.m > 1.0):
            raise ValueError("m must be finite and exceed 1")
        if self.m * self.alpha <= 2.0:
            raise ValueError(
                "need m > 2/alpha for the mean SNR to exist "
                f"(got m={self.m:g}, alpha={self.alpha:g})")
        if not (self.z > 0.0):
            raise ValueError("z must be positive (math.inf allowed)")
        if not (np.isfinite(self.gamma_bar) and self.gamma_bar > 0.0):
            raise ValueError("gamma_bar must be positive and finite")


@dataclass(frozen=True)
class DerivedConstants:
    """Normalization constants of one link's SNR law.

    Lambda : overall H-function prefactor z^2 / (Gamma(mu) Gamma(m))
    log_Lambda : its logarithm; the numerically safe form (Lambda itself
        underflows for large shadowing orders while the H value overflows
        in compensation, so prefactors are folded into the contour in
        log space)
    Theta : scale inside the H argument, Theta * gamma^(alpha/2)
    lambda_norm : power normalization of the underlying alpha-F envelope
        implied by E[gamma] = gamma_bar; equals 1 at alpha = 2.
    """

    Lambda: float
    Theta: float
    lambda_norm: float
    log_Lambda: float


def effective_params(params: ChannelParams,
                     z_surrogate: float = DEFAULT_Z_SURROGATE
                     ) -> ChannelParams:
    """Replace a z = +inf sentinel by the finite numeric surrogate."""
    if math.isinf(params.z):
        return replace(params, z=float(z_surrogate))
    return params


@lru_cache(maxsize=512)
def derive_constants(params: ChannelParams) -> DerivedConstants:
    """Normalization constants fixing the mean: E[gamma] = gamma_bar."""
    p = effective_params(params)
    two_over_alpha = 2.0 / p.alpha
    z2 = p.z * p.z
    log_moment_ratio = (math.lgamma(p.mu + two_over_alpha)
                        + math.lgamma(p.m - two_over_alpha)
                        - math.lgamma(p.mu) - math.lgamma(p.m))
    lam = ((p.m - 1.0) / p.mu) ** two_over_alpha * math.exp(log_moment_ratio)
    theta = math.exp((p.alpha / 2.0)
                     * (math.log(z2 / (z2 + 2.0) / p.gamma_bar)
                        + log_moment_ratio))
    log_lambda = math.log(z2) - math.lgamma(p.mu) - math.lgamma(p.m)
    return DerivedConstants(Lambda=math.exp(log_lambda) if log_lambda < 700.0
                            else math.inf,
                            Theta=theta, lambda_norm=lam,
                            log_Lambda=log_lambda)


def pdf_hspec(params: ChannelParams) -> FoxHSpec:
    """Kernel of the SNR density: pdf = Lambda/(2 gamma) * H[Theta gamma^(alpha/2)]."""
    p = effective_params(params)
    zr = p.z * p.z / p.alpha
    return FoxHSpec(m=2, n=1,
                    upper=((1.0 - p.m, 1.0), (zr + 1.0, 1.0)),
                    lower=((p.mu, 1.0), (zr, 1.0)))


def cdf_hspec(params: ChannelParams) -> FoxHSpec:
    """Kernel of the SNR distribution: cdf = Lambda/alpha * H[Theta gamma^(alpha/2)]."""
    p = effective_params(params)
    zr = p.z * p.z / p.alpha
    return FoxHSpec(m=2, n=2,
                    upper=((1.0 - p.m, 1.0), (1.0, 1.0), (zr + 1.0, 1.0)),
                    lower=((p.mu, 1.0), (zr, 1.0), (0.0, 1.0)))


def ccdf_hspec(params: ChannelParams) -> FoxHSpec:
    """Kernel of the SNR survival function: 1 - cdf = Lambda/alpha * H[...].

    Same gamma content as the distribution kernel but with the contour on
    the other side of s = 0, which flips it to the upper tail.
    """
    p = effective_params(params)
    zr = p.z * p.z / p.alpha
    return FoxHSpec(m=3, n=1,
                    upper=((1.0 - p.m, 1.0), (zr + 1.0, 1.0), (1.0, 1.0)),
                    lower=((p.mu, 1.0), (zr, 1.0), (0.0, 1.0)))


def _as_batch(gamma):
    g = np.asarray(gamma, dtype=float)
    scalar = g.ndim == 0
    g = np.atleast_1d(g)
    if not (np.isfinite(g).all() and (g > 0.0).all()):
        raise ValueError("gamma must be positive and finite")
    return g, scalar


def _clamp(values: np.ndarray, errors: np.ndarray, lo: float, hi: float,
           what: str) -> np.ndarray:
    """Clamp into [lo, hi], but only for excursions within the error bar."""
    below = values < lo
    above = values > hi
    slack = np.maximum(errors, 4.0 * np.finfo(float).eps)
    bad = (below & (values < lo - slack)) | (above & (values > hi + slack))
    if bad.any():
        worst = values[bad][0]
        raise RuntimeError(
            f"{what} value {worst:g} escapes [{lo:g}, {hi:g}] beyond its "
            f"error estimate; numerical health check failed")
    return np.clip(values, lo, hi)


def snr_pdf(params: ChannelParams, gamma, config: ContourConfig | None = None):
    """SNR density at gamma (scalar or array), nonnegative."""
    g, scalar = _as_batch(gamma)
    p = effective_params(params)
    dc = derive_constants(params)
    arg = dc.Theta * g ** (p.alpha / 2.0)
    vals, errs, _ = fox_h_batch(pdf_hspec(params), arg, config,
                                log_scale=dc.log_Lambda - math.log(2.0))
    out = _clamp(vals / g, errs / g, 0.0, np.inf, "pdf")
    return float(out[0]) if scalar else out


def snr_cdf(params: ChannelParams, gamma, config: ContourConfig | None = None):
    """SNR distribution function at gamma (scalar or array), in [0, 1].

    Arguments in the upper tail are computed through the survival kernel
    (whose contour sits on the decaying side), keeping 1 - F accurate
    instead of cancelling it against 1.
    """
    g, scalar = _as_batch(gamma)
    p = effective_params(params)
    dc = derive_constants(params)
    arg = dc.Theta * g ** (p.alpha / 2.0)
    log_pref = dc.log_Lambda - math.log(p.alpha)
    values = np.empty(len(g))
    errors = np.empty(len(g))
    upper = arg > 1.0
    if upper.any():
        vals, errs, _ = fox_h_batch(ccdf_hspec(params), arg[upper], config,
                                    log_scale=log_pref)
        values[upper] = 1.0 - vals
        errors[upper] = errs
    if (~upper).any():
        vals, errs, _ = fox_h_batch(cdf_hspec(params), arg[~upper], config,
                                    log_scale=log_pref)
        values[~upper] = vals
        errors[~upper] = errs
    out = _clamp(values, errors, 0.0, 1.0, "cdf")
    return float(out[0]) if scalar else out


def snr_moment(params: ChannelParams, order: float) -> float:
    """E[gamma^order], from the Mellin transform of the density.

    Exists for -min(mu, z^2/alpha) < order * alpha / 2 < m.
    """
    p = effective_params(params)
    dc = derive_constants(params)
    t = 2.0 * float(order) / p.alpha
    zr = p.z * p.z / p.alpha
    if not (-min(p.mu, zr) < t < p.m):
        raise ValueError(f"moment of order {order:g} does not exist")
    log_chi = (math.lgamma(p.mu + t) + math.lgamma(zr + t)
               + math.lgamma(p.m - t) - math.lgamma(zr + 1.0 + t))
    return math.exp(dc.log_Lambda - math.log(p.alpha)
                    - t * math.log(dc.Theta) + log_chi)


@dataclass(frozen=True)
class PathLoss:
    """Deterministic link attenuation factors (amplitude gains in (0, 1])."""

    free_space: float
    atmospheric: float

    @property
    def total(self) -> float:
        return self.free_space * self.atmospheric


_SPEED_OF_LIGHT = 299_792_458.0


def path_loss(freq_hz: float, distance_m: float, gain_tx: float = 1.0,
              gain_rx: float = 1.0, attenuation_np_per_m: float = 0.0
              ) -> PathLoss:
    """Free-space and atmospheric amplitude attenuation of one link.

    free_space = c sqrt(Gt Gr) / (4 pi f d); atmospheric = exp(-kappa d / 2)
    with kappa the absorption coefficient in nepers per meter.
    """
    if freq_hz <= 0.0 or distance_m <= 0.0:
        raise ValueError("frequency and distance must be positive")
    if gain_tx <= 0.0 or gain_rx <= 0.0 or attenuation_np_per_m < 0.0:
        raise ValueError("gains must be positive, attenuation nonnegative")
    fs = _SPEED_OF_LIGHT * math.sqrt(gain_tx * gain_rx) \
        / (4.0 * math.pi * freq_hz * distance_m)
    al = math.exp(-attenuation_np_per_m * distance_m / 2.0)
    return PathLoss(free_space=fs, atmospheric=al)


def reduce_special_case(params: ChannelParams, case: str, *,
                        z_surrogate: float = DEFAULT_Z_SURROGATE,
                        m_surrogate: float = DEFAULT_M_SURROGATE
                        ) -> ChannelParams:
    """Map a named limiting regime onto plain parameter substitutions.

    no_pointing : z := z_surrogate (negligible misalignment)
    alpha_mu    : m := m_surrogate (shadowing removed in the large-m limit)
    fisher_f    : alpha := 2 (classical Fisher-Snedecor F envelope)
    """
    if case == "no_pointing":
        return replace(params, z=float(z_surrogate))
    if case == "alpha_mu":
        return replace(params, m=float(m_surrogate))
    if case == "fisher_f":
        return replace(params, alpha=2.0)
    raise ValueError(f"unknown special case {case!r}; "
                     f"expected one of {_SPECIAL_CASES}")
