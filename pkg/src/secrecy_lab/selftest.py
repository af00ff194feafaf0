"""Built-in verification suites behind the ``secrecy-lab selftest`` command.

Each check is a named callable that returns a one-line detail string on
success and raises AssertionError (with a diagnostic message) on failure.
The quick tier runs the cheap identity and cross-check suites; the full
tier adds the large Monte Carlo gates and the asymptote/saturation sweeps.
"""

from __future__ import annotations

import math
import time
from dataclasses import replace

import numpy as np

from .channel import ChannelParams, snr_cdf, snr_pdf
from .mc import (SamplerConfig, estimate_asc, estimate_spsc,
                 estimate_sop_exact, sample_snr)
from .secrecy import (SecrecyScenario, asc_asymptotic, asc_exact,
                      asc_quadrature, diversity_gain, sop_asymptotic,
                      sop_lower, spsc)
from .specfun import (ContourConfig, FoxHSpec, fox_h, fox_h_batch,
                      gauss_laguerre, log_gamma_complex)

__all__ = ["run_selftest", "QUICK_CHECKS", "FULL_CHECKS"]

# Scenario used by most cross-checks: moderate SNRs, both pointing errors
# active, distinct alpha on the two links.
_D0 = ChannelParams(alpha=2.0, mu=1.5, m=3.0, z=1.2, gamma_bar=8.0)
_E0 = ChannelParams(alpha=3.5, mu=1.0, m=2.5, z=0.9, gamma_bar=2.0)
_SCEN0 = SecrecyScenario(channel_d=_D0, channel_e=_E0, r_s=0.5)

# Saturation-friendly pair (approach rate gamma_bar^-0.72, see README).
_DSAT = ChannelParams(alpha=2.0, mu=1.0, m=3.0, z=1.5, gamma_bar=1.0)
_ESAT = ChannelParams(alpha=2.0, mu=1.0, m=2.5, z=1.2, gamma_bar=1.0)

_PARAM_GRID = [
    ChannelParams(alpha=1.0, mu=2.5, m=3.0, z=1.2, gamma_bar=1.0),
    ChannelParams(alpha=2.0, mu=0.8, m=1.5, z=0.7, gamma_bar=3.0),
    ChannelParams(alpha=2.0, mu=1.0, m=3.0, z=1.2, gamma_bar=1.0),
    ChannelParams(alpha=3.5, mu=2.5, m=1.5, z=50.0, gamma_bar=0.5),
    ChannelParams(alpha=3.5, mu=0.8, m=3.0, z=1.2, gamma_bar=10.0),
    ChannelParams(alpha=3.5, mu=1.0, m=25.0, z=0.7, gamma_bar=1.0),
]


def _assert_close(value: float, ref: float, tol: float, what: str) -> None:
    err = abs(value - ref)
    scale = max(abs(ref), 1.0)
    if not err <= tol * scale:
        raise AssertionError(
            f"{what}: got {value!r}, want {ref!r} (err {err:.3e}, "
            f"tol {tol * scale:.3e})")


def check_log_gamma_reference() -> str:
    cases = [
        (1.0 + 0.0j, 0.0 + 0.0j),
        (0.5 + 0.0j, complex(math.log(math.sqrt(math.pi)), 0.0)),
        (3.0 + 4.0j, complex(-1.756626784603784110530604,
                             4.742664438034657928194889)),
        (0.5 - 2.5j, complex(-3.008052359133426898049105,
                             0.1924417340372385975451229)),
    ]
    worst = 0.0
    for s, ref in cases:
        got = complex(log_gamma_complex(s))
        worst = max(worst, abs(got - ref) / max(abs(ref), 1.0))
    if worst > 1e-13:
        raise AssertionError(f"log-gamma reference points: worst {worst:.3e}")
    return f"4 reference points, worst rel err {worst:.1e}"


def check_log_gamma_recurrence() -> str:
    pts = np.array([0.3 + 0.7j, -2.2 + 1.5j, 5.0 - 3.0j, -0.5 - 8.0j, 12.0 + 0.1j])
    lhs = log_gamma_complex(pts + 1.0)
    rhs = log_gamma_complex(pts) + np.log(pts.astype(complex))
    worst = float(np.max(np.abs(lhs - rhs) / np.maximum(np.abs(lhs), 1.0)))
    if worst > 1e-12:
        raise AssertionError(f"recurrence residual {worst:.3e}")
    return f"5 points, worst rel residual {worst:.1e}"


_EXP_SPEC = FoxHSpec(m=1, n=0, upper=(), lower=((0.0, 1.0),))


def check_foxh_exponential() -> str:
    z = np.geomspace(1e-3, 20.0, 20)
    vals, _, _ = fox_h_batch(_EXP_SPEC, z)
    worst = float(np.max(np.abs(vals - np.exp(-z)) / np.exp(-z)))
    if worst > 1e-8:
        raise AssertionError(f"exp identity worst rel err {worst:.3e}")
    return f"20 points, worst rel err {worst:.1e}"


def check_foxh_binomial() -> str:
    a = 2.3
    spec = FoxHSpec(m=1, n=1, upper=((1.0 - a, 1.0),), lower=((0.0, 1.0),))
    z = np.geomspace(1e-3, 1e3, 20)
    vals, _, _ = fox_h_batch(spec, z)
    ref = math.gamma(a) * (1.0 + z) ** (-a)
    worst = float(np.max(np.abs(vals - ref) / ref))
    if worst > 1e-8:
        raise AssertionError(f"binomial identity worst rel err {worst:.3e}")
    return f"20 points, worst rel err {worst:.1e}"


def check_laguerre_moments() -> str:
    x, w = gauss_laguerre(32)
    worst = 0.0
    for r in range(4):
        worst = max(worst, abs(float(w @ x ** r) - math.factorial(r)))
    if worst > 1e-8:
        raise AssertionError(f"moment error {worst:.3e}")
    return f"N=32 moments r<=3, worst abs err {worst:.1e}"


def check_contour_rejects_bad_abscissa() -> str:
    # Fault injection: an abscissa outside the pole-separation strip must be
    # rejected, not silently integrated.
    spec = FoxHSpec(m=1, n=1, upper=((1.0 - 2.3, 1.0),), lower=((0.0, 1.0),))
    bad = ContourConfig(c=5.0)  # strip is (0, 2.3)
    try:
        fox_h(spec, 1.0, bad)
    except ValueError as exc:
        return f"rejected with: {exc}"
    raise AssertionError("abscissa outside the strip was accepted")


def check_channel_normalization() -> str:
    # With strong pointing errors both distribution tails are heavy (the
    # small-SNR exponent is z^2/alpha, the large-SNR one min(z^2, m*alpha)),
    # so quadrature mass over any finite window falls short of 1 by the tail
    # probabilities.  Adding those back from the CDF/CCDF kernels makes this
    # a cross-kernel identity: the density, distribution and complementary
    # kernels are evaluated through different contour integrands.
    worst = 0.0
    for p in (_D0, _E0):
        g = np.geomspace(1e-12, 1e12, 6000) * p.gamma_bar
        mass = float(np.trapezoid(snr_pdf(p, g), g))
        tail_lo = float(snr_cdf(p, g[:1])[0])
        tail_hi = 1.0 - float(snr_cdf(p, g[-1:])[0])
        worst = max(worst, abs(mass + tail_lo + tail_hi - 1.0))
    if worst > 3e-5:
        raise AssertionError(f"density mass deviates by {worst:.3e}")
    return f"2 channels, worst |mass+tails-1| {worst:.1e}"


def check_channel_fd_consistency() -> str:
    worst = 0.0
    for p in (_D0, _E0):
        g = np.array([0.2, 0.7, 1.5, 4.0, 9.0]) * p.gamma_bar
        h = 1e-5 * g
        fd = (snr_cdf(p, g + h) - snr_cdf(p, g - h)) / (2.0 * h)
        pdf = snr_pdf(p, g)
        worst = max(worst, float(np.max(np.abs(fd - pdf) / np.maximum(pdf, 1e-30))))
    if worst > 1e-5:
        raise AssertionError(f"CDF/PDF mismatch {worst:.3e}")
    return f"2 channels x 5 points, worst rel err {worst:.1e}"


def check_spsc_identical_half() -> str:
    s = SecrecyScenario(channel_d=_D0, channel_e=_D0)
    v = spsc(s).value
    _assert_close(v, 0.5, 1e-9, "identical-channel SPSC")
    return f"value {v:.12f}"


def check_complementarity() -> str:
    worst = 0.0
    for d, e in ((_D0, _E0), (_E0, _D0)):
        s = SecrecyScenario(channel_d=d, channel_e=e, r_s=0.0)
        total = spsc(s).value + sop_lower(s).value
        worst = max(worst, abs(total - 1.0))
    if worst > 1e-6:
        raise AssertionError(f"spsc + sop_lower(0) off by {worst:.3e}")
    return f"2 orderings, worst |sum-1| {worst:.1e}"


def check_asc_exact_vs_quadrature() -> str:
    a = asc_exact(_SCEN0, allow_fallback=False)
    b = asc_quadrature(_SCEN0)
    rel = abs(a.value - b.value) / abs(b.value)
    if rel > 1e-3:
        raise AssertionError(
            f"closed form {a.value!r} vs quadrature {b.value!r} (rel {rel:.3e})")
    return f"rel diff {rel:.1e}"


def check_asc_asymptotic_stability() -> str:
    s = SecrecyScenario(channel_d=_DSAT, channel_e=_ESAT)
    v32 = asc_asymptotic(s, 32).value
    v64 = asc_asymptotic(s, 64).value
    rel = abs(v32 - v64) / abs(v64)
    if rel > 1e-4:
        raise AssertionError(f"N=32 {v32!r} vs N=64 {v64!r} (rel {rel:.3e})")
    return f"N=32 vs N=64 rel diff {rel:.1e}"


def check_sampler_mean() -> str:
    cfg = SamplerConfig(seed=20240817, n_samples=100_000)
    s = sample_snr(_D0, cfg)
    sigma = float(s.std()) / math.sqrt(len(s))
    dev = abs(float(s.mean()) - _D0.gamma_bar)
    if dev > 4.0 * sigma:
        raise AssertionError(
            f"sample mean {s.mean()!r} vs {_D0.gamma_bar} ({dev / sigma:.1f} sigma)")
    return f"mean within {dev / sigma:.2f} sigma of gamma_bar"


def check_sampler_cdf_quantiles() -> str:
    cfg = SamplerConfig(seed=7, n_samples=100_000)
    s = np.sort(sample_snr(_E0, cfg))
    probes = np.quantile(s, [0.05, 0.2, 0.4, 0.6, 0.8, 0.95])
    model = snr_cdf(_E0, probes)
    empirical = np.searchsorted(s, probes, side="right") / len(s)
    sigma = np.sqrt(model * (1.0 - model) / len(s))
    worst = float(np.max(np.abs(model - empirical) / sigma))
    if worst > 4.0:
        raise AssertionError(f"CDF quantile deviation {worst:.1f} sigma")
    return f"6 quantiles, worst {worst:.2f} sigma"


def check_mc_spsc_cross() -> str:
    cfg = SamplerConfig(seed=99, n_samples=100_000)
    est = estimate_spsc(_SCEN0, cfg)
    ref = spsc(_SCEN0).value
    dev = abs(est.mean - ref)
    if dev > max(est.ci_half_width, 1e-12) * (4.0 / 3.0):
        raise AssertionError(
            f"MC {est.mean!r} vs closed form {ref!r} (CI {est.ci_half_width:.2e})")
    return f"deviation {dev:.2e} vs 3-sigma CI {est.ci_half_width:.2e}"


def check_distribution_grid() -> str:
    worst_mass, worst_fd = 0.0, 0.0
    for p in _PARAM_GRID:
        g = np.geomspace(1e-12, 1e12, 6000) * p.gamma_bar
        mass = float(np.trapezoid(snr_pdf(p, g), g))
        mass += float(snr_cdf(p, g[:1])[0])
        mass += 1.0 - float(snr_cdf(p, g[-1:])[0])
        worst_mass = max(worst_mass, abs(mass - 1.0))
        qs = np.array([0.1, 0.3, 0.5, 0.7, 0.9])
        # crude quantile probe via the sampled grid CDF
        cdf = snr_cdf(p, g)
        probes = np.interp(qs, cdf, g)
        h = 1e-5 * probes
        fd = (snr_cdf(p, probes + h) - snr_cdf(p, probes - h)) / (2.0 * h)
        pdf = snr_pdf(p, probes)
        worst_fd = max(worst_fd, float(np.max(np.abs(fd - pdf)
                                              / np.maximum(pdf, 1e-30))))
    if worst_mass > 3e-5 or worst_fd > 1e-5:
        raise AssertionError(
            f"grid normalization {worst_mass:.3e}, FD {worst_fd:.3e}")
    return f"6 sets: |mass+tails-1| <= {worst_mass:.1e}, FD <= {worst_fd:.1e}"


def check_sampler_ks_grid() -> str:
    from scipy import stats
    worst_p = 1.0
    for i, p in enumerate(_PARAM_GRID):
        cfg = SamplerConfig(seed=1000 + i, n_samples=100_000)
        s = sample_snr(p, cfg)
        res = stats.kstest(s, lambda q, pp=p: snr_cdf(pp, np.maximum(q, 1e-300)))
        worst_p = min(worst_p, float(res.pvalue))
    if worst_p <= 0.01:
        raise AssertionError(f"KS p-value {worst_p:.4f}")
    return f"6 sets, min KS p-value {worst_p:.3f}"


def check_mc_gates_large() -> str:
    cfg = SamplerConfig(seed=20240818, n_samples=10_000_000)
    rows = []
    spsc_est = estimate_spsc(_SCEN0, cfg)
    dev = abs(spsc_est.mean - spsc(_SCEN0).value)
    rows.append(("spsc", dev, spsc_est.ci_half_width))
    asc_est = estimate_asc(_SCEN0, cfg)
    dev = abs(asc_est.mean - asc_exact(_SCEN0).value)
    rows.append(("asc", dev, asc_est.ci_half_width))
    sop_est = estimate_sop_exact(_SCEN0, cfg)
    if sop_lower(_SCEN0).value > sop_est.mean + sop_est.ci_half_width:
        raise AssertionError("SOP bound exceeds the Monte Carlo estimate")
    for name, dev, ci in rows:
        if dev > ci:
            raise AssertionError(f"{name}: deviation {dev:.2e} > CI {ci:.2e}")
    return "; ".join(f"{n} dev {d:.1e} (CI {c:.1e})" for n, d, c in rows)


def check_sop_slope() -> str:
    regimes = [
        ChannelParams(alpha=2.0, mu=0.8, m=3.0, z=2.0, gamma_bar=1.0),   # mu_D smallest
        ChannelParams(alpha=2.0, mu=2.5, m=3.0, z=1.1, gamma_bar=1.0),   # pointing smallest
        ChannelParams(alpha=3.5, mu=2.5, m=3.0, z=4.0, gamma_bar=1.0),   # shadowing_e smallest
    ]
    e = ChannelParams(alpha=2.0, mu=1.0, m=1.6, z=1.5, gamma_bar=1.0)
    details = []
    for d in regimes:
        db = np.array([40.0, 45.0, 50.0])
        vals = []
        for snr_db in db:
            s = SecrecyScenario(
                channel_d=replace(d, gamma_bar=10.0 ** (snr_db / 10.0)),
                channel_e=e, r_s=0.5)
            vals.append(sop_lower(s).value)
        slope = np.polyfit(db / 10.0, np.log10(vals), 1)[0]
        want = -diversity_gain(SecrecyScenario(channel_d=d, channel_e=e))
        rel = abs(slope - want) / abs(want)
        if rel > 0.05:
            raise AssertionError(f"slope {slope:.4f} vs {want:.4f} (rel {rel:.2e})")
        details.append(f"{slope:.3f}/{want:.3f}")
    return "fitted/expected slopes " + ", ".join(details)


def check_sop_asymptote_ratio() -> str:
    d = ChannelParams(alpha=2.0, mu=0.8, m=3.0, z=2.0,
                      gamma_bar=10.0 ** 5.0)   # 50 dB
    e = ChannelParams(alpha=2.0, mu=1.0, m=1.6, z=1.5, gamma_bar=1.0)
    s = SecrecyScenario(channel_d=d, channel_e=e, r_s=0.5)
    ratio = sop_lower(s).value / sop_asymptotic(s).value
    if abs(ratio - 1.0) > 0.03:
        raise AssertionError(f"bound/asymptote ratio {ratio:.4f} at 50 dB")
    return f"ratio {ratio:.4f} at 50 dB"


def check_asc_saturation() -> str:
    g = 10.0 ** 4.0   # 40 dB
    s40 = SecrecyScenario(channel_d=replace(_DSAT, gamma_bar=g),
                          channel_e=replace(_ESAT, gamma_bar=g))
    exact = asc_exact(s40).value
    limit = asc_asymptotic(SecrecyScenario(channel_d=_DSAT, channel_e=_ESAT),
                           32).value
    rel = abs(exact - limit) / limit
    if rel > 0.02:
        raise AssertionError(f"40 dB exact {exact!r} vs limit {limit!r} "
                             f"(rel {rel:.3e})")
    return f"40 dB exact vs saturation rel diff {rel:.1e}"


def check_ci_calibration() -> str:
    ref = spsc(_SCEN0).value
    hits = 0
    runs = 50
    for k in range(runs):
        cfg = SamplerConfig(seed=5000 + k, n_samples=10_000)
        est = estimate_spsc(_SCEN0, cfg)
        hits += abs(est.mean - ref) <= est.ci_half_width
    if hits < runs - 1:
        raise AssertionError(f"3-sigma CI covered truth in only {hits}/{runs} runs")
    return f"CI covered truth in {hits}/{runs} runs"


QUICK_CHECKS = [
    ("log-gamma-reference", check_log_gamma_reference),
    ("log-gamma-recurrence", check_log_gamma_recurrence),
    ("foxh-exponential-identity", check_foxh_exponential),
    ("foxh-binomial-identity", check_foxh_binomial),
    ("laguerre-moments", check_laguerre_moments),
    ("contour-bad-abscissa-rejected", check_contour_rejects_bad_abscissa),
    ("channel-normalization", check_channel_normalization),
    ("channel-fd-consistency", check_channel_fd_consistency),
    ("spsc-identical-half", check_spsc_identical_half),
    ("spsc-sop-complementarity", check_complementarity),
    ("asc-exact-vs-quadrature", check_asc_exact_vs_quadrature),
    ("asc-asymptotic-stability", check_asc_asymptotic_stability),
    ("mc-sampler-mean", check_sampler_mean),
    ("mc-sampler-cdf-quantiles", check_sampler_cdf_quantiles),
    ("mc-spsc-cross-check", check_mc_spsc_cross),
]

FULL_CHECKS = QUICK_CHECKS + [
    ("distribution-grid", check_distribution_grid),
    ("mc-sampler-ks-grid", check_sampler_ks_grid),
    ("mc-gates-10m", check_mc_gates_large),
    ("sop-diversity-slope", check_sop_slope),
    ("sop-asymptote-ratio", check_sop_asymptote_ratio),
    ("asc-saturation-40db", check_asc_saturation),
    ("mc-ci-calibration", check_ci_calibration),
]


def run_selftest(full: bool = False, out=print) -> bool:
    checks = FULL_CHECKS if full else QUICK_CHECKS
    level = "full" if full else "quick"
    failures = 0
    started = time.monotonic()
    for name, fn in checks:
        t0 = time.monotonic()
        try:
            detail = fn()
        except AssertionError as exc:
            failures += 1
            out(f"FAIL {name} ({time.monotonic() - t0:.1f}s): {exc}")
        except Exception as exc:  # engine errors count as failures, with context
            failures += 1
            out(f"FAIL {name} ({time.monotonic() - t0:.1f}s): "
                f"{type(exc).__name__}: {exc}")
        else:
            out(f"PASS {name} ({time.monotonic() - t0:.1f}s): {detail}")
    total = time.monotonic() - started
    out(f"selftest {level}: {len(checks) - failures}/{len(checks)} passed "
        f"in {total:.1f}s")
    return failures == 0
