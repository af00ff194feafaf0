"""End-to-end acceptance checks.

Each test covers one numbered shipping criterion and prints a single
summary line with the measured figures when it passes; the pytest -v
status line is the pass/fail record per criterion.
"""

import math
from dataclasses import replace
from pathlib import Path

import numpy as np
from scipy import stats

from secrecy_lab.channel import (
    ChannelParams,
    effective_params,
    snr_cdf,
    snr_pdf,
)
from secrecy_lab.cli import main
from secrecy_lab.mc import (
    SamplerConfig,
    estimate_asc,
    estimate_sop_exact,
    estimate_spsc,
    sample_snr,
)
from secrecy_lab.secrecy import (
    SecrecyScenario,
    asc_asymptotic,
    asc_exact,
    asc_quadrature,
    diversity_gain,
    sop_asymptotic,
    sop_lower,
    spsc,
)
from secrecy_lab.specfun import FoxHSpec, fox_h_batch

from oracles import (
    PARAM_GRID,
    SCENARIO_GRID,
    alpha_mu_pointing_pdf,
    density_mass_defect,
    fisher_f_pointing_pdf,
    sop_quadrature,
)

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"


def _report(criterion: int, detail: str) -> None:
    print(f"criterion {criterion} PASS: {detail}")


def test_criterion_1_special_function_identities():
    z = np.geomspace(1e-3, 20.0, 20)
    exp_spec = FoxHSpec(m=1, n=0, lower=((0.0, 1.0),))
    vals, _, _ = fox_h_batch(exp_spec, z)
    worst = float(np.max(np.abs(vals - np.exp(-z)) / np.exp(-z)))

    a = 2.5
    zb = np.geomspace(1e-2, 1e2, 20)
    pow_spec = FoxHSpec(m=1, n=1, upper=((1.0 - a, 1.0),),
                        lower=((0.0, 1.0),))
    exact = math.gamma(a) * (1.0 + zb) ** (-a)
    vals_b, _, _ = fox_h_batch(pow_spec, zb)
    worst = max(worst, float(np.max(np.abs(vals_b - exact) / exact)))

    assert worst <= 1e-8
    _report(1, f"both identities at 20 points, worst rel err {worst:.2e}")


def test_criterion_2_distribution_grid():
    worst_mass, worst_fd, worst_p = 0.0, 0.0, 1.0
    for i, p in enumerate(PARAM_GRID):
        worst_mass = max(worst_mass, density_mass_defect(p, n=40001))

        g = np.geomspace(1e-10, 1e10, 2001) * p.gamma_bar
        cdf = snr_cdf(p, g)
        probes = np.interp([0.1, 0.3, 0.5, 0.7, 0.9], cdf, g)
        h = 1e-5 * probes
        fd = (snr_cdf(p, probes + h) - snr_cdf(p, probes - h)) / (2.0 * h)
        pdf = snr_pdf(p, probes)
        worst_fd = max(worst_fd, float(np.max(np.abs(fd - pdf) / pdf)))

        draws = sample_snr(p, SamplerConfig(seed=909 + i,
                                            n_samples=100_000))
        res = stats.kstest(draws, lambda x, _p=p: snr_cdf(_p, x))
        worst_p = min(worst_p, float(res.pvalue))

    assert worst_mass <= 1e-6
    assert worst_fd <= 1e-5
    assert worst_p > 0.01
    _report(2, f"6 sets: |mass-1| <= {worst_mass:.2e}, "
               f"FD <= {worst_fd:.2e}, min KS p = {worst_p:.3f}")


def test_criterion_3_spsc_against_monte_carlo():
    worst_sigma = 0.0
    for k, scn in enumerate(SCENARIO_GRID):
        closed = spsc(scn).value
        est = estimate_spsc(scn, SamplerConfig(seed=7100 + k,
                                               n_samples=10_000_000))
        dev = abs(closed - est.mean)
        assert dev <= est.ci_half_width, \
            f"scenario {k}: dev {dev:.2e} > 3-sigma CI {est.ci_half_width:.2e}"
        worst_sigma = max(worst_sigma, 3.0 * dev / est.ci_half_width)
    identical = spsc(SCENARIO_GRID[1]).value
    assert abs(identical - 0.5) <= 0.002
    _report(3, f"10 scenarios at 1e7 pairs, worst dev {worst_sigma:.2f} sigma"
               f"; identical channels {identical:.4f}")


def test_criterion_4_asc_routes_and_saturation():
    worst_quad, worst_sigma = 0.0, 0.0
    for k, scn in enumerate(SCENARIO_GRID):
        closed = asc_exact(scn, allow_fallback=False)
        assert closed.method == "closed_form"
        quad = asc_quadrature(scn)
        rel = abs(closed.value - quad.value) / abs(quad.value)
        assert rel <= 1e-3, f"scenario {k}: closed vs quadrature rel {rel:.2e}"
        worst_quad = max(worst_quad, rel)

        est = estimate_asc(scn, SamplerConfig(seed=7300 + k,
                                              n_samples=10_000_000))
        dev = abs(closed.value - est.mean)
        assert dev <= est.ci_half_width, \
            f"scenario {k}: dev {dev:.2e} > 3-sigma CI {est.ci_half_width:.2e}"
        worst_sigma = max(worst_sigma, 3.0 * dev / est.ci_half_width)

    d = ChannelParams(2.0, 1.0, 3.0, 1.5, 1e4)   # 40 dB, equal mean SNRs
    e = ChannelParams(2.0, 1.0, 2.5, 1.2, 1e4)
    at_40db = asc_exact(SecrecyScenario(d, e)).value
    plateau = asc_asymptotic(SecrecyScenario(
        replace(d, gamma_bar=1.0), replace(e, gamma_bar=1.0)),
        n_nodes=32).value
    sat_rel = abs(at_40db - plateau) / plateau
    assert sat_rel <= 0.02
    _report(4, f"10 scenarios: closed vs quadrature <= {worst_quad:.2e}, "
               f"worst MC dev {worst_sigma:.2f} sigma; 40 dB saturation "
               f"gap {sat_rel:.2%}")


def test_criterion_5_sop_bound():
    worst_quad = 0.0
    for k, scn in enumerate(SCENARIO_GRID):
        bound = sop_lower(scn).value
        ref = sop_quadrature(scn)
        rel = abs(bound - ref) / ref
        assert rel <= 1e-4, f"scenario {k}: bound vs quadrature rel {rel:.2e}"
        worst_quad = max(worst_quad, rel)

        est = estimate_sop_exact(scn, SamplerConfig(seed=7500 + k,
                                                    n_samples=1_000_000))
        assert bound <= est.mean + est.ci_half_width, \
            f"scenario {k}: bound {bound:.4f} above MC {est.mean:.4f}"

    base = SCENARIO_GRID[0]
    by_rate = [sop_lower(SecrecyScenario(base.channel_d, base.channel_e,
                                         rs)).value
               for rs in np.linspace(0.0, 4.0, 17)]
    assert all(b >= a for a, b in zip(by_rate, by_rate[1:]))
    by_snr = [sop_lower(SecrecyScenario(
        replace(base.channel_d, gamma_bar=g), base.channel_e,
        base.r_s)).value for g in np.geomspace(1.0, 1e4, 9)]
    assert all(b <= a for a, b in zip(by_snr, by_snr[1:]))
    _report(5, f"10 scenarios: bound vs quadrature <= {worst_quad:.2e}, "
               f"below MC exact; monotone in R_s and in main-link SNR")


def test_criterion_6_diversity_slopes():
    regimes = [
        ChannelParams(2.0, 0.8, 3.0, 2.0, 1.0),   # mu_d smallest
        ChannelParams(2.0, 2.5, 3.0, 1.1, 1.0),   # pointing smallest
        ChannelParams(3.5, 2.5, 3.0, 4.0, 1.0),   # wiretap shadowing
    ]
    e = ChannelParams(2.0, 1.0, 1.6, 1.5, 1.0)
    pairs = []
    for d in regimes:
        db = np.array([40.0, 45.0, 50.0])
        vals = [sop_lower(SecrecyScenario(
            replace(d, gamma_bar=10.0 ** (s / 10.0)), e, 0.5)).value
            for s in db]
        slope = float(np.polyfit(db / 10.0, np.log10(vals), 1)[0])
        want = -diversity_gain(SecrecyScenario(d, e, 0.5))
        assert abs(slope - want) / abs(want) <= 0.05, \
            f"{d}: slope {slope:.3f} vs {want:.3f}"
        pairs.append(f"{slope:.3f}/{want:.3f}")

    at_50db = SecrecyScenario(replace(regimes[0], gamma_bar=1e5), e, 0.5)
    ratio = sop_lower(at_50db).value / sop_asymptotic(at_50db).value
    assert abs(ratio - 1.0) <= 0.03
    _report(6, "fitted/expected slopes " + ", ".join(pairs)
               + f"; 50 dB bound/asymptote ratio {ratio:.4f}")


def test_criterion_7_complementarity():
    worst = 0.0
    for scn in SCENARIO_GRID:
        zero_rate = SecrecyScenario(scn.channel_d, scn.channel_e, 0.0)
        total = spsc(zero_rate).value + sop_lower(zero_rate).value
        worst = max(worst, abs(total - 1.0))
    assert worst <= 1e-6
    _report(7, f"10 scenarios: |spsc + sop(0) - 1| <= {worst:.2e}")


def test_criterion_8_special_case_reductions():
    p = ChannelParams(2.0, 1.5, 3.0, 1.2, 4.0)
    g = np.geomspace(0.05, 20.0, 25) * p.gamma_bar
    fisher_gap = float(np.max(np.abs(snr_pdf(p, g)
                                     - fisher_f_pointing_pdf(p, g))))
    assert fisher_gap <= 1e-6

    q = ChannelParams(2.0, 1.5, 3.0, math.inf, 2.0)
    lo = effective_params(q, z_surrogate=50.0)
    hi = effective_params(q, z_surrogate=200.0)
    gz = np.geomspace(0.01, 100.0, 60) * q.gamma_bar
    z_gap = float(np.max(np.abs(snr_cdf(lo, gz) - snr_cdf(hi, gz))))
    assert z_gap < 1e-4

    r = ChannelParams(3.5, 1.0, 200.0, 1.2, 2.0)
    gr = np.geomspace(0.1, 8.0, 20) * r.gamma_bar
    am_gap = float(np.max(np.abs(snr_pdf(r, gr)
                                 - alpha_mu_pointing_pdf(r, gr))))
    assert am_gap <= 1e-3
    _report(8, f"Fisher-F sup gap {fisher_gap:.2e}, z-surrogate CDF gap "
               f"{z_gap:.2e}, large-m density sup gap {am_gap:.2e}")


def test_criterion_9_deterministic_csv(tmp_path):
    checked = []
    for conf in sorted(CONFIG_DIR.glob("*.conf")):
        a = tmp_path / (conf.stem + "_a.csv")
        b = tmp_path / (conf.stem + "_b.csv")
        assert main(["run", str(conf), "--out", str(a)]) == 0
        assert main(["run", str(conf), "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes(), conf.name
        checked.append(conf.stem)
    assert len(checked) == 5
    _report(9, "byte-identical reruns for " + ", ".join(checked))
