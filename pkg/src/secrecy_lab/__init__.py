"""Physical-layer-security metrics for alpha-F fading with pointing errors.

The package stacks four layers:

``specfun``
    Complex log-gamma, Gauss-Laguerre rules and a Fox H-function engine
    (univariate and bivariate) built on Mellin-Barnes contour integration.
``channel``
    SNR density, distribution and derived constants of the combined
    alpha-F fading / pointing-error channel.
``secrecy``
    Closed-form secrecy metrics: probability of strictly positive secrecy
    capacity, ergodic secrecy capacity (exact, quadrature and high-SNR
    asymptote), secrecy outage probability (lower bound and asymptote)
    and the diversity gain.
``mc``
    A Monte Carlo sampler for the same channel, used as an independent
    cross-check of every closed form.
"""

from .channel import ChannelParams, derive_constants, effective_params, snr_cdf, snr_pdf
from .mc import (Estimate, SamplerConfig, estimate_asc, estimate_sop_exact,
                 estimate_spsc, sample_snr)
from .secrecy import (MetricResult, SecrecyScenario, asc_asymptotic, asc_exact,
                      asc_quadrature, diversity_gain, sop_asymptotic,
                      sop_lower, spsc)
from .selftest import run_selftest
from .specfun import (BivariateFoxHSpec, ContourConfig, ConvergenceError,
                      FoxHResult, FoxHSpec, GammaPoleError,
                      PoleSeparationError, fox_h, fox_h_batch,
                      fox_h_bivariate, gauss_laguerre, log_gamma_complex)

__version__ = "0.1.0"

__all__ = [
    "ChannelParams",
    "derive_constants",
    "effective_params",
    "snr_cdf",
    "snr_pdf",
    "Estimate",
    "SamplerConfig",
    "estimate_asc",
    "estimate_sop_exact",
    "estimate_spsc",
    "sample_snr",
    "MetricResult",
    "SecrecyScenario",
    "asc_asymptotic",
    "asc_exact",
    "asc_quadrature",
    "diversity_gain",
    "sop_asymptotic",
    "sop_lower",
    "spsc",
    "run_selftest",
    "BivariateFoxHSpec",
    "ContourConfig",
    "ConvergenceError",
    "FoxHResult",
    "FoxHSpec",
    "GammaPoleError",
    "PoleSeparationError",
    "fox_h",
    "fox_h_batch",
    "fox_h_bivariate",
    "gauss_laguerre",
    "log_gamma_complex",
    "__version__",
]
