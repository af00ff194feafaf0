"""Special-function kernel: complex log-gamma, Fox H-functions (univariate
and the two-variable rate-integral family), and Gauss-Laguerre rules."""

from .contour import ContourConfig, ConvergenceError, integrate_contour
from .foxh import (BivariateFoxHSpec, FoxHResult, FoxHSpec,
                   PoleSeparationError, fox_h, fox_h_batch, fox_h_bivariate)
from .gammafn import GammaPoleError, log_gamma_complex
from .laguerre import gauss_laguerre

__all__ = [
    "ContourConfig", "ConvergenceError", "integrate_contour",
    "BivariateFoxHSpec", "FoxHResult", "FoxHSpec", "PoleSeparationError",
    "fox_h", "fox_h_batch", "fox_h_bivariate",
    "GammaPoleError", "log_gamma_complex", "gauss_laguerre",
]
