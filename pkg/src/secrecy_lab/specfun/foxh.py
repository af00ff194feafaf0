"""Fox H-function evaluation by Mellin-Barnes contour integration.

Conventions follow the standard definition

    H^{m,n}_{p,q}[z] = (1 / 2 pi i) * integral  chi(s) z^{-s} ds

over a vertical contour, with

    chi(s) = prod_{j<=m} Gamma(b_j + B_j s) * prod_{j<=n} Gamma(1 - a_j - A_j s)
             ------------------------------------------------------------------
             prod_{j>m} Gamma(1 - b_j - B_j s) * prod_{j>n} Gamma(a_j + A_j s)

where ``lower`` holds the (b_j, B_j) pairs and ``upper`` the (a_j, A_j)
pairs.  The contour must separate the increasing pole lattice of the
Gamma(b_j + B_j s) factors (left family, Re(s) <= max_j(-b_j / B_j)) from
the lattice of the Gamma(1 - a_j - A_j s) factors (right family,
Re(s) >= min_j((1 - a_j) / A_j)); specs whose extreme poles interleave are
rejected at construction.

Arguments are restricted to z > 0 and results are real; a residual
imaginary part above 1e-8 of the magnitude is reported as a numerical
health warning and folded into the error estimate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .contour import ContourConfig, integrate_contour
from .gammafn import log_gamma_complex

__all__ = [
    "FoxHSpec", "BivariateFoxHSpec", "FoxHResult", "PoleSeparationError",
    "fox_h", "fox_h_batch", "fox_h_bivariate",
]

_TWO_PI = 2.0 * np.pi
_IMAG_WARN_RATIO = 1e-8
_MARGIN = 1e-3
_BATCH_CHUNK = 2048


class PoleSeparationError(ValueError):
    """The two pole families admit no separating contour."""


def _check_pairs(name: str, pairs) -> tuple:
    out = []
    for pair in pairs:
        a, A = pair
        a, A = float(a), float(A)
        if not (np.isfinite(a) and np.isfinite(A)):
            raise ValueError(f"{name} entries must be finite, got {pair}")
        if A <= 0.0:
            raise ValueError(f"{name} coefficients must be positive, got {A}")
        out.append((a, A))
    return tuple(out)


@dataclass(frozen=True)
class FoxHSpec:
    """Order (m, n) and parameter pairs of one H-function.

    upper : ((a_1, A_1), ..., (a_p, A_p)), first n entries in the numerator
    lower : ((b_1, B_1), ..., (b_q, B_q)), first m entries in the numerator
    """

    m: int
    n: int
    upper: tuple = ()
    lower: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "upper", _check_pairs("upper", self.upper))
        object.__setattr__(self, "lower", _check_pairs("lower", self.lower))
        if not (0 <= self.n <= len(self.upper)):
            raise ValueError("need 0 <= n <= p")
        if not (0 <= self.m <= len(self.lower)):
            raise ValueError("need 0 <= m <= q")
        lo, hi = self.strip
        if not lo < hi:
            raise PoleSeparationError(
                f"pole families are not separable: left extreme {lo:g} "
                f">= right extreme {hi:g}")

    @property
    def p(self) -> int:
        return len(self.upper)

    @property
    def q(self) -> int:
        return len(self.lower)

    @property
    def strip(self) -> tuple[float, float]:
        """Open interval of admissible contour abscissas."""
        lo = max((-b / B for b, B in self.lower[: self.m]), default=-np.inf)
        hi = min(((1.0 - a) / A for a, A in self.upper[: self.n]),
                 default=np.inf)
        return lo, hi

    @property
    def decay_exponent(self) -> float:
        """Exponential decay rate factor a* of the contour integrand.

        The integrand falls off like exp(-a* pi |t| / 2); the engine
        requires a* > 0.
        """
        up = sum(A for _, A in self.upper[: self.n]) \
            - sum(A for _, A in self.upper[self.n:])
        low = sum(B for _, B in self.lower[: self.m]) \
            - sum(B for _, B in self.lower[self.m:])
        return up + low

    def log_kernel(self, s: np.ndarray) -> np.ndarray:
        """log chi(s), vectorized over a complex node array."""
        total = np.zeros_like(s, dtype=np.complex128)
        for b, B in self.lower[: self.m]:
            total += log_gamma_complex(b + B * s)
        for a, A in self.upper[: self.n]:
            total += log_gamma_complex(1.0 - a - A * s)
        for b, B in self.lower[self.m:]:
            total -= log_gamma_complex(1.0 - b - B * s)
        for a, A in self.upper[self.n:]:
            total -= log_gamma_complex(a + A * s)
        return total

    def default_abscissa(self) -> float:
        lo, hi = self.strip
        if np.isfinite(lo) and np.isfinite(hi):
            return 0.5 * (lo + hi)
        if np.isfinite(lo):
            return lo + 1.0
        if np.isfinite(hi):
            return hi - 1.0
        return 0.0

    def validate_abscissa(self, c: float) -> float:
        lo, hi = self.strip
        margin = _MARGIN * min(hi - lo, 1.0) if np.isfinite(lo) \
            and np.isfinite(hi) else _MARGIN
        if not (lo + margin <= c <= hi - margin):
            raise ValueError(
                f"contour abscissa {c:g} violates the separation strip "
                f"({lo:g}, {hi:g}) with margin {margin:g}")
        return c


@dataclass(frozen=True)
class FoxHResult:
    """Value, error estimate, and health warnings of one evaluation."""

    value: float
    err: float
    warnings: tuple = ()


def _resolve_contour(spec: FoxHSpec, config: ContourConfig | None):
    config = config or ContourConfig()
    if spec.decay_exponent <= 0.0:
        raise PoleSeparationError(
            "integrand lacks exponential contour decay (a* <= 0); "
            "this kernel is outside the engine's scope")
    c = spec.default_abscissa() if config.c is None \
        else spec.validate_abscissa(config.c)
    lo, hi = spec.strip
    scale = min(c - lo, hi - c, 0.5)
    return config, c, scale


def _real_log_chi(spec: FoxHSpec, c: float) -> float:
    return float(spec.log_kernel(np.array([c + 0.0j]))[0].real)


def _saddle_abscissa(spec: FoxHSpec, lnz: float) -> float:
    """Abscissa roughly minimizing the integrand magnitude |chi(c) z^-c|.

    The target log|chi(c)| - c ln z blows up at both strip edges (a
    numerator gamma pole sits on each finite edge) and is nearly convex in
    between for the kernels in scope, so a bracket plus golden-section
    search lands close to the saddle.  Any interior abscissa is valid;
    this choice only controls cancellation and oscillation cost.
    """
    lo, hi = spec.strip
    width = hi - lo
    delta = _MARGIN * min(width, 1.0) if np.isfinite(width) else _MARGIN

    def h(c: float) -> float:
        return _real_log_chi(spec, c) - c * lnz

    a = lo + delta if np.isfinite(lo) else None
    b = hi - delta if np.isfinite(hi) else None
    seed = spec.default_abscissa()
    if a is None:
        a = seed - 1.0
        while h(a) < h(a + 0.5) and a > seed - 512.0:
            a = seed - 2.0 * (seed - a)
    if b is None:
        b = seed + 1.0
        while h(b) < h(b - 0.5) and b < seed + 512.0:
            b = seed + 2.0 * (b - seed)

    phi = 0.5 * (3.0 - np.sqrt(5.0))
    x1 = a + phi * (b - a)
    x2 = b - phi * (b - a)
    f1, f2 = h(x1), h(x2)
    for _ in range(48):
        if b - a < 1e-3 * max(1.0, abs(a) + abs(b)):
            break
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = a + phi * (b - a)
            f1 = h(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = b - phi * (b - a)
            f2 = h(x2)
    return 0.5 * (a + b)


def _finalize(raw: np.ndarray, err: np.ndarray):
    values = raw.real
    errors = err.copy()
    warn = np.abs(raw.imag) > _IMAG_WARN_RATIO * np.maximum(
        np.abs(values), 1e-300)
    errors[warn] = np.maximum(errors[warn], np.abs(raw.imag[warn]))
    return values, errors, warn


def _integrate_rows(spec: FoxHSpec, lnz: np.ndarray, c: float,
                    config: ContourConfig, log_scale: float):
    """Shared-contour evaluation of one ln-argument group, chunked."""
    lo, hi = spec.strip
    scale = min(c - lo, hi - c, 0.5)
    values = np.empty(len(lnz))
    errors = np.empty(len(lnz))
    warn = np.zeros(len(lnz), dtype=bool)
    for start in range(0, len(lnz), _BATCH_CHUNK):
        chunk = lnz[start:start + _BATCH_CHUNK]

        def fvals(t, _chunk=chunk):
            s = c + 1j * t
            logk = spec.log_kernel(s) + log_scale
            return np.exp(logk[None, :] - _chunk[:, None] * s[None, :]) \
                / _TWO_PI

        raw, err = integrate_contour(fvals, config, len(chunk), scale,
                                     label=f"H[{spec.m},{spec.n}]")
        v, e, w = _finalize(raw, err)
        values[start:start + len(chunk)] = v
        errors[start:start + len(chunk)] = e
        warn[start:start + len(chunk)] = w
    return values, errors, warn


def fox_h_batch(spec: FoxHSpec, z, config: ContourConfig | None = None,
                log_scale: float = 0.0):
    """Evaluate one H-function at many positive arguments.

    Rows are bucketed by ln(z) and each bucket integrates on its own
    near-saddle contour abscissa (a fixed ``config.c`` disables this), so
    wildly different argument magnitudes stay well conditioned.  Rows whose
    integrand magnitude bound falls below the tolerance are returned as
    0 with the bound as their error.

    ``log_scale`` multiplies the result by exp(log_scale) inside the contour
    integrand, letting callers fold in prefactors whose magnitude (or whose
    compensating H value) would overflow double range.

    Returns ``(values, errors, warn)`` arrays; ``warn`` flags entries whose
    residual imaginary part exceeded the health threshold.
    """
    z = np.asarray(z, dtype=float)
    if z.ndim != 1:
        raise ValueError("z must be one-dimensional")
    if not (np.isfinite(z).all() and (z > 0.0).all()):
        raise ValueError("arguments must be finite and positive")
    config, c_fixed, _ = _resolve_contour(spec, config)
    lnz = np.log(z)

    if config.c is not None:
        groups = [(c_fixed, np.arange(len(z)))]
    else:
        bins = np.floor(lnz).astype(int)
        groups = []
        for b in np.unique(bins):
            idx = np.flatnonzero(bins == b)
            c_b = _saddle_abscissa(spec, float(np.median(lnz[idx])))
            groups.append((c_b, idx))

    values = np.empty(len(z))
    errors = np.empty(len(z))
    warn = np.zeros(len(z), dtype=bool)
    for c, idx in groups:
        log_peak = _real_log_chi(spec, c) - c * lnz[idx] + log_scale
        bound = np.exp(np.minimum(log_peak, 700.0))
        skip = bound <= config.abs_tol / 10.0
        values[idx[skip]] = 0.0
        errors[idx[skip]] = bound[skip]
        live = idx[~skip]
        if len(live):
            v, e, w = _integrate_rows(spec, lnz[live], c, config, log_scale)
            values[live] = v
            errors[live] = e
            warn[live] = w
    return values, errors, warn


def fox_h(spec: FoxHSpec, z: float, config: ContourConfig | None = None,
          log_scale: float = 0.0) -> FoxHResult:
    """Evaluate one H-function at a single positive argument."""
    values, errors, warn = fox_h_batch(spec, np.array([float(z)]), config,
                                       log_scale)
    warnings = ("imaginary_residue",) if warn[0] else ()
    return FoxHResult(float(values[0]), float(errors[0]), warnings)


@dataclass(frozen=True)
class BivariateFoxHSpec:
    """Two-variable H-function of the rate-integral family.

    The kernel factorizes as J(s1, s2) * chi1(s1) * chi2(s2): ``joint``
    holds exactly four (a, A1, A2) tuples coupling both contour variables,
    the first ``n_joint`` = 3 of them as numerator factors
    Gamma(1 - a - A1 s1 - A2 s2) and the last as a denominator factor
    Gamma(a + A1 s1 + A2 s2); ``block1`` and ``block2`` are ordinary
    single-variable kernels.  The contour pair must keep every joint
    gamma argument in the right half-plane.
    """

    joint: tuple
    block1: FoxHSpec
    block2: FoxHSpec
    n_joint: int = 3

    def __post_init__(self):
        joint = []
        for entry in self.joint:
            a, A1, A2 = (float(x) for x in entry)
            if not all(np.isfinite(x) for x in (a, A1, A2)):
                raise ValueError("joint entries must be finite")
            joint.append((a, A1, A2))
        object.__setattr__(self, "joint", tuple(joint))
        if len(self.joint) != 4 or self.n_joint != 3:
            raise ValueError(
                "joint kernel must have exactly 4 entries with the first 3 "
                "in the numerator")

    def log_joint(self, s1: np.ndarray, s2: np.ndarray) -> np.ndarray:
        total = np.zeros(np.broadcast_shapes(s1.shape, s2.shape),
                         dtype=np.complex128)
        for a, A1, A2 in self.joint[: self.n_joint]:
            total += log_gamma_complex(1.0 - a - A1 * s1 - A2 * s2)
        for a, A1, A2 in self.joint[self.n_joint:]:
            total -= log_gamma_complex(a + A1 * s1 + A2 * s2)
        return total

    def _feasible_c1(self, c2: float) -> tuple[float, float]:
        """Interval of c1 keeping all joint gamma arguments positive."""
        lo, hi = self.block1.strip
        for j, (a, A1, A2) in enumerate(self.joint):
            num = j < self.n_joint
            # numerator arg 1 - a - A1 c1 - A2 c2 > margin
            # denominator arg a + A1 c1 + A2 c2 > margin
            if num:
                bound = (1.0 - a - A2 * c2 - _MARGIN)
                if A1 > 0.0:
                    hi = min(hi, bound / A1)
                elif A1 < 0.0:
                    lo = max(lo, bound / A1)
                elif bound < 0.0:
                    return 1.0, 0.0
            else:
                bound = (_MARGIN - a - A2 * c2)
                if A1 > 0.0:
                    lo = max(lo, bound / A1)
                elif A1 < 0.0:
                    hi = min(hi, bound / A1)
                elif bound > 0.0:
                    return 1.0, 0.0
        return lo, hi

    def select_contours(self) -> tuple[float, float]:
        """Deterministic contour pair satisfying all separation constraints."""
        lo2, hi2 = self.block2.strip
        lo2 = max(lo2, hi2 - 4.0) if np.isfinite(hi2) else lo2
        hi2 = min(hi2, lo2 + 4.0)
        for frac in (0.5, 0.25, 0.75, 0.125, 0.875, 0.0625):
            c2 = lo2 + frac * (hi2 - lo2)
            lo1, hi1 = self._feasible_c1(c2)
            if np.isfinite(lo1) and np.isfinite(hi1):
                if hi1 - lo1 > 2.0 * _MARGIN:
                    return 0.5 * (lo1 + hi1), c2
            elif lo1 < hi1:
                c1 = lo1 + 1.0 if np.isfinite(lo1) else \
                    (hi1 - 1.0 if np.isfinite(hi1) else 0.0)
                return c1, c2
        raise PoleSeparationError(
            "no contour pair separates the bivariate pole families")


def fox_h_bivariate(bspec: BivariateFoxHSpec, z1: float, z2: float,
                    config: ContourConfig | None = None,
                    inner_config: ContourConfig | None = None,
                    log_scale: float = 0.0) -> FoxHResult:
    """Evaluate the two-variable H-function at positive arguments.

    The outer contour runs over the second variable; at each outer node
    batch the inner contour integral is evaluated by the same adaptive
    engine, and inner error estimates are propagated into the outer one.
    ``config.c`` / ``inner_config.c`` override the automatic contour pair.
    ``log_scale`` folds a multiplicative exp(log_scale) into the integrand.
    """
    z1, z2 = float(z1), float(z2)
    if not (z1 > 0.0 and z2 > 0.0):
        raise ValueError("arguments must be positive")
    config = config or ContourConfig()
    inner = inner_config or ContourConfig(
        abs_tol=config.abs_tol, rel_tol=config.rel_tol,
        max_subdivisions=config.max_subdivisions)
    c1_auto, c2_auto = bspec.select_contours()
    c1 = inner.c if inner.c is not None else c1_auto
    c2 = config.c if config.c is not None else c2_auto
    lo1, hi1 = bspec.block1.strip
    scale1 = min(max(c1 - lo1, 1e-12), max(hi1 - c1, 1e-12), 0.5)
    lo2, hi2 = bspec.block2.strip
    scale2 = min(max(c2 - lo2, 1e-12), max(hi2 - c2, 1e-12), 0.5)
    lnz1, lnz2 = np.log(z1), np.log(z2)

    def outer_vals(t2):
        s2 = c2 + 1j * t2
        logk2 = bspec.block2.log_kernel(s2)

        def inner_vals(t1, _s2=s2):
            s1 = c1 + 1j * t1
            logk1 = bspec.block1.log_kernel(s1)
            logj = bspec.log_joint(s1[None, :], _s2[:, None])
            return np.exp(logk1[None, :] + logj + log_scale
                          - lnz1 * s1[None, :]) / _TWO_PI

        inner_int, inner_err = integrate_contour(
            inner_vals, inner, len(s2), scale1, label="bivariate inner")
        weight = np.exp(logk2 - lnz2 * s2) / _TWO_PI
        vals = (weight * inner_int)[None, :]
        aux = (np.abs(weight) * inner_err)[None, :]
        return vals, aux

    raw, err = integrate_contour(outer_vals, config, 1, scale2,
                                 label="bivariate outer")
    v, e, w = _finalize(raw, err)
    warnings = ("imaginary_residue",) if w[0] else ()
    return FoxHResult(float(v[0]), float(e[0]), warnings)
