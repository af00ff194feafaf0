"""Principal-branch log-gamma for complex arguments.

The contour integrals in this package evaluate products of many gamma
functions along vertical lines in the complex plane.  Forming those products
directly overflows for modest orders, so everything downstream works with
``log Gamma`` and exponentiates once at the end.  This module provides a
vectorized ``log_gamma_complex`` accurate to ~1e-13 relative error for
|s| <= 1e3 (checked against a 50-digit reference in the test suite).

Algorithm: conjugate into the upper half-plane, reflect arguments with
Re(s) < 1/2 through the principal-branch identity

    log Gamma(s) = log pi - log sin(pi s) - log Gamma(1 - s),

and evaluate the remaining right-half-plane values with the Stirling series
after shifting the argument until |s| is large enough for the Bernoulli tail
to converge below double precision.  ``log sin(pi s)`` is computed on its
principal branch via log(i/2) - i pi s + log(1 - exp(2 pi i s)), which is
valid throughout the closed upper half-plane.
"""

from __future__ import annotations

import numpy as np

__all__ = ["GammaPoleError", "log_gamma_complex"]

_LOG_2PI = 1.8378770664093454836
_LOG_PI = 1.1447298858494001741
# log(i/2) on the principal branch
_LOG_HALF_I = complex(-0.6931471805599453094, 1.5707963267948966192)

# Bernoulli tail coefficients B_{2k} / (2k (2k-1)) of the Stirling series.
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
    854513.0 / 63756.0,
    -236364091.0 / 1506960.0,
)

# Stirling is applied once the shifted argument satisfies |v| >= this.
_STIRLING_RADIUS = 9.0


class GammaPoleError(ValueError):
    """Raised when log-gamma is requested at a non-positive integer."""


def _stirling_shifted(v: np.ndarray) -> np.ndarray:
    """log Gamma on Re(v) >= 0.5, any imaginary part.

    Uses the recurrence log Gamma(v) = log Gamma(v + n) - sum log(v + j)
    to push the argument out to |v| >= _STIRLING_RADIUS; the shift stays in
    the right half-plane, where the principal-branch recurrence holds
    without winding corrections.
    """
    v = v.copy()
    shift = np.zeros_like(v)
    # Re(v) >= 0.5, so at most ceil(_STIRLING_RADIUS) unit steps are needed.
    for _ in range(int(_STIRLING_RADIUS) + 1):
        small = np.abs(v) < _STIRLING_RADIUS
        if not small.any():
            break
        shift[small] -= np.log(v[small])
        v[small] += 1.0

    t = 1.0 / v
    t2 = t * t
    tail = np.full_like(v, _STIRLING[-1])
    for c in _STIRLING[-2::-1]:
        tail = tail * t2 + c
    tail = tail * t
    return (v - 0.5) * np.log(v) - v + 0.5 * _LOG_2PI + tail + shift


def _cexpm1(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """exp(x + iy) - 1 without cancellation for small |x + iy|."""
    ex = np.expm1(x)
    # e^x cos y - 1 = expm1(x) cos y - 2 sin^2(y/2)
    re = ex * np.cos(y) - 2.0 * np.square(np.sin(0.5 * y))
    im = (ex + 1.0) * np.sin(y)
    return re + 1j * im


def _log_sin_pi_upper(w: np.ndarray) -> np.ndarray:
    """Principal-branch log sin(pi w) for Im(w) >= 0.

    The real part of w is reduced to the nearest integer before
    exponentiation (exact, since exp(2 pi i w) has period one) so large or
    near-integer arguments lose no precision to argument reduction.
    """
    frac = w.real - np.round(w.real)
    e1 = _cexpm1(-2.0 * np.pi * w.imag, 2.0 * np.pi * frac)
    return _LOG_HALF_I - 1j * np.pi * w + np.log(-e1)


def log_gamma_complex(s):
    """Principal branch of log Gamma(s) for complex s, elementwise.

    Parameters
    ----------
    s : complex scalar or array_like
        Argument(s).  Non-positive real integers are poles and raise
        :class:`GammaPoleError`.

    Returns
    -------
    complex scalar or ``np.ndarray`` of complex128, matching the input shape.
    """
    arr = np.asarray(s, dtype=np.complex128)
    scalar = arr.ndim == 0
    a = np.atleast_1d(arr)

    on_real_axis = a.imag == 0.0
    at_pole = on_real_axis & (a.real <= 0.0) & (a.real == np.floor(a.real))
    if at_pole.any():
        bad = a[at_pole][0]
        raise GammaPoleError(f"log-gamma pole at {bad.real:g}")

    conj = a.imag < 0.0
    w = np.where(conj, a.conj(), a)

    reflect = w.real < 0.5
    # Guard unused lanes with a harmless value so both branches vectorize.
    v = np.where(reflect, 1.0 - w, w)
    base = _stirling_shifted(v)
    ls = _log_sin_pi_upper(np.where(reflect, w, 0.5))
    out = np.where(reflect, _LOG_PI - ls - base, base)

    out = np.where(conj, out.conj(), out)
    if scalar:
        return complex(out[0])
    return out.reshape(arr.shape)
