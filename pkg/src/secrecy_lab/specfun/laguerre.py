"""Gauss-Laguerre quadrature nodes and weights.

Nodes come from the Golub-Welsch eigenvalue problem (the symmetric
tridiagonal Jacobi matrix of the Laguerre recurrence), then each node is
polished with Newton steps on the recurrence-evaluated polynomial.  Weights
use the classical closed form

    w_k = x_k / ((n+1) L_{n+1}(x_k))^2

evaluated in log scale, because the squared first-eigenvector components of
the Golub-Welsch method bottom out near eps^2 and turn the outermost weights
into noise for n beyond about 40.
"""

from __future__ import annotations

import numpy as np

__all__ = ["gauss_laguerre"]

_SCALE = 1e250
_LOG_SCALE = float(np.log(_SCALE))


def _laguerre_eval(n: int, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Newton ratio L_n/L_n' and log|L_{n+1}| at x via the three-term recurrence.

    The recurrence values oscillate with an envelope that grows roughly like
    e^{x/2}, which overflows for the largest nodes of big rules, so both
    current terms are rescaled whenever they grow past _SCALE and the shed
    magnitude is accumulated separately.  The Newton ratio is scale-free.
    """
    prev = np.ones_like(x)           # L_0
    curr = 1.0 - x                   # L_1
    shed = np.zeros_like(x)          # accumulated log of removed scale
    for k in range(1, n + 1):
        prev, curr = curr, ((2.0 * k + 1.0 - x) * curr - k * prev) / (k + 1.0)
        big = np.abs(curr) > _SCALE
        if np.any(big):
            prev[big] /= _SCALE
            curr[big] /= _SCALE
            shed[big] += _LOG_SCALE
    # after the loop: curr = scaled L_{n+1}, prev = scaled L_n
    with np.errstate(divide="ignore"):
        log_next = np.log(np.abs(curr)) + shed
    # x L_n'(x) = n (L_n(x) - L_{n-1}(x)); recover L_{n-1} from the recurrence
    lnm1 = ((2.0 * n + 1.0 - x) * prev - (n + 1.0) * curr) / n
    deriv = n * (prev - lnm1) / x
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = prev / deriv
    ratio[~np.isfinite(ratio)] = 0.0
    return ratio, log_next


def gauss_laguerre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the n-point rule for integral_0^inf e^{-x} f(x) dx.

    Nodes are returned in ascending order; weights are strictly positive
    (floored at the smallest subnormal where they underflow, which happens
    for the outermost nodes once n is around 180).

    Parameters
    ----------
    n : int
        Rule size, 1 <= n <= 256.
    """
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise TypeError("rule size must be an integer")
    if not 1 <= n <= 256:
        raise ValueError("rule size must satisfy 1 <= n <= 256")
    k = np.arange(n, dtype=float)
    jacobi = np.diag(2.0 * k + 1.0) + np.diag(k[1:], 1) + np.diag(k[1:], -1)
    nodes = np.linalg.eigvalsh(jacobi)
    for _ in range(3):
        ratio, _ = _laguerre_eval(n, nodes)
        nodes = nodes - np.clip(ratio, -0.5, 0.5)
    if np.any(np.diff(nodes) <= 0.0) or nodes[0] <= 0.0:
        raise RuntimeError("Laguerre node iteration failed to keep nodes ordered")
    _, log_next = _laguerre_eval(n, nodes)
    log_w = np.log(nodes) - 2.0 * (np.log(n + 1.0) + log_next)
    with np.errstate(over="ignore"):
        weights = np.exp(log_w)
    weights = np.maximum(weights, np.nextafter(0.0, 1.0))
    return nodes, weights
