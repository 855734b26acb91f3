"""Closed-form rates and special functions.

Exponential integral E1, the perfect-CSI Rayleigh rate R_s, AWGN capacity
C0, their gap Delta(rho), and the high-SNR limit of the gap.  All rates
are in bits per symbol.
"""

from __future__ import annotations

import math

# Euler-Mascheroni constant, 20 significant digits.
EULER_GAMMA = 0.57721566490153286061
LOG2_E = math.log2(math.e)

_SERIES_CF_CROSSOVER = 1.0
_MAX_ITER = 500


def _e1_series(x: float) -> float:
    """Small-argument series: E1(x) = -gamma - ln x - sum((-x)^n / (n! n))."""
    total = -EULER_GAMMA - math.log(x)
    term = 1.0
    for n in range(1, _MAX_ITER):
        term *= -x / n
        contrib = -term / n
        total += contrib
        if abs(contrib) < 1e-16 * max(abs(total), 1e-300):
            break
    return total


def _e1_cf_scaled(x: float) -> float:
    """Continued fraction for e^x * E1(x), stable for large x.

    Modified Lentz evaluation of
    e^x E1(x) = 1 / (x + 1 - 1^2/(x + 3 - 2^2/(x + 5 - ...))).
    """
    tiny = 1e-300
    b = x + 1.0
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for n in range(1, _MAX_ITER):
        a = -(n * n)
        b += 2.0
        d = b + a * d
        if abs(d) < tiny:
            d = tiny
        c = b + a / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta_factor = c * d
        h *= delta_factor
        if abs(delta_factor - 1.0) < 1e-16:
            break
    return h


def exp_integral_e1(x: float) -> float:
    """Exponential integral E1(x) = integral_x^inf exp(-u)/u du, x > 0.

    Series branch below the crossover, continued fraction above; both are
    accurate to better than 1e-12 relative over their ranges.
    """
    if x <= 0.0:
        raise ValueError(f"E1 requires x > 0, got {x}")
    if x < _SERIES_CF_CROSSOVER:
        return _e1_series(x)
    return math.exp(-x) * _e1_cf_scaled(x)


def exp_integral_e1_scaled(x: float) -> float:
    """e^x * E1(x), overflow-free for large x."""
    if x <= 0.0:
        raise ValueError(f"E1 requires x > 0, got {x}")
    if x < _SERIES_CF_CROSSOVER:
        return math.exp(x) * _e1_series(x)
    return _e1_cf_scaled(x)


def awgn_capacity(rho: float) -> float:
    """AWGN capacity log2(1 + rho) in bits/symbol."""
    if rho <= 0.0:
        raise ValueError(f"rho must be > 0, got {rho}")
    return math.log2(1.0 + rho)


def rate_csi_gaussian(rho: float) -> float:
    """Rayleigh ergodic rate with perfect receiver CSI, i.i.d. Gaussian input.

    R_s(rho) = log2(e) * e^(1/rho) * E1(1/rho)
             = E[log2(1 + |G|^2 * rho / sigma_g2)] over Rayleigh |G|.
    """
    if rho <= 0.0:
        raise ValueError(f"rho must be > 0, got {rho}")
    return LOG2_E * exp_integral_e1_scaled(1.0 / rho)


def delta(rho: float) -> float:
    """Gap Delta(rho) = log2(1 + rho) - R_s(rho); positive, increasing."""
    return awgn_capacity(rho) - rate_csi_gaussian(rho)


def delta_limit() -> float:
    """High-SNR limit of the gap: gamma * log2(e), about 0.8327 bits."""
    return EULER_GAMMA * LOG2_E
