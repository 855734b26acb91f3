"""Independent oracles shared by the test modules.

Everything here is deliberately computed by a different route than the
library under test: adaptive quadrature for special functions and for
the N = 1 output-entropy density, plain Monte Carlo for the Rayleigh
rate.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import quad

LN2 = math.log(2.0)


def e1_quadrature(x: float) -> float:
    """E1(x) by adaptive quadrature of exp(-x) * int_0^inf e^-t/(x+t) dt.

    The substitution keeps the integrand O(1), so the result carries
    relative (not absolute) accuracy even where E1 underflows toward 0.
    """
    val, _ = quad(lambda t: math.exp(-t) / (x + t), 0.0, np.inf,
                  epsabs=0.0, epsrel=1e-12, limit=400)
    return math.exp(-x) * val


def rayleigh_rate_mc(rho: float, n_draws: int, seed: int) -> tuple[float, float]:
    """Monte Carlo E[log2(1 + |G|^2 rho)] over Rayleigh |G| with unit power."""
    rng = np.random.default_rng(seed)
    t = rng.exponential(1.0, size=n_draws)  # |G|^2 for CN(0, 1)
    vals = np.log2(1.0 + rho * t)
    return float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(n_draws))


def _radial_entropy(p_of_s, upper: float = np.inf) -> float:
    """Differential entropy in bits of a radial density p(|y|^2) on C."""
    def integrand(s: float) -> float:
        ps = p_of_s(s)
        return ps * math.log(ps) if ps > 0.0 else 0.0

    val, _ = quad(integrand, 0.0, upper, epsabs=1e-12, epsrel=1e-9, limit=400)
    return -math.pi * val / LN2


def entropy_y_scalar_gaussian(sigma_x2: float, sigma_g2: float,
                              sigma_z2: float) -> float:
    """Exact h(Y) for N = 1 with i.i.d. Gaussian input, by nested quadrature.

    Y is a scale mixture of complex Gaussians over t = |x|^2 ~ Exp(sigma_x2).
    """
    def p(s: float) -> float:
        def inner(t: float) -> float:
            v = sigma_z2 + sigma_g2 * t
            return (math.exp(-t / sigma_x2) / sigma_x2
                    * math.exp(-s / v) / (math.pi * v))

        val, _ = quad(inner, 0.0, np.inf, epsabs=1e-14, epsrel=1e-10, limit=200)
        return val

    return _radial_entropy(p)


def entropy_y_scalar_discrete(points, probs, sigma_g2: float,
                              sigma_z2: float) -> float:
    """Exact h(Y) for N = 1 with a discrete input, by quadrature.

    Conditioned on X = c, Y ~ CN(0, sigma_z2 + sigma_g2 |c|^2), so the
    marginal is a finite radial mixture.
    """
    vs = [sigma_z2 + sigma_g2 * abs(c) ** 2 for c in points]

    def p(s: float) -> float:
        return sum(pk * math.exp(-s / v) / (math.pi * v)
                   for pk, v in zip(probs, vs))

    return _radial_entropy(p)
