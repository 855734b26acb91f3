"""Monte Carlo estimators for the block information quantities.

Per-symbol targets, all in bits: I(G;X,Y)/N (channel information),
h(Y)/N, h(Y|G)/N, I(X;Y)/N (user information), and I(G;Y)/N.  Sampling
is chunked over deterministic substreams so results are reproducible and
mergeable; a common-random-numbers mode shares draws across an alpha
grid for variance-free monotonicity comparisons.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import logsumexp

from .analytic import LOG2_E, rate_csi_gaussian
from .channel import (
    ChannelSpec,
    FixedBlock,
    IidDiscrete,
    IidGaussian,
    InputSpec,
    ValidationError,
    gains_from_normals,
    sample_cn,
    sample_input,
    snr,
)
from .determinant import FactorizationError, log2_det_batch

LN2 = math.log(2.0)


class Quantity(Enum):
    CHANNEL_INFO = "channel_info"
    ENTROPY_Y = "entropy_y"
    COND_ENTROPY_Y_GIVEN_G = "cond_entropy_y_given_g"
    USER_INFO = "user_info"
    G_INFO_Y = "g_info_y"
    QUAD_FORM_NOISE = "quad_form_noise"
    QUAD_FORM_WHITENED = "quad_form_whitened"


# substream role ids appended to the seed sequence
_ROLE_OUTER = 0
_ROLE_INNER = 1

_TAG_IDS = {q: i for i, q in enumerate(Quantity)}


@dataclass(frozen=True)
class EstimatorConfig:
    """Sampling budget and seed for the Monte Carlo estimators."""

    outer_samples: int = 200_000
    inner_samples: int = 512
    seed: int = 0
    chunk_size: int = 16_384

    def __post_init__(self) -> None:
        if self.outer_samples < 1 or self.inner_samples < 1 or self.chunk_size < 1:
            raise ValidationError("sample counts and chunk_size must be >= 1")


@dataclass(frozen=True)
class Estimate:
    """A Monte Carlo result in bits/symbol with its standard error."""

    mean: float
    std_error: float
    n_samples: int
    quantity: Quantity

    def combined_se(self, other: "Estimate") -> float:
        return math.hypot(self.std_error, other.std_error)


def _substream(cfg: EstimatorConfig, quantity: Quantity, chunk: int, role: int
               ) -> np.random.Generator:
    """Deterministic generator keyed by (seed, quantity, chunk, role)."""
    return np.random.default_rng([cfg.seed, _TAG_IDS[quantity], chunk, role])


def _chunks(total: int, chunk_size: int):
    start = 0
    idx = 0
    while start < total:
        yield idx, min(chunk_size, total - start)
        start += chunk_size
        idx += 1


class _Accumulator:
    """Streaming mean / standard error over per-sample contributions.

    Sums are taken about the first observed value so that degenerate
    (constant) samples report a standard error of exactly zero.
    """

    def __init__(self) -> None:
        self.n = 0
        self.s = 0.0
        self.s2 = 0.0
        self.shift: float | None = None

    def add(self, values: np.ndarray) -> None:
        if self.shift is None:
            self.shift = float(values.flat[0])
        centered = values - self.shift
        self.n += values.size
        self.s += float(np.sum(centered))
        self.s2 += float(np.sum(centered * centered))

    def estimate(self, quantity: Quantity) -> Estimate:
        mean_c = self.s / self.n
        if self.n > 1:
            var = max(0.0, (self.s2 - self.n * mean_c * mean_c) / (self.n - 1))
            se = math.sqrt(var / self.n)
        else:
            se = 0.0
        return Estimate(mean=mean_c + self.shift, std_error=se,
                        n_samples=self.n, quantity=quantity)


def estimate_channel_info(input_spec: InputSpec, spec: ChannelSpec,
                          cfg: EstimatorConfig) -> Estimate:
    """Estimate I(G;X,Y)/N in bits/symbol.

    Averages log2 det(I + (sigma_g2/sigma_z2) A(x)) / N over input draws.
    A factorization failure aborts the run: it signals numerical
    pathology, not a statistical event.
    """
    n = spec.block_len
    ratio = spec.sigma_g2 / spec.sigma_z2
    acc = _Accumulator()
    for chunk, size in _chunks(cfg.outer_samples, cfg.chunk_size):
        rng = _substream(cfg, Quantity.CHANNEL_INFO, chunk, _ROLE_OUTER)
        x = sample_input(input_spec, n, rng, size=size)
        acc.add(log2_det_batch(x, spec.alpha, ratio) / n)
    return acc.estimate(Quantity.CHANNEL_INFO)


def channel_info_alpha_grid(input_spec: InputSpec, spec: ChannelSpec,
                            alpha_grid: list[float], cfg: EstimatorConfig
                            ) -> tuple[list[Estimate], bool]:
    """Estimate I(G;X,Y)/N on an alpha grid with common random numbers.

    The same input draws are reused at every alpha, so each realization's
    integrand is non-increasing in alpha deterministically.  Returns the
    per-alpha estimates and whether that per-sample monotonicity held
    (up to 1e-12 absolute slack on log2 values).
    """
    n = spec.block_len
    ratio = spec.sigma_g2 / spec.sigma_z2
    accs = [_Accumulator() for _ in alpha_grid]
    monotone = True
    for chunk, size in _chunks(cfg.outer_samples, cfg.chunk_size):
        rng = _substream(cfg, Quantity.CHANNEL_INFO, chunk, _ROLE_OUTER)
        x = sample_input(input_spec, n, rng, size=size)
        prev = None
        for acc, alpha in zip(accs, alpha_grid):
            vals = log2_det_batch(x, alpha, ratio) / n
            acc.add(vals)
            if prev is not None and np.any(vals > prev + 1e-12):
                monotone = False
            prev = vals
    return [acc.estimate(Quantity.CHANNEL_INFO) for acc in accs], monotone


def _mixture_factors(spec: ChannelSpec, atoms: np.ndarray
                     ) -> tuple[np.ndarray, np.ndarray]:
    """Inverse Cholesky factors and natural-log determinants of M(x_k)."""
    n = spec.block_len
    from .channel import build_M

    m = build_M(atoms, spec)
    try:
        chol = np.linalg.cholesky(m)
    except np.linalg.LinAlgError as exc:
        raise FactorizationError("conditional covariance factorization failed") from exc
    diag = np.real(np.diagonal(chol, axis1=-2, axis2=-1))
    logdets = 2.0 * np.sum(np.log(diag), axis=-1)
    linv = np.linalg.inv(chol)
    return linv, logdets


def _log_density_y(y: np.ndarray, linv: np.ndarray, logdets: np.ndarray, n: int
                   ) -> np.ndarray:
    """log of the K-atom mixture density (1/K) sum_k p(y | x_k), natural log.

    y: (B, N) outputs; linv: (K, N, N) inverse Cholesky factors;
    logdets: (K,) natural-log determinants.
    """
    k = linv.shape[0]
    yt = y.T  # (N, B)
    loglik = np.empty((k, y.shape[0]))
    for j in range(k):
        w = linv[j] @ yt
        quad = np.einsum("nb,nb->b", np.conj(w), w).real
        loglik[j] = -n * math.log(math.pi) - logdets[j] - quad
    return logsumexp(loglik, axis=0) - math.log(k)


def estimate_entropy_y(input_spec: InputSpec, spec: ChannelSpec,
                       cfg: EstimatorConfig) -> Estimate:
    """Estimate h(Y)/N in bits/symbol by a nested mixture estimator.

    Outer draws y_m from the output marginal; inner draws x_k give the
    K-component approximation of p(y) = E_x p(y|x), with each conditional
    evaluated through a Hermitian factorization and combined by
    log-sum-exp.  The plug-in estimator is biased low by O(1/K); see
    entropy_convergence_check for the K-doubling diagnostic.
    """
    n = spec.block_len
    acc = _Accumulator()
    for chunk, size in _chunks(cfg.outer_samples, cfg.chunk_size):
        outer = _substream(cfg, Quantity.ENTROPY_Y, chunk, _ROLE_OUTER)
        inner = _substream(cfg, Quantity.ENTROPY_Y, chunk, _ROLE_INNER)
        x = sample_input(input_spec, n, outer, size=size)
        g1 = sample_cn(outer, spec.sigma_g2, (size,))
        w = sample_cn(outer, spec.sigma_g2, (size, n - 1)) if n > 1 else np.empty((size, 0))
        z = sample_cn(outer, spec.sigma_z2, (size, n))
        y = gains_from_normals(g1, w, spec.alpha) * x + z
        atoms = sample_input(input_spec, n, inner, size=cfg.inner_samples)
        linv, logdets = _mixture_factors(spec, atoms)
        logp = _log_density_y(y, linv, logdets, n)
        acc.add(-logp / (n * LN2))
    return acc.estimate(Quantity.ENTROPY_Y)


def entropy_convergence_check(input_spec: InputSpec, spec: ChannelSpec,
                              cfg: EstimatorConfig) -> tuple[Estimate, bool]:
    """K-doubling diagnostic for the nested h(Y)/N estimator.

    Runs the estimator at K and 2K inner samples; the run is flagged
    converged when the two agree within 3 combined standard errors.
    Returns the 2K estimate and the flag.
    """
    est_k = estimate_entropy_y(input_spec, spec, cfg)
    cfg2 = EstimatorConfig(outer_samples=cfg.outer_samples,
                           inner_samples=2 * cfg.inner_samples,
                           seed=cfg.seed, chunk_size=cfg.chunk_size)
    est_2k = estimate_entropy_y(input_spec, spec, cfg2)
    converged = abs(est_2k.mean - est_k.mean) <= 3.0 * est_k.combined_se(est_2k)
    return est_2k, converged


def noise_entropy(spec: ChannelSpec) -> float:
    """Per-symbol noise entropy h(Z)/N = log2(pi*e*sigma_z2) bits."""
    return math.log2(math.pi * math.e * spec.sigma_z2)


def estimate_cond_entropy_y_given_g(input_spec: InputSpec, spec: ChannelSpec,
                                    cfg: EstimatorConfig) -> Estimate:
    """Estimate h(Y|G)/N = h(Y_1|G_1) in bits/symbol (i.i.d. inputs only).

    For i.i.d. Gaussian input the value is closed form,
    log2(pi*e*sigma_z2) + R_s(rho), and no sampling is done.  For a
    discrete constellation the conditional mixture over constellation
    points is exact, so a scalar Monte Carlo over (g, y) suffices.
    """
    if isinstance(input_spec, FixedBlock):
        raise ValidationError("h(Y|G) per-symbol reduction requires an i.i.d. input family")
    if isinstance(input_spec, IidGaussian):
        value = noise_entropy(spec) + rate_csi_gaussian(snr(spec, input_spec))
        return Estimate(mean=value, std_error=0.0, n_samples=0,
                        quantity=Quantity.COND_ENTROPY_Y_GIVEN_G)
    pts = np.asarray(input_spec.points, dtype=complex)
    probs = np.asarray(input_spec.probs, dtype=float)
    logprobs = np.log(np.where(probs > 0.0, probs, 1e-300))
    acc = _Accumulator()
    for chunk, size in _chunks(cfg.outer_samples, cfg.chunk_size):
        rng = _substream(cfg, Quantity.COND_ENTROPY_Y_GIVEN_G, chunk, _ROLE_OUTER)
        g = sample_cn(rng, spec.sigma_g2, (size,))
        idx = rng.choice(len(pts), size=size, p=probs)
        z = sample_cn(rng, spec.sigma_z2, (size,))
        y = g * pts[idx] + z
        # log sum_k p_k CN(y; g*c_k, sigma_z2)
        resid = np.abs(y[:, None] - g[:, None] * pts[None, :]) ** 2
        loglik = logprobs[None, :] - math.log(math.pi * spec.sigma_z2) - resid / spec.sigma_z2
        logp = logsumexp(loglik, axis=1)
        acc.add(-logp / LN2)
    return acc.estimate(Quantity.COND_ENTROPY_Y_GIVEN_G)


def estimate_user_info(input_spec: InputSpec, spec: ChannelSpec,
                       cfg: EstimatorConfig) -> Estimate:
    """Estimate I(X;Y)/N = h(Y)/N - h(Z)/N - I(G;X,Y)/N in bits/symbol.

    The two constituent estimators run on disjoint substreams, so their
    standard errors combine in quadrature.
    """
    ent = estimate_entropy_y(input_spec, spec, cfg)
    cinfo = estimate_channel_info(input_spec, spec, cfg)
    mean = ent.mean - noise_entropy(spec) - cinfo.mean
    return Estimate(mean=mean, std_error=ent.combined_se(cinfo),
                    n_samples=ent.n_samples, quantity=Quantity.USER_INFO)


def estimate_g_info_y(input_spec: InputSpec, spec: ChannelSpec,
                      cfg: EstimatorConfig) -> Estimate:
    """Estimate I(G;Y)/N = h(Y)/N - h(Y|G)/N in bits/symbol."""
    ent = estimate_entropy_y(input_spec, spec, cfg)
    cond = estimate_cond_entropy_y_given_g(input_spec, spec, cfg)
    return Estimate(mean=ent.mean - cond.mean, std_error=ent.combined_se(cond),
                    n_samples=ent.n_samples, quantity=Quantity.G_INFO_Y)


def sanity_quadratic_forms(input_spec: InputSpec, spec: ChannelSpec,
                           cfg: EstimatorConfig) -> tuple[Estimate, Estimate]:
    """Quadratic-form sanity statistics, both targeting 1.0 per symbol.

    First: |y - g*x|^2 / (N sigma_z2), the whitened residual power.
    Second: y^H M(x)^{-1} y / N with M the conditional output covariance.
    """
    n = spec.block_len
    acc_noise = _Accumulator()
    acc_whitened = _Accumulator()
    for chunk, size in _chunks(cfg.outer_samples, cfg.chunk_size):
        rng = _substream(cfg, Quantity.QUAD_FORM_NOISE, chunk, _ROLE_OUTER)
        x = sample_input(input_spec, n, rng, size=size)
        g1 = sample_cn(rng, spec.sigma_g2, (size,))
        w = sample_cn(rng, spec.sigma_g2, (size, n - 1)) if n > 1 else np.empty((size, 0))
        z = sample_cn(rng, spec.sigma_z2, (size, n))
        g = gains_from_normals(g1, w, spec.alpha)
        y = g * x + z
        acc_noise.add(np.sum(np.abs(y - g * x) ** 2, axis=-1) / (n * spec.sigma_z2))

        from .channel import build_M

        try:
            chol = np.linalg.cholesky(build_M(x, spec))
        except np.linalg.LinAlgError as exc:
            raise FactorizationError("quadratic-form factorization failed") from exc
        sol = np.linalg.solve(chol, y[:, :, None])
        acc_whitened.add(np.sum(np.abs(sol[:, :, 0]) ** 2, axis=-1) / n)
    return (acc_noise.estimate(Quantity.QUAD_FORM_NOISE),
            acc_whitened.estimate(Quantity.QUAD_FORM_WHITENED))


def user_info_alpha_grid(input_spec: InputSpec, spec: ChannelSpec,
                         alpha_grid: list[float], cfg: EstimatorConfig,
                         crn: bool = True
                         ) -> dict[str, list[Estimate]]:
    """Estimate h(Y)/N, I(G;X,Y)/N and I(X;Y)/N across an alpha grid.

    With ``crn`` the outer draws (x, gain innovations, noise) and the
    inner mixture atoms are shared across alpha, so grid-point estimates
    are positively correlated and alpha-differences are low-variance.
    """
    n = spec.block_len
    ratio = spec.sigma_g2 / spec.sigma_z2
    ent_accs = [_Accumulator() for _ in alpha_grid]
    info_accs = [_Accumulator() for _ in alpha_grid]
    for chunk, size in _chunks(cfg.outer_samples, cfg.chunk_size):
        for ai, alpha in enumerate(alpha_grid):
            stream_key = 0 if crn else ai
            outer = _substream(cfg, Quantity.ENTROPY_Y, chunk, _ROLE_OUTER + 2 * stream_key)
            inner = _substream(cfg, Quantity.ENTROPY_Y, chunk, _ROLE_INNER + 2 * stream_key)
            x = sample_input(input_spec, n, outer, size=size)
            g1 = sample_cn(outer, spec.sigma_g2, (size,))
            w = sample_cn(outer, spec.sigma_g2, (size, n - 1)) if n > 1 else np.empty((size, 0))
            z = sample_cn(outer, spec.sigma_z2, (size, n))
            y = gains_from_normals(g1, w, alpha) * x + z
            atoms = sample_input(input_spec, n, inner, size=cfg.inner_samples)
            aspec = ChannelSpec(alpha=alpha, sigma_g2=spec.sigma_g2,
                                sigma_z2=spec.sigma_z2, block_len=n)
            linv, logdets = _mixture_factors(aspec, atoms)
            ent_accs[ai].add(-_log_density_y(y, linv, logdets, n) / (n * LN2))
            info_accs[ai].add(log2_det_batch(x, alpha, ratio) / n)
    hz = noise_entropy(spec)
    ent = [a.estimate(Quantity.ENTROPY_Y) for a in ent_accs]
    cinfo = [a.estimate(Quantity.CHANNEL_INFO) for a in info_accs]
    user = [Estimate(mean=e.mean - hz - c.mean, std_error=e.combined_se(c),
                     n_samples=e.n_samples, quantity=Quantity.USER_INFO)
            for e, c in zip(ent, cinfo)]
    return {"entropy_y": ent, "channel_info": cinfo, "user_info": user}
