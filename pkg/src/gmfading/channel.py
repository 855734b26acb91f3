"""Gauss-Markov fading channel model.

Per-symbol model: y_i = g_i * x_i + z_i, with the gain sequence {g_i} a
stationary first-order Gauss-Markov process whose adjacent-sample
coherence coefficient is ``alpha``.  alpha = 0 is i.i.d. fading,
alpha = 1 is block-constant fading.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class ValidationError(ValueError):
    """Raised when a channel/input specification is inconsistent."""


@dataclass(frozen=True)
class ChannelSpec:
    """Block fading channel parameters.

    Attributes:
        alpha: coherence coefficient between adjacent gain samples, in [0, 1].
        sigma_g2: gain power E|G_i|^2.
        sigma_z2: noise power E|Z_i|^2.
        block_len: block length N.
    """

    alpha: float
    sigma_g2: float = 1.0
    sigma_z2: float = 1.0
    block_len: int = 1

    def __post_init__(self) -> None:
        if not 0.0 <= self.alpha <= 1.0:
            raise ValidationError(f"alpha must be in [0, 1], got {self.alpha}")
        if self.sigma_g2 <= 0.0:
            raise ValidationError(f"sigma_g2 must be > 0, got {self.sigma_g2}")
        if self.sigma_z2 <= 0.0:
            raise ValidationError(f"sigma_z2 must be > 0, got {self.sigma_z2}")
        if int(self.block_len) != self.block_len or self.block_len < 1:
            raise ValidationError(f"block_len must be an integer >= 1, got {self.block_len}")

    @property
    def beta(self) -> float:
        """Noise-to-gain power ratio sigma_z2 / sigma_g2."""
        return self.sigma_z2 / self.sigma_g2


@dataclass(frozen=True)
class IidGaussian:
    """I.i.d. circularly-symmetric complex Gaussian input, E|X|^2 = sigma_x2."""

    sigma_x2: float = 1.0

    def __post_init__(self) -> None:
        if self.sigma_x2 <= 0.0:
            raise ValidationError(f"sigma_x2 must be > 0, got {self.sigma_x2}")

    @property
    def power(self) -> float:
        return self.sigma_x2


@dataclass(frozen=True)
class IidDiscrete:
    """I.i.d. input over a finite constellation.

    ``sigma_x2`` is the declared power budget; the constellation's average
    power must not exceed it.  If omitted it defaults to the achieved power.
    """

    points: tuple[complex, ...]
    probs: tuple[float, ...]
    sigma_x2: float | None = None

    def __post_init__(self) -> None:
        if len(self.points) == 0 or len(self.points) != len(self.probs):
            raise ValidationError("points and probs must be nonempty and equal length")
        p = np.asarray(self.probs, dtype=float)
        if np.any(p < 0.0):
            raise ValidationError("probs must be nonnegative")
        if abs(p.sum() - 1.0) > 1e-12:
            raise ValidationError(f"probs must sum to 1, got {p.sum()!r}")
        if self.sigma_x2 is None:
            object.__setattr__(self, "sigma_x2", self.power)
        elif self.power > self.sigma_x2 * (1.0 + 1e-12):
            raise ValidationError(
                f"constellation power {self.power} exceeds budget {self.sigma_x2}"
            )

    @property
    def power(self) -> float:
        pts = np.asarray(self.points, dtype=complex)
        return float(np.dot(self.probs, np.abs(pts) ** 2))


@dataclass(frozen=True)
class FixedBlock:
    """A deterministic input block (degenerate input distribution)."""

    x: tuple[complex, ...]

    def __post_init__(self) -> None:
        if len(self.x) == 0:
            raise ValidationError("FixedBlock must be nonempty")
        object.__setattr__(self, "x", tuple(complex(v) for v in self.x))

    @property
    def power(self) -> float:
        return float(np.mean(np.abs(np.asarray(self.x)) ** 2))


InputSpec = IidGaussian | IidDiscrete | FixedBlock


def qpsk(sigma_x2: float = 1.0) -> IidDiscrete:
    """Equiprobable QPSK constellation with average power sigma_x2."""
    a = np.sqrt(sigma_x2 / 2.0)
    pts = tuple(complex(a * sr, a * si) for sr in (1, -1) for si in (1, -1))
    return IidDiscrete(points=pts, probs=(0.25,) * 4, sigma_x2=sigma_x2)


def input_power(input_spec: InputSpec) -> float:
    """Average per-symbol power E|X_i|^2 of an input family."""
    return input_spec.power


def snr(spec: ChannelSpec, input_spec: InputSpec) -> float:
    """Average SNR rho = sigma_g2 * E|X|^2 / sigma_z2."""
    return spec.sigma_g2 * input_power(input_spec) / spec.sigma_z2


def sample_cn(rng: np.random.Generator, var: float, size) -> np.ndarray:
    """Draw circularly-symmetric complex Gaussians CN(0, var).

    Real and imaginary parts are independent N(0, var/2).
    """
    scale = np.sqrt(var / 2.0)
    return scale * (rng.standard_normal(size) + 1j * rng.standard_normal(size))


def gains_from_normals(g1: np.ndarray, w: np.ndarray, alpha: float) -> np.ndarray:
    """Build gain paths from pre-drawn CN(0, sigma_g2) innovations.

    ``g1`` has shape (..., ) and seeds the recursion; ``w`` has shape
    (..., N-1) and supplies the innovations.  Sharing (g1, w) across
    different alpha values yields common-random-number gain paths; at
    alpha = 1 the innovation weight sqrt(1 - alpha^2) vanishes exactly,
    so the block degenerates to a constant gain.
    """
    n = w.shape[-1] + 1
    out = np.empty(w.shape[:-1] + (n,), dtype=complex)
    out[..., 0] = g1
    c = np.sqrt(max(0.0, 1.0 - alpha * alpha))
    for i in range(1, n):
        out[..., i] = alpha * out[..., i - 1] + c * w[..., i - 1]
    return out


def sample_gains(spec: ChannelSpec, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Sample gain blocks g of shape (N,) or (size, N).

    G_1 ~ CN(0, sigma_g2); G_i = alpha*G_{i-1} + sqrt(1-alpha^2)*W_i with
    W_i i.i.d. CN(0, sigma_g2).  At alpha = 1 no innovations are drawn and
    the block is exactly constant.
    """
    n = spec.block_len
    shape = (n,) if size is None else (size, n)
    g1 = sample_cn(rng, spec.sigma_g2, shape[:-1])
    if spec.alpha == 1.0 or n == 1:
        return np.broadcast_to(g1[..., None], shape).copy() if n > 1 else np.reshape(g1, shape)
    w = sample_cn(rng, spec.sigma_g2, shape[:-1] + (n - 1,))
    return gains_from_normals(g1, w, spec.alpha)


def correlation_matrix(spec: ChannelSpec) -> np.ndarray:
    """Gain covariance matrix, entry (i, j) = sigma_g2 * alpha^|i-j|."""
    idx = np.arange(spec.block_len)
    return spec.sigma_g2 * spec.alpha ** np.abs(idx[:, None] - idx[None, :])


def unit_correlation(alpha: float, n: int) -> np.ndarray:
    """Unit-power coherence matrix C with C_ij = alpha^|i-j|."""
    idx = np.arange(n)
    return alpha ** np.abs(idx[:, None] - idx[None, :]).astype(float)


def build_A(x: np.ndarray, alpha: float) -> np.ndarray:
    """Hermitian PSD matrix A with A_ij = alpha^|i-j| * x_i * conj(x_j).

    Built as diag(x) C diag(x)^H with C the unit-power coherence matrix,
    which is O(N^2).  Supports batched x of shape (..., N).
    """
    x = np.asarray(x, dtype=complex)
    c = unit_correlation(alpha, x.shape[-1])
    return x[..., :, None] * np.conj(x[..., None, :]) * c


def build_M(x: np.ndarray, spec: ChannelSpec) -> np.ndarray:
    """Conditional output covariance M = sigma_z2*I + sigma_g2*A(x).

    Positive definite for sigma_z2 > 0.  Supports batched x.
    """
    x = np.asarray(x, dtype=complex)
    n = x.shape[-1]
    return spec.sigma_z2 * np.eye(n) + spec.sigma_g2 * build_A(x, spec.alpha)


def sample_input(input_spec: InputSpec, n: int, rng: np.random.Generator,
                 size: int | None = None) -> np.ndarray:
    """Draw input blocks of shape (n,) or (size, n) per the input family."""
    shape = (n,) if size is None else (size, n)
    if isinstance(input_spec, IidGaussian):
        return sample_cn(rng, input_spec.sigma_x2, shape)
    if isinstance(input_spec, IidDiscrete):
        pts = np.asarray(input_spec.points, dtype=complex)
        idx = rng.choice(len(pts), size=shape, p=np.asarray(input_spec.probs, dtype=float))
        return pts[idx]
    if isinstance(input_spec, FixedBlock):
        x = np.asarray(input_spec.x, dtype=complex)
        if len(x) != n:
            raise ValidationError(f"FixedBlock length {len(x)} != block length {n}")
        return np.broadcast_to(x, shape).copy()
    raise TypeError(f"unknown input spec {input_spec!r}")


def simulate_block(x: np.ndarray, spec: ChannelSpec, rng: np.random.Generator
                   ) -> tuple[np.ndarray, np.ndarray]:
    """Pass input blocks through the channel: y = g*x + z.

    Returns (y, g); the realized gains are needed by the conditional
    entropy estimators.  ``x`` may be batched with shape (..., N).
    """
    x = np.asarray(x, dtype=complex)
    if x.shape[-1] != spec.block_len:
        raise ValidationError(f"input block length {x.shape[-1]} != N = {spec.block_len}")
    size = None if x.ndim == 1 else x.shape[0]
    g = sample_gains(spec, rng, size=size)
    z = sample_cn(rng, spec.sigma_z2, x.shape)
    return g * x + z, g
