"""Determinant of beta*I + A for the coherence-structured matrix A.

A_ij = alpha^|i-j| * x_i * conj(x_j), beta = sigma_z2 / sigma_g2.  The
determinant D_N is evaluated three independent ways: a direct Hermitian
factorization, a combinatorial closed form over index subsets, and a
recursion that strips trailing zero symbols.  log2(D_N) minus N*log2(beta)
is the per-block channel-information integrand.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

from .channel import ChannelSpec, build_A, unit_correlation

CLOSED_FORM_MAX_N = 20


class FactorizationError(RuntimeError):
    """Hermitian factorization hit a nonpositive pivot (numerical pathology)."""


def _check_inputs(x: np.ndarray, alpha: float, beta: float) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    if x.ndim != 1 or x.size < 1:
        raise ValueError("x must be a nonempty 1-D complex vector")
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must be in [0, 1], got {alpha}")
    if beta <= 0.0:
        raise ValueError(f"beta must be > 0, got {beta}")
    return x


def log2_det_direct(x: np.ndarray, alpha: float, beta: float) -> float:
    """log2 det(beta*I + A) via Cholesky factorization."""
    x = _check_inputs(x, alpha, beta)
    t = beta * np.eye(x.size) + build_A(x, alpha)
    try:
        chol = np.linalg.cholesky(t)
    except np.linalg.LinAlgError as exc:
        raise FactorizationError(f"Cholesky failed for beta={beta}, alpha={alpha}") from exc
    return float(2.0 * np.sum(np.log2(np.real(np.diagonal(chol)))))


def det_direct(x: np.ndarray, alpha: float, beta: float) -> float:
    """det(beta*I + A) via a stable Hermitian factorization."""
    return float(2.0 ** log2_det_direct(x, alpha, beta))


def det_closed_form(x: np.ndarray, alpha: float, beta: float) -> float:
    """det(beta*I + A) by explicit summation over all index subsets.

    Each ascending subset (s_1 < ... < s_i) contributes
    beta^(N-i) * prod_k (1 - alpha^(2*(s_{k+1}-s_k))) * prod_k |x_{s_k}|^2,
    with empty products equal to 1.  Exponential in N, so capped at
    N <= CLOSED_FORM_MAX_N; use det_direct beyond that.
    """
    x = _check_inputs(x, alpha, beta)
    n = x.size
    if n > CLOSED_FORM_MAX_N:
        raise ValueError(
            f"closed form enumerates 2^N subsets; N={n} exceeds cap "
            f"{CLOSED_FORM_MAX_N} (use det_direct)"
        )
    w = np.abs(x) ** 2
    a2 = alpha * alpha
    total = beta ** n  # empty subset
    for i in range(1, n + 1):
        bpow = beta ** (n - i)
        for subset in combinations(range(n), i):
            term = 1.0
            for k in range(i - 1):
                term *= 1.0 - a2 ** (subset[k + 1] - subset[k])
            for s in subset:
                term *= w[s]
            total += bpow * term
    return float(total)


def _det_two_endpoints(w1: float, wn: float, n: int, alpha: float, beta: float) -> float:
    # All symbols between the first and last are zero: only the subsets
    # {}, {1}, {N}, {1, N} contribute.
    return (
        beta ** n
        + beta ** (n - 1) * (w1 + wn)
        + beta ** (n - 2) * (1.0 - alpha ** (2 * (n - 1))) * w1 * wn
    )


def det_recursive(x: np.ndarray, alpha: float, beta: float) -> float:
    """det(beta*I + A) by the trailing-zero-run recursion.

    Zero symbols are eliminated structurally (a zero at the tail gives
    D_N = beta * D_{N-1}); with k-1 adjacent zeros between the last symbol
    and the previous nonzero pivot x_{N-k},

        D_N = beta^k D_{N-k} + (1-alpha^(2k)) beta^(k-1) |x_N|^2 D_{N-k}
              + (alpha^(2k) |x_N|^2 / |x_{N-k}|^2)
                * (beta^k D_{N-k} - beta^(k+1) D_{N-k-1}).

    Blocks too short for the recursion fall back to the explicit base
    cases and the two-endpoint formula.
    """
    x = _check_inputs(x, alpha, beta)
    w = np.abs(x) ** 2
    a2 = alpha * alpha
    memo: dict[int, float] = {}

    def d(n: int) -> float:
        # Determinant of the leading n-by-n principal block.
        if n in memo:
            return memo[n]
        if n == 0:
            val = 1.0
        elif n == 1:
            val = beta + w[0]
        elif n == 2:
            val = beta * beta + beta * (w[0] + w[1]) + (1.0 - a2) * w[0] * w[1]
        elif w[n - 1] == 0.0:
            val = beta * d(n - 1)
        else:
            # last symbol nonzero; find the previous nonzero pivot
            pivot = -1
            for j in range(n - 2, -1, -1):
                if w[j] != 0.0:
                    pivot = j
                    break
            if pivot < 0:
                # exactly one nonzero symbol: alpha plays no role
                val = beta ** (n - 1) * (beta + w[n - 1])
            elif pivot == 0:
                val = _det_two_endpoints(w[0], w[n - 1], n, alpha, beta)
            else:
                k = (n - 1) - pivot
                dnk = d(n - k)
                dnk1 = d(n - k - 1)
                bk = beta ** k
                val = (
                    bk * dnk
                    + (1.0 - a2 ** k) * beta ** (k - 1) * w[n - 1] * dnk
                    + (a2 ** k * w[n - 1] / w[pivot]) * (bk * dnk - beta * bk * dnk1)
                )
        memo[n] = val
        return val

    return float(d(x.size))


def log2_det_batch(x: np.ndarray, alpha: float, ratio: float) -> np.ndarray:
    """Batched log2 det(I + ratio * A(x_m)) for x of shape (M, N).

    ``ratio`` is sigma_g2 / sigma_z2.  Vectorized over the batch via a
    stacked Cholesky factorization.
    """
    x = np.asarray(x, dtype=complex)
    if x.ndim == 1:
        x = x[None, :]
    n = x.shape[-1]
    c = unit_correlation(alpha, n)
    t = np.eye(n) + ratio * (x[:, :, None] * np.conj(x[:, None, :]) * c)
    try:
        chol = np.linalg.cholesky(t)
    except np.linalg.LinAlgError as exc:
        raise FactorizationError("batched Cholesky failed") from exc
    diag = np.real(np.diagonal(chol, axis1=-2, axis2=-1))
    return 2.0 * np.sum(np.log2(diag), axis=-1)


def channel_info_integrand(x: np.ndarray, spec: ChannelSpec) -> float:
    """Per-block channel information log2 det(I + (sigma_g2/sigma_z2) A(x)).

    Equals log2 D_N - N*log2(beta) with beta = sigma_z2/sigma_g2; always
    nonnegative since A is PSD.
    """
    x = np.asarray(x, dtype=complex)
    return float(log2_det_batch(x, spec.alpha, spec.sigma_g2 / spec.sigma_z2)[0])
