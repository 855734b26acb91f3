"""Information-rate decomposition of Gauss-Markov Rayleigh fading channels.

The received information rate of a fading channel without channel side
information splits into a user-message part I(X;Y)/N and a channel-
information part I(G;X,Y)/N.  This package computes the structured
determinant behind the channel-information formula three independent
ways, evaluates the closed-form rate bounds, estimates the remaining
quantities by Monte Carlo, and drives reproducible experiment sweeps.
"""

from .analytic import (
    awgn_capacity,
    delta,
    delta_limit,
    exp_integral_e1,
    rate_csi_gaussian,
)
from .channel import (
    ChannelSpec,
    FixedBlock,
    IidDiscrete,
    IidGaussian,
    InputSpec,
    ValidationError,
    build_A,
    build_M,
    correlation_matrix,
    qpsk,
    sample_gains,
    sample_input,
    simulate_block,
    snr,
)
from .determinant import (
    FactorizationError,
    channel_info_integrand,
    det_closed_form,
    det_direct,
    det_recursive,
    log2_det_direct,
)
from .estimators import (
    Estimate,
    EstimatorConfig,
    Quantity,
    estimate_channel_info,
    estimate_cond_entropy_y_given_g,
    estimate_entropy_y,
    estimate_g_info_y,
    estimate_user_info,
    noise_entropy,
    sanity_quadratic_forms,
)
from .experiments import ExperimentConfig, SweepResult, emit_csv, run

__all__ = [
    "ChannelSpec", "InputSpec", "IidGaussian", "IidDiscrete", "FixedBlock",
    "ValidationError", "FactorizationError",
    "sample_gains", "sample_input", "simulate_block",
    "correlation_matrix", "build_A", "build_M", "qpsk", "snr",
    "det_direct", "det_closed_form", "det_recursive", "log2_det_direct",
    "channel_info_integrand",
    "exp_integral_e1", "rate_csi_gaussian", "awgn_capacity", "delta",
    "delta_limit",
    "Estimate", "EstimatorConfig", "Quantity", "noise_entropy",
    "estimate_channel_info", "estimate_entropy_y",
    "estimate_cond_entropy_y_given_g", "estimate_user_info",
    "estimate_g_info_y", "sanity_quadratic_forms",
    "ExperimentConfig", "SweepResult", "run", "emit_csv",
]

__version__ = "0.1.0"
