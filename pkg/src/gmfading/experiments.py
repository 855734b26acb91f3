"""Config-driven experiment harness.

Each experiment targets one of the library's verifiable claims: the
three-way determinant cross-check, alpha/SNR sweeps of the information
quantities, the monotonicity-conjecture evidence table, the high-SNR gap
limit, the alpha = 0 input/gain symmetry, and the quadratic-form sanity
identities.  Results are tables of (alpha, rho, N, quantity) rows
emitted as CSV and optionally JSON.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import analytic
from .channel import (
    ChannelSpec,
    FixedBlock,
    IidDiscrete,
    IidGaussian,
    InputSpec,
    ValidationError,
    input_power,
    qpsk,
)
from .determinant import det_closed_form, det_recursive, log2_det_direct
from .estimators import (
    Estimate,
    EstimatorConfig,
    Quantity,
    estimate_cond_entropy_y_given_g,
    estimate_g_info_y,
    estimate_user_info,
    noise_entropy,
    sanity_quadratic_forms,
    user_info_alpha_grid,
)

EXPERIMENTS = (
    "det-verify",
    "sweep-alpha",
    "sweep-snr",
    "conjecture",
    "delta-limit",
    "theorem4",
    "sanity",
)

CSV_HEADER = ["alpha", "rho", "N", "quantity", "mean", "std_error", "n_samples", "converged"]

DEFAULT_ALPHA_GRID = tuple(round(0.1 * i, 1) for i in range(11))
DEFAULT_RHO_GRID = (1.0, 10.0, 100.0)


@dataclass(frozen=True)
class ResultRow:
    alpha: float
    rho: float
    n: int
    quantity: str
    mean: float
    std_error: float
    n_samples: int
    converged: bool


@dataclass
class SweepResult:
    rows: list[ResultRow] = field(default_factory=list)
    verdicts: dict[str, str] = field(default_factory=dict)

    def add(self, alpha: float, rho: float, n: int, quantity: str, mean: float,
            std_error: float = 0.0, n_samples: int = 0, converged: bool = True) -> None:
        self.rows.append(ResultRow(alpha, rho, n, quantity, mean,
                                   std_error, n_samples, converged))

    def add_estimate(self, alpha: float, rho: float, n: int, e: Estimate,
                     quantity: str | None = None, converged: bool = True) -> None:
        self.add(alpha, rho, n, quantity or e.quantity.value,
                 e.mean, e.std_error, e.n_samples, converged)


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    channel: ChannelSpec
    input: InputSpec
    alpha_grid: tuple[float, ...] = DEFAULT_ALPHA_GRID
    rho_grid: tuple[float, ...] = DEFAULT_RHO_GRID
    estimator: EstimatorConfig = EstimatorConfig()
    output_path: str | None = None
    common_random_numbers: bool = True
    convergence_check: bool = True
    det_trials: int = 1000

    def __post_init__(self) -> None:
        if self.experiment not in EXPERIMENTS:
            raise ValidationError(f"unknown experiment {self.experiment!r}")
        for name, grid, lo_ok in (("alpha_grid", self.alpha_grid, True),
                                  ("rho_grid", self.rho_grid, False)):
            if len(grid) == 0:
                raise ValidationError(f"{name} must be nonempty")
            if list(grid) != sorted(grid):
                raise ValidationError(f"{name} must be sorted ascending")
        if any(not 0.0 <= a <= 1.0 for a in self.alpha_grid):
            raise ValidationError("alpha_grid values must lie in [0, 1]")
        if any(r <= 0.0 for r in self.rho_grid):
            raise ValidationError("rho_grid values must be > 0")
        if self.det_trials < 1:
            raise ValidationError("det_trials must be >= 1")


def channel_at(template: ChannelSpec, input_spec: InputSpec,
               alpha: float, rho: float) -> ChannelSpec:
    """Channel with the given alpha whose average SNR equals rho.

    Keeps sigma_g2 and the input power, and sets the noise floor to
    sigma_z2 = sigma_g2 * E|X|^2 / rho.
    """
    sigma_z2 = template.sigma_g2 * input_power(input_spec) / rho
    return ChannelSpec(alpha=alpha, sigma_g2=template.sigma_g2,
                       sigma_z2=sigma_z2, block_len=template.block_len)


def _rate_bounds(input_spec: InputSpec, spec: ChannelSpec, rho: float,
                 cfg: EstimatorConfig) -> tuple[float, float, float]:
    """Perfect-CSI rate R_s, its standard error, and the gap C0 - R_s."""
    if isinstance(input_spec, IidGaussian):
        rs = analytic.rate_csi_gaussian(rho)
        rs_se = 0.0
    else:
        cond = estimate_cond_entropy_y_given_g(input_spec, spec, cfg)
        rs = cond.mean - noise_entropy(spec)
        rs_se = cond.std_error
    gap = analytic.awgn_capacity(rho) - rs
    return rs, rs_se, gap


def _sweep_alpha_rows(config: ExperimentConfig, input_spec: InputSpec,
                      result: SweepResult, label: str = "") -> None:
    suffix = f":{label}" if label else ""
    n = config.channel.block_len
    for rho in config.rho_grid:
        spec = channel_at(config.channel, input_spec, config.channel.alpha, rho)
        grids = user_info_alpha_grid(input_spec, spec, list(config.alpha_grid),
                                     config.estimator,
                                     crn=config.common_random_numbers)
        if config.convergence_check:
            cfg2 = replace(config.estimator,
                           inner_samples=2 * config.estimator.inner_samples)
            grids2 = user_info_alpha_grid(input_spec, spec, list(config.alpha_grid),
                                          cfg2, crn=config.common_random_numbers)
            converged = [
                abs(a.mean - b.mean) <= 3.0 * a.combined_se(b)
                for a, b in zip(grids["entropy_y"], grids2["entropy_y"])
            ]
            grids = grids2
        else:
            converged = [True] * len(config.alpha_grid)
        # the per-symbol CSI rate (and hence the sandwich bounds) only
        # exists for i.i.d. input families
        bounds = None
        if not isinstance(input_spec, FixedBlock):
            bounds = _rate_bounds(input_spec, spec, rho, config.estimator)
        for ai, alpha in enumerate(config.alpha_grid):
            ci = grids["channel_info"][ai]
            ui = grids["user_info"][ai]
            result.add_estimate(alpha, rho, n, ci, quantity=f"channel_info{suffix}")
            result.add_estimate(alpha, rho, n, ui, quantity=f"user_info{suffix}",
                                converged=converged[ai])
            if bounds is not None:
                rs, rs_se, gap = bounds
                rl = rs - ci.mean
                rl_se = math.hypot(rs_se, ci.std_error)
                result.add(alpha, rho, n, f"rate_lower{suffix}", rl, rl_se,
                           ci.n_samples)
                result.add(alpha, rho, n, f"rate_upper{suffix}", rl + gap, rl_se,
                           ci.n_samples)


def _monotonicity_verdict(estimates: list[Estimate]) -> str:
    """Three-valued verdict on a user-information alpha profile."""
    means = [e.mean for e in estimates]
    for a, b in zip(estimates, estimates[1:]):
        if b.mean < a.mean - 3.0 * a.combined_se(b):
            return "violation candidate"
    if all(b >= a for a, b in zip(means, means[1:])):
        return "consistent-monotone"
    return "inconclusive"


def _run_det_verify(config: ExperimentConfig, result: SweepResult) -> None:
    rng = np.random.default_rng(config.estimator.seed)
    max_n = min(config.channel.block_len, 12)
    worst = {"det_closed_rel_err": 0.0, "det_recursive_rel_err": 0.0}
    for _ in range(config.det_trials):
        n = int(rng.integers(1, max_n + 1))
        x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        x = np.where(rng.random(n) < 0.3, 0.0, x)
        alpha = float(rng.choice([0.0, 1.0, rng.random()]))
        beta = float(10.0 ** rng.uniform(-2.0, 2.0))
        ref = log2_det_direct(x, alpha, beta)
        for key, fn in (("det_closed_rel_err", det_closed_form),
                        ("det_recursive_rel_err", det_recursive)):
            err = abs(math.log2(fn(x, alpha, beta)) - ref) / max(abs(ref), 1e-300)
            worst[key] = max(worst[key], err)
    for key, err in worst.items():
        result.add(0.0, 0.0, max_n, key, err, 0.0, config.det_trials,
                   converged=err <= 1e-10)


def _run_delta_limit(config: ExperimentConfig, result: SweepResult) -> None:
    limit = analytic.delta_limit()
    for rho in config.rho_grid:
        result.add(0.0, rho, 1, "delta", analytic.delta(rho))
    result.add(0.0, config.rho_grid[-1], 1, "delta_limit", limit)


def _run_theorem4(config: ExperimentConfig, result: SweepResult) -> None:
    n = config.channel.block_len
    for rho in config.rho_grid:
        spec = channel_at(config.channel, config.input, 0.0, rho)
        ui = estimate_user_info(config.input, spec, config.estimator)
        gi = estimate_g_info_y(config.input, spec, config.estimator)
        match = abs(ui.mean - gi.mean) <= 3.0 * ui.combined_se(gi)
        result.add_estimate(0.0, rho, n, ui, converged=match)
        result.add_estimate(0.0, rho, n, gi, converged=match)


def _run_sanity(config: ExperimentConfig, result: SweepResult) -> None:
    n = config.channel.block_len
    for rho in config.rho_grid:
        spec = channel_at(config.channel, config.input, config.channel.alpha, rho)
        for e in sanity_quadratic_forms(config.input, spec, config.estimator):
            ok = abs(e.mean - 1.0) <= 3.0 * e.std_error
            result.add_estimate(config.channel.alpha, rho, n, e, converged=ok)


def _run_sweep_snr(config: ExperimentConfig, result: SweepResult) -> None:
    alpha = config.channel.alpha
    snr_config = replace(config, alpha_grid=(alpha,))
    _sweep_alpha_rows(snr_config, config.input, result)


def _conjecture_families(config: ExperimentConfig) -> dict[str, InputSpec]:
    power = input_power(config.input)
    c = math.sqrt(2.0 * power)
    return {
        "gaussian": IidGaussian(power),
        "qpsk": qpsk(power),
        "mass_at_zero": IidDiscrete(points=(0.0, c), probs=(0.5, 0.5)),
    }


def _run_conjecture(config: ExperimentConfig, result: SweepResult) -> None:
    for label, family in _conjecture_families(config).items():
        partial = SweepResult()
        _sweep_alpha_rows(config, family, partial, label=label)
        result.rows.extend(partial.rows)
        for rho in config.rho_grid:
            profile = [
                Estimate(r.mean, r.std_error, r.n_samples, Quantity.USER_INFO)
                for r in partial.rows
                if r.quantity == f"user_info:{label}" and r.rho == rho
            ]
            result.verdicts[f"{label}@rho={rho:g}"] = _monotonicity_verdict(profile)


def run(config: ExperimentConfig) -> SweepResult:
    """Run one experiment and return its result table.

    Reruns with the same configuration (seed included) are bit-identical.
    Writes the CSV as a side effect when ``output_path`` is set.
    """
    result = SweepResult()
    if config.experiment == "det-verify":
        _run_det_verify(config, result)
    elif config.experiment == "sweep-alpha":
        _sweep_alpha_rows(config, config.input, result)
    elif config.experiment == "sweep-snr":
        _run_sweep_snr(config, result)
    elif config.experiment == "conjecture":
        _run_conjecture(config, result)
    elif config.experiment == "delta-limit":
        _run_delta_limit(config, result)
    elif config.experiment == "theorem4":
        _run_theorem4(config, result)
    elif config.experiment == "sanity":
        _run_sanity(config, result)
    if config.output_path:
        emit_csv(result, config.output_path)
    return result


def emit_csv(result: SweepResult, path: str) -> None:
    """Write the result rows as CSV: UTF-8, LF line endings.

    Floats use the shortest round-trip decimal representation.
    """
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for r in result.rows:
            writer.writerow([repr(float(r.alpha)), repr(float(r.rho)), r.n,
                             r.quantity, repr(float(r.mean)),
                             repr(float(r.std_error)), r.n_samples,
                             str(r.converged)])


def emit_json(result: SweepResult, path: str) -> None:
    """Mirror the rows (and any verdicts) as a JSON document."""
    payload = {
        "rows": [
            {"alpha": r.alpha, "rho": r.rho, "N": r.n, "quantity": r.quantity,
             "mean": r.mean, "std_error": r.std_error,
             "n_samples": r.n_samples, "converged": r.converged}
            for r in result.rows
        ],
    }
    if result.verdicts:
        payload["verdicts"] = result.verdicts
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def parse_csv(path: str) -> list[ResultRow]:
    """Read back a CSV written by emit_csv."""
    rows = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        for rec in reader:
            rows.append(ResultRow(
                alpha=float(rec["alpha"]), rho=float(rec["rho"]),
                n=int(rec["N"]), quantity=rec["quantity"],
                mean=float(rec["mean"]), std_error=float(rec["std_error"]),
                n_samples=int(rec["n_samples"]),
                converged=rec["converged"] == "True"))
    return rows


def config_from_dict(data: dict, experiment: str) -> ExperimentConfig:
    """Build an ExperimentConfig from a JSON-style dict.

    Schema (all sections optional):
      channel: {alpha, sigma_g2, sigma_z2, block_len}
      input:   {kind: gaussian|qpsk|discrete|fixed, ...}
      alpha_grid: [..]; rho_grid: [..]
      estimator: {outer_samples, inner_samples, chunk_size}
      seed, output_path, common_random_numbers, convergence_check, det_trials
    """
    ch = data.get("channel", {})
    channel = ChannelSpec(alpha=ch.get("alpha", 0.0),
                          sigma_g2=ch.get("sigma_g2", 1.0),
                          sigma_z2=ch.get("sigma_z2", 1.0),
                          block_len=ch.get("block_len", 4))
    input_spec = _input_from_dict(data.get("input", {"kind": "gaussian"}))
    est = data.get("estimator", {})
    estimator = EstimatorConfig(outer_samples=est.get("outer_samples", 200_000),
                                inner_samples=est.get("inner_samples", 512),
                                seed=data.get("seed", 0),
                                chunk_size=est.get("chunk_size", 16_384))
    return ExperimentConfig(
        experiment=experiment,
        channel=channel,
        input=input_spec,
        alpha_grid=tuple(data.get("alpha_grid", DEFAULT_ALPHA_GRID)),
        rho_grid=tuple(data.get("rho_grid", DEFAULT_RHO_GRID)),
        estimator=estimator,
        output_path=data.get("output_path"),
        common_random_numbers=data.get("common_random_numbers", True),
        convergence_check=data.get("convergence_check", True),
        det_trials=data.get("det_trials", 1000),
    )


def _complex_list(values) -> tuple[complex, ...]:
    out = []
    for v in values:
        if isinstance(v, (list, tuple)):
            out.append(complex(v[0], v[1]))
        else:
            out.append(complex(v))
    return tuple(out)


def _input_from_dict(data: dict) -> InputSpec:
    kind = data.get("kind", "gaussian")
    if kind == "gaussian":
        return IidGaussian(sigma_x2=data.get("sigma_x2", 1.0))
    if kind == "qpsk":
        return qpsk(sigma_x2=data.get("sigma_x2", 1.0))
    if kind == "discrete":
        return IidDiscrete(points=_complex_list(data["points"]),
                           probs=tuple(data["probs"]),
                           sigma_x2=data.get("sigma_x2"))
    if kind == "fixed":
        return FixedBlock(x=_complex_list(data["x"]))
    raise ValidationError(f"unknown input kind {kind!r}")
