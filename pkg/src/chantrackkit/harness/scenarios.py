# Standard Libraries
from dataclasses import dataclass
import logging
from typing import Callable, NamedTuple, Optional

# Dependencies
import astropy.units as u
import numpy as np
import numpy.typing as npt

# Top-Level Imports
from chantrackkit.data_classes import (
    ChannelModel,
    EmConfig,
    ModelParams,
    QuantizerSpec,
    QuantMode,
    RayChannelSpec,
    Scenario,
    ArrayGeometry,
    VirtualChannelPath,
)
from chantrackkit.channel import (
    ar_evolve,
    default_block_duration,
    default_support_width,
    doppler_shift,
    gen_physical_path,
    gen_sparse_path,
    make_sparse_params,
    observe_path,
    velocity_to_alpha,
)
from chantrackkit.em import EmResult, em_fit
from chantrackkit.quantizer import loading_step
from chantrackkit.support import kmeans_support
from chantrackkit.tracking import (
    ChannelTracker,
    build_reduced_training,
    simulate_tracking_observation,
)
from chantrackkit.utils import mse_metric

# Relative Imports
from .config import ExperimentConfig

logger = logging.getLogger(__name__)


class MetricSample(NamedTuple):
    series: str
    x_name: str
    x: float
    metric: str
    value: float


@dataclass
class Setting:
    """One ADC configuration of a sweep: `bits=None` means unquantized."""

    bits: Optional[int]
    mode: QuantMode

    @property
    def label(self) -> str:
        return "none" if self.bits is None else f"{self.bits}bit"

    def spec(
        self, signal_power: float, noise_var: float, rho_table=None
    ) -> QuantizerSpec:
        if self.bits is None:
            return QuantizerSpec.none()
        step = loading_step(self.bits, signal_power, noise_var)
        if self.mode == QuantMode.PDQ:
            rho = None if rho_table is None else rho_table.get(self.bits)
            return QuantizerSpec.pdq(
                self.bits, step, rho=rho, input_power=signal_power + noise_var
            )
        return QuantizerSpec.uniform(self.bits, step)


@dataclass
class TrialOutcome:
    em: EmResult
    truth: ModelParams
    support_hit: bool
    block_mse: npt.NDArray[np.float64]
    tracker: Optional[ChannelTracker] = None

    @property
    def mse_w(self) -> float:
        kept = self.block_mse[np.isfinite(self.block_mse)]
        return float(kept.mean()) if kept.size else float("nan")


def noise_variance(pilot_power: float, snr_db: float) -> float:
    return pilot_power / 10 ** (snr_db / 10)


def _learning_path(
    cfg: ExperimentConfig, rng: np.random.Generator
) -> tuple[VirtualChannelPath, ModelParams]:
    alpha = velocity_to_alpha(cfg.velocity_kmh * u.km / u.hour)
    if cfg.channel_model == ChannelModel.AR:
        width = default_support_width(cfg.N, cfg.angle_spread_deg)
        params = make_sparse_params(cfg.N, width, alpha, rng)
        return gen_sparse_path(params, cfg.M, rng), params
    spread = np.deg2rad(cfg.angle_spread_deg)
    center = rng.uniform(-np.pi / 2 + spread, np.pi / 2 - spread)
    spec = RayChannelSpec(
        theta_min=center - spread / 2,
        theta_max=center + spread / 2,
        num_rays=20,
        doppler_max=doppler_shift(cfg.velocity_kmh * u.km / u.hour).to_value(u.Hz),
        block_duration=default_block_duration().to_value(u.s),
        num_blocks=cfg.M,
    )
    path, row_power = gen_physical_path(spec, ArrayGeometry(cfg.N), rng)
    return path, ModelParams(alpha, row_power)


def _continue_path(
    last: npt.NDArray, params: ModelParams, num_blocks: int, rng: np.random.Generator
) -> npt.NDArray[np.complex128]:
    blocks = np.empty((num_blocks, last.size), dtype=np.complex128)
    h = last
    for m in range(num_blocks):
        h = ar_evolve(h, params, rng)
        blocks[m] = h
    return blocks


def learn_and_track(
    cfg: ExperimentConfig,
    snr_db: float,
    setting: Setting,
    rng: np.random.Generator,
    keep_tracker: bool = False,
) -> TrialOutcome:
    """
    Full pipeline of one trial: simulate, learn, detect the support, then
    track `cfg.tracking_blocks` further blocks on it.
    """
    path, truth = _learning_path(cfg, rng)
    P = cfg.num_pilots
    noise_var = noise_variance(P, snr_db)
    learn_power = float(np.mean(truth.lam))
    spec = setting.spec(learn_power, noise_var, cfg.rho_table)
    obs = observe_path(path, P, P, noise_var, spec, rng)
    em = em_fit(obs, EmConfig(max_em_iters=cfg.max_em_iters), truth=truth)

    support = kmeans_support(em.params.lam)
    hit = np.array_equal(support.indices, np.sort(path.true_support))
    future = _continue_path(path.values[:, -1], truth, cfg.tracking_blocks, rng)

    K = len(support)
    P_T = max(cfg.P_T or K, K)
    training = build_reduced_training(K, P_T, P_T, rng)
    track_noise = noise_variance(P_T, snr_db)
    track_power = float(np.sum(truth.lam[support.indices])) / P_T
    tracker = ChannelTracker(
        em.params,
        support.indices,
        training,
        setting.spec(track_power, track_noise, cfg.rho_table),
        track_noise,
    )
    block_mse = np.empty(cfg.tracking_blocks)
    for m, h in enumerate(future):
        w = h[support.indices]
        y = simulate_tracking_observation(
            w, training, track_noise, tracker.spec, rng
        )
        record = tracker.step(y, w)
        block_mse[m] = mse_metric(record.w_hat, w)
    return TrialOutcome(
        em, truth, hit, block_mse, tracker if keep_tracker else None
    )


def _settings(cfg: ExperimentConfig) -> list[Setting]:
    return [Setting(None, QuantMode.NONE)] + [
        Setting(b, cfg.quant_mode) for b in cfg.bits
    ]


def em_convergence(
    cfg: ExperimentConfig, point: int, rng_factory: Callable[[], np.random.Generator]
) -> list[MetricSample]:
    snr = cfg.snr_db[point]
    rng = rng_factory()
    path, truth = _learning_path(cfg, rng)
    P = cfg.num_pilots
    noise_var = noise_variance(P, snr)
    obs = observe_path(path, P, P, noise_var, QuantizerSpec.none(), rng)
    em = em_fit(obs, EmConfig(max_em_iters=cfg.max_em_iters), truth=truth)
    series = f"snr={snr:g}dB"
    samples = []
    # an early stop holds the final values for the remaining iterations
    for it in range(1, cfg.max_em_iters + 1):
        row = em.trace[min(it, len(em.trace)) - 1]
        samples.append(
            MetricSample(series, "iteration", it, "mse_alpha", 10 ** (row.mse_alpha_db / 10))
        )
        samples.append(
            MetricSample(series, "iteration", it, "mse_lambda", 10 ** (row.mse_lambda_db / 10))
        )
    return samples


def mse_vs_snr(
    cfg: ExperimentConfig, point: int, rng_factory: Callable[[], np.random.Generator]
) -> list[MetricSample]:
    snr = cfg.snr_db[point]
    samples = []
    for setting in _settings(cfg):
        out = learn_and_track(cfg, snr, setting, rng_factory())
        samples += _learning_samples(setting.label, "snr_db", snr, out)
    return samples


def _learning_samples(
    series: str, x_name: str, x: float, out: TrialOutcome
) -> list[MetricSample]:
    return [
        MetricSample(series, x_name, x, "mse_alpha", mse_metric(out.em.params.alpha, out.truth.alpha)),
        MetricSample(series, x_name, x, "mse_lambda", mse_metric(out.em.params.lam, out.truth.lam)),
        MetricSample(series, x_name, x, "mse_w", out.mse_w),
        MetricSample(series, x_name, x, "support_hit", float(out.support_hit)),
    ]


def mse_vs_bits(
    cfg: ExperimentConfig, point: int, rng_factory: Callable[[], np.random.Generator]
) -> list[MetricSample]:
    snr = cfg.snr_db[point]
    samples = []
    for bits in sorted(cfg.bits):
        out = learn_and_track(cfg, snr, Setting(bits, cfg.quant_mode), rng_factory())
        samples += _learning_samples(f"snr={snr:g}dB", "bits", bits, out)
    return samples


def tracking_example(
    cfg: ExperimentConfig, point: int, rng_factory: Callable[[], np.random.Generator]
) -> list[MetricSample]:
    snr = cfg.snr_db[point]
    samples = []
    for setting in _settings(cfg):
        out = learn_and_track(cfg, snr, setting, rng_factory(), keep_tracker=True)
        tracker = out.tracker
        if len(tracker.support) == 0:
            continue
        # strongest learned coefficient
        k = int(np.argmax(tracker.params.lam))
        series = f"{setting.label}/snr={snr:g}dB"
        for rec in tracker.history:
            samples.append(MetricSample(series, "block", rec.block + 1, "w_true_re", float(rec.w_true[k].real)))
            samples.append(MetricSample(series, "block", rec.block + 1, "w_hat_re", float(rec.w_hat[k].real)))
    return samples


def mse_vs_block(
    cfg: ExperimentConfig, point: int, rng_factory: Callable[[], np.random.Generator]
) -> list[MetricSample]:
    snr = cfg.snr_db[point]
    samples = []
    for setting in _settings(cfg):
        out = learn_and_track(cfg, snr, setting, rng_factory())
        series = f"{setting.label}/snr={snr:g}dB"
        samples += [
            MetricSample(series, "block", m + 1, "mse_w", float(v))
            for m, v in enumerate(out.block_mse)
        ]
    return samples


SCENARIOS: dict[Scenario, Callable] = {
    Scenario.EM_CONVERGENCE: em_convergence,
    Scenario.MSE_VS_SNR: mse_vs_snr,
    Scenario.MSE_VS_BITS: mse_vs_bits,
    Scenario.TRACKING_EXAMPLE: tracking_example,
    Scenario.MSE_VS_BLOCK: mse_vs_block,
}

DESCRIPTIONS: dict[Scenario, str] = {
    Scenario.EM_CONVERGENCE: "MSE of alpha and lambda per EM iteration, per SNR",
    Scenario.MSE_VS_SNR: "learning and tracking MSE versus SNR, per quantizer",
    Scenario.MSE_VS_BITS: "learning and tracking MSE versus quantizer bits",
    Scenario.TRACKING_EXAMPLE: "true and tracked real part of one coefficient",
    Scenario.MSE_VS_BLOCK: "tracking MSE versus block index, per SNR",
}
