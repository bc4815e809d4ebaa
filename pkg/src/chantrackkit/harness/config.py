# Standard Libraries
from dataclasses import asdict, dataclass, field, fields, replace
import json
from pathlib import Path
from typing import Any, Optional

# Top-Level Imports
from chantrackkit.data_classes import (
    ChannelModel,
    ChannelModelLiteral,
    QuantMode,
    Scenario,
    ScenarioLiteral,
)
from chantrackkit._errors import ConfigError

FULL_SCALE = {"N": 128, "M": 32}


@dataclass(frozen=True)
class ExperimentConfig:
    """
    Settings of one experiment run.

    Parameters
    ----------
    scenario: Scenario
        Experiment family to run.
    N, M: int
        Antennas and learning blocks.
    P: int, optional
        Pilots per learning block. Defaults to N // 4.
    P_T: int, optional
        Tracking pilots. Defaults to the size of the detected support.
    snr_db: list of float
        SNR sweep in dB.
    bits: list of int
        Quantizer resolutions to sweep.
    quant_mode: QuantMode
        How quantized observations are read by inference ("uniform" or
        "pdq"). Unquantized runs are always included where a scenario
        compares against them.
    velocity_kmh: float
        User speed that sets the true AR coefficient.
    angle_spread_deg: float
        Angular spread that sets the support width.
    channel_model: ChannelModel
        "ar" (model-matched) or "ray" (physical, for mismatch studies).
    num_trials: int
        Monte-Carlo trials per sweep point.
    tracking_blocks: int
        Blocks tracked after learning.
    max_em_iters: int
        EM iteration budget.
    seed: int
        Master seed.
    workers: int
        Worker processes; 1 runs in-process.
    rho_table: dict, optional
        Distortion factors per bit count, overriding the defaults.
    out: str
        Output directory.
    """

    scenario: Scenario | ScenarioLiteral = Scenario.EM_CONVERGENCE
    N: int = 32
    M: int = 16
    P: Optional[int] = None
    P_T: Optional[int] = None
    snr_db: list[float] = field(default_factory=lambda: [15.0, 30.0])
    bits: list[int] = field(default_factory=lambda: [6, 4, 2])
    quant_mode: QuantMode = QuantMode.UNIFORM
    velocity_kmh: float = 100.0
    angle_spread_deg: float = 4.0
    channel_model: ChannelModel | ChannelModelLiteral = ChannelModel.AR
    num_trials: int = 50
    tracking_blocks: int = 50
    max_em_iters: int = 10
    seed: int = 0
    workers: int = 1
    rho_table: Optional[dict[int, float]] = None
    out: str = "results"

    def __post_init__(self):
        try:
            object.__setattr__(self, "scenario", Scenario(self.scenario))
            object.__setattr__(self, "quant_mode", QuantMode(self.quant_mode))
            object.__setattr__(
                self, "channel_model", ChannelModel(self.channel_model)
            )
        except ValueError as err:
            raise ConfigError(str(err)) from None
        object.__setattr__(self, "snr_db", [float(s) for s in self.snr_db])
        object.__setattr__(self, "bits", [int(b) for b in self.bits])
        if self.rho_table is not None:
            object.__setattr__(
                self,
                "rho_table",
                {int(k): float(v) for k, v in self.rho_table.items()},
            )
        self._validate()

    @property
    def num_pilots(self) -> int:
        return self.P if self.P is not None else max(1, self.N // 4)

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["scenario"] = str(self.scenario)
        data["quant_mode"] = str(self.quant_mode)
        data["channel_model"] = str(self.channel_model)
        return data

    def _validate(self):
        for name in ("N", "M", "tracking_blocks", "max_em_iters", "workers"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive ({getattr(self, name)})")
        if self.num_trials < 0:
            raise ConfigError(f"num_trials must be >= 0 ({self.num_trials})")
        if self.P is not None and not 1 <= self.P <= self.N:
            raise ConfigError(f"P must lie in [1, N] ({self.P})")
        if self.P_T is not None and self.P_T < 1:
            raise ConfigError(f"P_T must be positive ({self.P_T})")
        if not self.snr_db:
            raise ConfigError("snr_db must not be empty")
        if len(set(self.snr_db)) != len(self.snr_db):
            raise ConfigError(f"snr_db values must be distinct ({self.snr_db})")
        if any(b < 1 for b in self.bits):
            raise ConfigError(f"bits must be positive ({self.bits})")
        if self.quant_mode == QuantMode.NONE:
            raise ConfigError("quant_mode selects a quantized reading: uniform or pdq")
        if self.velocity_kmh < 0 or self.angle_spread_deg <= 0:
            raise ConfigError("velocity must be >= 0 and angle spread > 0")


def _field_names() -> set[str]:
    return {f.name for f in fields(ExperimentConfig)}


def load_config(path: Optional[str | Path] = None) -> ExperimentConfig:
    """
    Reads a JSON object of ExperimentConfig fields; missing keys keep their
    defaults.
    """
    if path is None:
        return ExperimentConfig()
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except OSError as err:
        raise ConfigError(f"Cannot read config {path}: {err}") from None
    except json.JSONDecodeError as err:
        raise ConfigError(f"Invalid JSON in {path}: {err}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"Config {path} must hold a JSON object")
    unknown = set(data) - _field_names()
    if unknown:
        raise ConfigError(f"Unknown config keys in {path}: {sorted(unknown)}")
    try:
        return ExperimentConfig(**data)
    except TypeError as err:
        raise ConfigError(f"Invalid config {path}: {err}") from None


def apply_overrides(
    config: ExperimentConfig, full_scale: bool = False, **overrides: Any
) -> ExperimentConfig:
    """
    Returns `config` with every non-None override applied. `full_scale`
    switches N and M to the full-size setting before the overrides.
    """
    changes = dict(FULL_SCALE) if full_scale else {}
    unknown = set(overrides) - _field_names()
    if unknown:
        raise ConfigError(f"Unknown overrides: {sorted(unknown)}")
    changes.update({k: v for k, v in overrides.items() if v is not None})
    return replace(config, **changes)
