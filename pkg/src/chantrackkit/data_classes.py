# Standard Libraries
from dataclasses import dataclass, field
from enum import StrEnum
from typing import Literal, Optional

# Dependencies
import numpy as np
import numpy.typing as npt

# Top-Level Imports
from chantrackkit._errors import DimensionError, DomainError, QuantizerError

# Largest AR coefficient ever handed to the learner; 1/(1 - alpha^2) stays
# finite below it.
ALPHA_MAX = 1.0 - 1e-4

# Floor for learned per-coefficient variances.
LAMBDA_MIN = 1e-12


class QuantMode(StrEnum):
    NONE = "none"
    UNIFORM = "uniform"
    PDQ = "pdq"


type QuantModeLiteral = Literal["none", "uniform", "pdq"]


class ChannelModel(StrEnum):
    AR = "ar"
    RAY = "ray"


type ChannelModelLiteral = Literal["ar", "ray"]


class Scenario(StrEnum):
    EM_CONVERGENCE = "em_convergence"
    MSE_VS_SNR = "mse_vs_snr"
    MSE_VS_BITS = "mse_vs_bits"
    TRACKING_EXAMPLE = "tracking_example"
    MSE_VS_BLOCK = "mse_vs_block"


type ScenarioLiteral = Literal[
    "em_convergence",
    "mse_vs_snr",
    "mse_vs_bits",
    "tracking_example",
    "mse_vs_block",
]


@dataclass(frozen=True)
class ArrayGeometry:
    """
    Uniform linear array at the base station.

    Parameters
    ----------
    num_antennas: int
        Number of antenna elements, N.
    spacing_over_wavelength: float, optional
        Element spacing in wavelengths, d/lambda. Default is 0.5.
    """

    num_antennas: int
    spacing_over_wavelength: float = 0.5

    def __post_init__(self):
        self._validate()

    def _validate(self):
        if self.num_antennas < 1:
            raise DomainError(
                f"Array needs at least one antenna ({self.num_antennas})"
            )
        if self.spacing_over_wavelength <= 0:
            raise DomainError(
                "Antenna spacing must be positive "
                f"({self.spacing_over_wavelength})"
            )


@dataclass(frozen=True)
class RayChannelSpec:
    """
    Discretised angle-Doppler scattering description of a single user.

    Parameters
    ----------
    theta_min, theta_max: float
        Emergence-angle window in radians, inside [-pi/2, pi/2].
    num_rays: int
        Number of discrete scattering rays.
    doppler_max: float
        Maximum Doppler shift f_D in Hz.
    block_duration: float
        Duration of one coherence block, L*T_s, in seconds.
    num_blocks: int
        Number of blocks M to generate.
    """

    theta_min: float
    theta_max: float
    num_rays: int
    doppler_max: float
    block_duration: float
    num_blocks: int

    def __post_init__(self):
        self._validate()

    def _validate(self):
        if not self.theta_min < self.theta_max:
            raise DomainError(
                f"Empty angle window [{self.theta_min}, {self.theta_max}]"
            )
        if self.theta_min < -np.pi / 2 or self.theta_max > np.pi / 2:
            raise DomainError("Angle window must lie inside [-pi/2, pi/2]")
        if self.num_rays < 1 or self.num_blocks < 1:
            raise DomainError("num_rays and num_blocks must be positive")
        if self.doppler_max < 0:
            raise DomainError(f"Negative Doppler shift ({self.doppler_max})")


class ModelParams:
    """
    Parameters of the sparse first-order AR channel model.

    Parameters
    ----------
    alpha: float
        Temporal correlation coefficient.
    lam: np.ndarray
        Per-coefficient variances of the virtual channel. Must be a 1D array
        of non-negative reals.
    """

    def __init__(self, alpha: float, lam: npt.ArrayLike):
        self.alpha = float(alpha)
        self.lam = np.asarray(lam, dtype=np.float64)
        self._validate()

    @property
    def num_antennas(self) -> int:
        return self.lam.size

    @property
    def support(self) -> npt.NDArray[np.intp]:
        return np.flatnonzero(self.lam > 0)

    def restrict(self, indices: npt.ArrayLike) -> "ModelParams":
        """
        Returns the parameters of the sub-model living on `indices`.
        """
        return ModelParams(self.alpha, self.lam[np.asarray(indices)])

    def copy(self) -> "ModelParams":
        return ModelParams(self.alpha, self.lam.copy())

    def __repr__(self) -> str:
        return f"ModelParams(alpha={self.alpha!r}, lam={self.lam!r})"

    def _validate(self):
        if self.lam.ndim != 1:
            raise DimensionError(
                f"lambda must be a vector ({self.lam.ndim} dims)"
            )
        if not np.isfinite(self.alpha):
            raise DomainError(f"alpha is not finite ({self.alpha})")
        if np.any(~np.isfinite(self.lam)) or np.any(self.lam < 0):
            raise DomainError("lambda must be finite and non-negative")


class VirtualChannelPath:
    """
    Ground-truth virtual channel across blocks.

    Parameters
    ----------
    values: np.ndarray
        N x M complex matrix; column m is the virtual channel of block m.
    true_support: np.ndarray
        Indices of the rows with non-zero generating variance.
    """

    def __init__(self, values: npt.NDArray, true_support: npt.ArrayLike):
        self.values = np.asarray(values, dtype=np.complex128)
        self.true_support = np.asarray(true_support, dtype=np.intp)
        self._validate()

    @property
    def num_antennas(self) -> int:
        return self.values.shape[0]

    @property
    def num_blocks(self) -> int:
        return self.values.shape[1]

    def block(self, m: int) -> npt.NDArray[np.complex128]:
        return self.values[:, m]

    def _validate(self):
        if self.values.ndim != 2:
            raise DimensionError(
                f"Channel path must be N x M ({self.values.ndim} dims)"
            )


class TrainingMatrix:
    """
    Per-block downlink pilot matrix X_m (N x P) with
    X^H X = (pilot_power / P) I.
    """

    def __init__(self, X: npt.NDArray, pilot_power: float):
        self.X = np.asarray(X, dtype=np.complex128)
        self.pilot_power = float(pilot_power)
        self._validate()

    @property
    def num_pilots(self) -> int:
        return self.X.shape[1]

    def gram_residual(self) -> float:
        """
        Frobenius distance between X^H X and (pilot_power / P) I.
        """
        P = self.num_pilots
        gram = self.X.conj().T @ self.X
        return float(
            np.linalg.norm(gram - (self.pilot_power / P) * np.eye(P))
        )

    def _validate(self):
        if self.X.ndim != 2:
            raise DimensionError(
                f"Training matrix must be 2D ({self.X.ndim} dims)"
            )
        if self.pilot_power <= 0:
            raise DomainError(f"Pilot power must be positive ({self.pilot_power})")


class PathObservations:
    """
    Training observations of a whole channel path, ready for inference.

    Parameters
    ----------
    y: np.ndarray
        M x P observations. Complex samples for mode "none", integer codes
        stored as complex for "uniform", de-quantized values for "pdq".
    B: np.ndarray
        M x P x N stack of measurement matrices B_m = X_m^T F_N^H.
    noise_var: float
        Receiver noise variance.
    quantizer: QuantizerSpec
        ADC model the observations were produced under.
    """

    def __init__(
        self,
        y: npt.NDArray,
        B: npt.NDArray,
        noise_var: float,
        quantizer: "QuantizerSpec",
    ):
        self.y = np.asarray(y, dtype=np.complex128)
        self.B = np.asarray(B, dtype=np.complex128)
        self.noise_var = float(noise_var)
        self.quantizer = quantizer
        self._validate()

    @property
    def num_blocks(self) -> int:
        return self.y.shape[0]

    @property
    def num_antennas(self) -> int:
        return self.B.shape[2]

    def _validate(self):
        if self.B.ndim != 3 or self.y.ndim != 2:
            raise DimensionError("Expected y as M x P and B as M x P x N")
        if self.y.shape != self.B.shape[:2]:
            raise DimensionError(
                f"Observation shape {self.y.shape} does not match "
                f"measurement stack {self.B.shape}"
            )
        if self.noise_var < 0:
            raise DomainError(f"Negative noise variance ({self.noise_var})")


@dataclass(frozen=True)
class QuantizerSpec:
    """
    ADC description shared by the simulator and the inference side.

    Parameters
    ----------
    mode: QuantMode
        "none" (ideal ADC), "uniform" (mid-rise uniform quantizer with
        saturating outer cells) or "pdq" (inference treats the uniform
        quantizer through the linear distortion model).
    bits: int, optional
        Resolution kappa. Required for uniform and pdq.
    step: float, optional
        Quantization step Delta. Required for uniform and pdq.
    rho: float, optional
        Distortion factor, pdq only. Defaults to the table entry for `bits`.
    input_power: float, optional
        Power of the quantizer input that the distortion noise rho(1 - rho)
        is expressed relative to. Default 1.
    """

    mode: QuantMode | QuantModeLiteral = QuantMode.NONE
    bits: Optional[int] = None
    step: Optional[float] = None
    rho: Optional[float] = None
    input_power: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "mode", QuantMode(self.mode))
        self._validate()

    @classmethod
    def none(cls) -> "QuantizerSpec":
        return cls(QuantMode.NONE)

    @classmethod
    def uniform(cls, bits: int, step: float) -> "QuantizerSpec":
        return cls(QuantMode.UNIFORM, bits=bits, step=step)

    @classmethod
    def pdq(
        cls,
        bits: int,
        step: float,
        rho: Optional[float] = None,
        input_power: float = 1.0,
    ) -> "QuantizerSpec":
        return cls(
            QuantMode.PDQ,
            bits=bits,
            step=step,
            rho=rho,
            input_power=input_power,
        )

    @property
    def code_min(self) -> int:
        return -(2 ** self._bits()) // 2 + 1

    @property
    def code_max(self) -> int:
        return (2 ** self._bits()) // 2

    def _bits(self) -> int:
        if self.bits is None:
            raise QuantizerError(f"Quantizer mode {self.mode} has no bits")
        return self.bits

    def _validate(self):
        if self.mode == QuantMode.NONE:
            return
        if self.bits is None or self.bits < 1:
            raise QuantizerError(f"Invalid number of bits ({self.bits})")
        if self.step is None or not self.step > 0:
            raise QuantizerError(f"Invalid quantization step ({self.step})")
        if self.mode == QuantMode.PDQ and self.rho is not None:
            if not 0 <= self.rho < 1:
                raise QuantizerError(f"rho must lie in [0, 1) ({self.rho})")
        if self.input_power <= 0:
            raise QuantizerError(
                f"input_power must be positive ({self.input_power})"
            )


class GaussianMessage:
    """
    Element-wise complex Gaussian beliefs CN(mean, var). An infinite
    variance is an uninformative message and is stored as zero precision.
    """

    def __init__(self, mean: npt.ArrayLike, var: npt.ArrayLike):
        self.mean = np.asarray(mean, dtype=np.complex128)
        self.var = np.asarray(var, dtype=np.float64)
        self.mean, self.var = np.broadcast_arrays(self.mean, self.var)
        self._validate()

    @classmethod
    def uninformative(cls, size: int) -> "GaussianMessage":
        return cls(np.zeros(size), np.full(size, np.inf))

    @property
    def precision(self) -> npt.NDArray[np.float64]:
        with np.errstate(divide="ignore"):
            return np.where(np.isinf(self.var), 0.0, 1.0 / self.var)

    def __len__(self) -> int:
        return self.mean.size

    def _validate(self):
        if np.any(np.isnan(self.var)) or np.any(self.var < 0):
            raise DomainError("Message variances must be non-negative")


# A GAMP input-side prior is a Gaussian belief on each coefficient.
ScalarPrior = GaussianMessage


@dataclass(frozen=True)
class DampingConfig:
    """
    GAMP damping and iteration budget.

    Parameters
    ----------
    theta_s, theta_x: float
        Damping factors in (0, 1] for the output and input updates.
    k_max: int
        Maximum number of GAMP iterations.
    tol: float
        Early exit once the relative change of the estimate drops below it.
    """

    theta_s: float = 0.7
    theta_x: float = 0.7
    k_max: int = 25
    tol: float = 1e-8

    def __post_init__(self):
        self._validate()

    def _validate(self):
        for name in ("theta_s", "theta_x"):
            value = getattr(self, name)
            if not 0 < value <= 1:
                raise DomainError(f"{name} must lie in (0, 1] ({value})")
        if self.k_max < 1:
            raise DomainError(f"k_max must be positive ({self.k_max})")


@dataclass(frozen=True)
class EmConfig:
    """
    Outer EM loop settings.
    """

    max_em_iters: int = 10
    k_max: int = 25
    damping: DampingConfig = field(default_factory=DampingConfig)
    fixed_point_iters: int = 20
    fixed_point_tol: float = 1e-10
    tol_param: float = 1e-4
    alpha_max: float = ALPHA_MAX
    lam_min: float = LAMBDA_MIN

    def __post_init__(self):
        self._validate()

    def _validate(self):
        for name in ("max_em_iters", "k_max", "fixed_point_iters"):
            if getattr(self, name) < 1:
                raise DomainError(f"{name} must be a positive integer")
        if not 0 < self.alpha_max < 1:
            raise DomainError(f"alpha_max must lie in (0, 1) ({self.alpha_max})")
        if self.lam_min < 0:
            raise DomainError(f"lam_min must be non-negative ({self.lam_min})")


@dataclass(frozen=True)
class TrackingConfig:
    """
    Online tracker settings: GAMP budget per block and the relearning
    trigger (window W in blocks, ratio threshold tau_mm).
    """

    damping: DampingConfig = field(
        default_factory=lambda: DampingConfig(k_max=15)
    )
    window: int = 5
    threshold: float = 3.0

    def __post_init__(self):
        self._validate()

    def _validate(self):
        if self.window < 1:
            raise DomainError(f"window must be at least 1 ({self.window})")
        if not self.threshold > 1:
            raise DomainError(f"threshold must exceed 1 ({self.threshold})")
