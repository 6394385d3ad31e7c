"""Configuration models for fppnet.

All run settings are pydantic models, validated on construction. Public entry
points build them through :func:`build_config` so that validation failures
surface as :class:`~fppnet.errors.ConfigError`.
"""

from datetime import date
from enum import Enum
from pathlib import Path
from typing import Optional, Tuple, Type, TypeVar, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .errors import ConfigError

M = TypeVar("M", bound=BaseModel)

# 1/beta appears as an exponent in the sampler; below this it explodes.
BETA_FLOOR = 0.05


def build_config(model_cls: Type[M], **values) -> M:
    """Construct a config model, translating validation errors.

    Args:
        model_cls: The pydantic model class to build.
        **values: Field values.

    Returns:
        The validated model instance.

    Raises:
        ConfigError: If any field fails validation.
    """
    try:
        return model_cls(**values)
    except ValidationError as e:
        raise ConfigError(f"Invalid {model_cls.__name__}: {e}") from e


class FppParams(BaseModel):
    """Fractional Poisson process parameters (mu, beta)."""

    model_config = ConfigDict(frozen=True)

    mu: float = Field(gt=0.0, allow_inf_nan=False)
    beta: float = Field(ge=BETA_FLOOR, le=1.0, allow_inf_nan=False)


class ClipPolicy(BaseModel):
    """Numerical guards for the method-of-moments estimator.

    Attributes:
        beta_min: Lower clamp for beta_hat.
        beta_max: Upper clamp for beta_hat.
        t_min: Inter-arrivals below this are dropped before taking logs.
        t_max: Inter-arrivals above this are dropped before taking logs.
        min_points: Minimum number of usable values.
    """

    model_config = ConfigDict(frozen=True)

    beta_min: float = Field(default=0.01, gt=0.0)
    beta_max: float = Field(default=1.0, le=1.0)
    t_min: float = Field(default=1e-12, gt=0.0)
    t_max: float = Field(default=1e12, gt=0.0)
    min_points: int = Field(default=3, ge=3)

    @model_validator(mode="after")
    def _check_order(self) -> "ClipPolicy":
        if self.beta_min >= self.beta_max:
            raise ValueError("beta_min must be below beta_max")
        if self.t_min >= self.t_max:
            raise ValueError("t_min must be below t_max")
        return self


class SamplerKind(str, Enum):
    """Inter-arrival sampler variants.

    KANTER: Kanter-consistent stable generator (default, correct).
    PRINTED_EXPONENT: Denominator exponent 1/(beta - 1) as sometimes printed;
        kept to show that it fails the distributional test.
    """

    KANTER = "kanter"
    PRINTED_EXPONENT = "printed_exponent"


def _check_range(value: Tuple[float, float], lo: float, hi: float, name: str) -> Tuple[float, float]:
    a, b = value
    if a > b:
        raise ValueError(f"{name} is degenerate: lower bound {a} exceeds upper bound {b}")
    if a < lo or b > hi:
        raise ValueError(f"{name} must lie within [{lo}, {hi}], got [{a}, {b}]")
    return value


class SimulationConfig(BaseModel):
    """Settings for synthetic dataset generation."""

    model_config = ConfigDict(frozen=True)

    n_samples: int = Field(default=100_000, ge=1)
    seq_len: int = Field(default=50, ge=2)
    mu_range: Tuple[float, float] = (0.5, 5.0)
    beta_range: Tuple[float, float] = (0.1, 0.9)
    seed: int = Field(default=0, ge=0)
    sampler: SamplerKind = SamplerKind.KANTER
    threads: int = Field(default=1, ge=1)

    @field_validator("mu_range")
    @classmethod
    def _mu_range(cls, v: Tuple[float, float]) -> Tuple[float, float]:
        if v[0] <= 0.0:
            raise ValueError("mu_range must be strictly positive")
        return _check_range(v, 0.0, float("inf"), "mu_range")

    @field_validator("beta_range")
    @classmethod
    def _beta_range(cls, v: Tuple[float, float]) -> Tuple[float, float]:
        return _check_range(v, BETA_FLOOR, 1.0, "beta_range")


class InputActivation(str, Enum):
    """Activation applied per time step to the scalar input."""

    NONE = "none"
    RELU = "relu"


class ModelConfig(BaseModel):
    """LSTM regressor architecture and numerical options.

    The output heads are fixed: softplus for mu, sigmoid for beta.
    """

    model_config = ConfigDict(frozen=True)

    input_dim: int = Field(default=1, ge=1)
    hidden_dim: int = Field(default=16, ge=1)
    fc_dim: int = Field(default=32, ge=1)
    output_dim: int = Field(default=2, ge=1)
    input_activation: InputActivation = InputActivation.RELU
    log_inputs: bool = False
    grad_clip_norm: Optional[float] = Field(default=None, gt=0.0)
    seed: int = Field(default=0, ge=0)

    @field_validator("input_dim")
    @classmethod
    def _scalar_input(cls, v: int) -> int:
        if v != 1:
            raise ValueError("input_dim must be 1 (scalar inter-arrival per step)")
        return v

    @field_validator("output_dim")
    @classmethod
    def _two_outputs(cls, v: int) -> int:
        if v != 2:
            raise ValueError("output_dim must be 2 (mu, beta)")
        return v


class TrainSpec(BaseModel):
    """Training protocol.

    Attributes:
        dataset: Optional path of the dataset this spec trains on (for manifests).
        split_fraction: Fraction of rows used for training; the rest is test.
        epochs: Number of passes over the training split.
        lr: Adam learning rate.
        batch_size: Mini-batch size.
        shuffle_seed: Seed for the split permutation and batch shuffling.
        early_metrics_cadence: Log validation metrics every this many epochs.
        val_fraction: Fraction of the training split held out for validation
            loss and best-checkpoint selection.
        threads: Worker threads for batch gradient computation.
    """

    model_config = ConfigDict(frozen=True)

    dataset: Optional[Path] = None
    split_fraction: float = Field(default=0.8, gt=0.0, lt=1.0)
    epochs: int = Field(default=100, ge=1)
    lr: float = Field(default=1e-3, ge=0.0)
    batch_size: int = Field(default=64, ge=1)
    shuffle_seed: int = Field(default=0, ge=0)
    early_metrics_cadence: int = Field(default=1, ge=1)
    val_fraction: float = Field(default=0.1, ge=0.0, lt=1.0)
    threads: int = Field(default=1, ge=1)


class TimestampFormat(str, Enum):
    """How raw timestamp values are encoded."""

    ISO_DATETIME = "iso_datetime"
    EPOCH_SECONDS = "epoch_seconds"
    EPOCH_MICROS = "epoch_micros"

    @property
    def unit(self) -> str:
        """Unit of the inter-arrival gaps produced from this format."""
        return "microseconds" if self is TimestampFormat.EPOCH_MICROS else "seconds"


class TimestampSeriesSpec(BaseModel):
    """Where and how to read a timestamp column.

    Timestamps are taken as recorded (naive); no timezone conversion happens.
    """

    model_config = ConfigDict(frozen=True)

    path: Path
    timestamp_column: Union[str, int]
    format: TimestampFormat = TimestampFormat.ISO_DATETIME
    delimiter: str = ","
    has_header: bool = True
    sort: bool = True
    date_filter: Optional[date] = None
    parse_tolerance: float = Field(default=0.01, ge=0.0, le=1.0)
    chunk_size: int = Field(default=100_000, ge=1)


__all__ = [
    "BETA_FLOOR",
    "build_config",
    "FppParams",
    "ClipPolicy",
    "SamplerKind",
    "SimulationConfig",
    "InputActivation",
    "ModelConfig",
    "TrainSpec",
    "TimestampFormat",
    "TimestampSeriesSpec",
]
