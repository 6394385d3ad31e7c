"""fppnet - Fractional Poisson process simulation and parameter estimation.

Simulates Mittag-Leffler renewal processes, estimates (mu, beta) from
inter-arrival windows with the method of moments, and trains a from-scratch
numpy LSTM regressor that is compared against it.
"""

from .config import (
    ClipPolicy,
    FppParams,
    InputActivation,
    ModelConfig,
    SamplerKind,
    SimulationConfig,
    TimestampFormat,
    TimestampSeriesSpec,
    TrainSpec,
)
from .errors import (
    ConfigError,
    ConvergenceError,
    DatasetFormatError,
    DomainError,
    FppError,
    IngestError,
    ModelFormatError,
    NumericalError,
)
from .estimation import MomEstimate, mom_estimate, mom_estimate_windows
from .experiments import compare_with_mom, evaluate, run_ablation, sampling_distribution_study, train
from .ingest import label_windows_with_mom, load_interarrivals, make_windows
from .neural import LstmModel, load_model, save_model
from .simulation import (
    EventPath,
    LabeledDataset,
    create_sampler,
    generate_dataset,
    load_dataset,
    save_dataset,
    simulate_path,
)
from .special import mittag_leffler, ml_cdf, ml_pdf, ml_survival
from .utils.logging import configure_logging, get_logger, set_log_level

__version__ = "0.1.0"

__all__ = [
    # Configuration
    "FppParams",
    "ClipPolicy",
    "SamplerKind",
    "SimulationConfig",
    "InputActivation",
    "ModelConfig",
    "TrainSpec",
    "TimestampFormat",
    "TimestampSeriesSpec",
    # Errors
    "FppError",
    "DomainError",
    "ConfigError",
    "ConvergenceError",
    "NumericalError",
    "ModelFormatError",
    "DatasetFormatError",
    "IngestError",
    # Special functions
    "mittag_leffler",
    "ml_survival",
    "ml_cdf",
    "ml_pdf",
    # Simulation
    "create_sampler",
    "EventPath",
    "simulate_path",
    "LabeledDataset",
    "generate_dataset",
    "save_dataset",
    "load_dataset",
    # Estimation
    "MomEstimate",
    "mom_estimate",
    "mom_estimate_windows",
    # Neural
    "LstmModel",
    "save_model",
    "load_model",
    # Experiments
    "train",
    "evaluate",
    "compare_with_mom",
    "run_ablation",
    "sampling_distribution_study",
    # Ingest
    "load_interarrivals",
    "make_windows",
    "label_windows_with_mom",
    # Utilities
    "configure_logging",
    "get_logger",
    "set_log_level",
]
