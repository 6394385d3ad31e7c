"""Sampling distribution of both estimators, and per-window tracking."""

from typing import ClassVar, Dict, List, Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict

from ..config import ClipPolicy, FppParams, SamplerKind
from ..estimation.mom import mom_estimate_windows
from ..simulation import create_sampler
from ..simulation.dataset import LabeledDataset
from ..utils.logging import get_logger
from ..utils.rng import row_generators
from .metrics import Predictor

logger = get_logger(__name__)


class EstimatorSummary(BaseModel):
    """Location and spread of repeated estimates.

    Standard deviations use ddof=1 and are None with fewer than two values.
    """

    model_config = ConfigDict(frozen=True)

    n_used: int
    mean_mu: Optional[float] = None
    sd_mu: Optional[float] = None
    median_mu: Optional[float] = None
    mean_beta: Optional[float] = None
    sd_beta: Optional[float] = None
    median_beta: Optional[float] = None


def summarise(estimates: np.ndarray) -> EstimatorSummary:
    """Summary of an (n, 2) array of (mu_hat, beta_hat)."""
    est = np.asarray(estimates, dtype=float).reshape(-1, 2)
    n = est.shape[0]
    if n == 0:
        return EstimatorSummary(n_used=0)
    sd = est.std(axis=0, ddof=1) if n > 1 else (None, None)
    return EstimatorSummary(
        n_used=n,
        mean_mu=float(est[:, 0].mean()),
        sd_mu=None if sd[0] is None else float(sd[0]),
        median_mu=float(np.median(est[:, 0])),
        mean_beta=float(est[:, 1].mean()),
        sd_beta=None if sd[1] is None else float(sd[1]),
        median_beta=float(np.median(est[:, 1])),
    )


class SamplingStudy(BaseModel):
    """Repeated estimation on independent paths at one parameter point."""

    model_config = ConfigDict(frozen=True)

    true_mu: float
    true_beta: float
    n_paths: int
    seq_len: int
    seed: int
    sampler: str
    mom: EstimatorSummary
    mom_invalid: Dict[str, int]
    lstm: Optional[EstimatorSummary] = None


def simulate_windows(
    params: FppParams,
    n_paths: int,
    seq_len: int,
    rng_seed: int,
    sampler: SamplerKind = SamplerKind.KANTER,
) -> np.ndarray:
    """(n_paths, seq_len) inter-arrivals, path i drawn from child i of the seed."""
    smp = create_sampler(sampler)
    return np.stack([smp.sample(params, seq_len, rng) for rng in row_generators(rng_seed, n_paths)])


def sampling_distribution_study(
    true_params: FppParams,
    n_paths: int = 1000,
    seq_len: int = 30,
    model: Optional[Predictor] = None,
    rng_seed: int = 0,
    clip: Optional[ClipPolicy] = None,
    sampler: SamplerKind = SamplerKind.KANTER,
) -> SamplingStudy:
    """Mean and spread of MOM (and optionally LSTM) estimates over many paths.

    MOM statistics use only valid estimates; invalid ones are counted by reason.
    """
    windows = simulate_windows(true_params, n_paths, seq_len, rng_seed, sampler)
    moms = mom_estimate_windows(windows, clip or ClipPolicy())
    cols = moms.to_arrays()
    mom_est = np.stack([cols["mu_hat"], cols["beta_hat"]], axis=1)[cols["valid"]]
    invalid = {k: v for k, v in moms.summary.items() if k not in ("total", "valid", "invalid")}

    lstm = summarise(model.predict(windows)) if model is not None else None
    study = SamplingStudy(
        true_mu=true_params.mu,
        true_beta=true_params.beta,
        n_paths=n_paths,
        seq_len=seq_len,
        seed=rng_seed,
        sampler=SamplerKind(sampler).value,
        mom=summarise(mom_est),
        mom_invalid=invalid,
        lstm=lstm,
    )
    logger.info(
        "sampling_study_finished",
        n_paths=n_paths,
        mom_mean_beta=study.mom.mean_beta,
        mom_sd_beta=study.mom.sd_beta,
        lstm_mean_beta=lstm.mean_beta if lstm else None,
    )
    return study


# --- Per-window tracking ---


class TrackingSummary(BaseModel):
    """How closely predictions follow the MOM labels over a window sequence.

    ``passed`` when, for both parameters, the median absolute deviation of
    predictions from labels is below the labels' interquartile range.
    """

    model_config = ConfigDict(frozen=True)

    n_windows: int
    mad_mu: float
    mad_beta: float
    iqr_mu: float
    iqr_beta: float
    passed: bool


class Trajectory(BaseModel):
    """Per-window labels and predictions, in window order."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    frame: pd.DataFrame
    summary: TrackingSummary

    COLUMNS: ClassVar[List[str]] = ["window", "mu_mom", "beta_mom", "mu_lstm", "beta_lstm"]


def track_windows(model: Predictor, labeled: LabeledDataset) -> Trajectory:
    """Predict every window of a MOM-labelled dataset and compare to its labels."""
    pred = np.asarray(model.predict(labeled.windows), dtype=float)
    labels = labeled.labels
    frame = pd.DataFrame(
        {
            "window": np.arange(labeled.n_samples),
            "mu_mom": labels[:, 0],
            "beta_mom": labels[:, 1],
            "mu_lstm": pred[:, 0],
            "beta_lstm": pred[:, 1],
        }
    )
    mad = np.median(np.abs(pred - labels), axis=0)
    q75, q25 = np.percentile(labels, [75, 25], axis=0)
    iqr = q75 - q25
    summary = TrackingSummary(
        n_windows=labeled.n_samples,
        mad_mu=float(mad[0]),
        mad_beta=float(mad[1]),
        iqr_mu=float(iqr[0]),
        iqr_beta=float(iqr[1]),
        passed=bool(np.all(mad < iqr)),
    )
    logger.info("windows_tracked", **summary.model_dump())
    return Trajectory(frame=frame, summary=summary)
