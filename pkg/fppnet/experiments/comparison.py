"""LSTM against the method-of-moments baseline on identical windows."""

import statistics
import time
from typing import Callable, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict

from ..config import ClipPolicy
from ..estimation.mom import mom_estimate_windows
from ..simulation.dataset import LabeledDataset
from ..utils.logging import get_logger
from .metrics import MetricSet, Predictor, compute_metrics

logger = get_logger(__name__)

MIN_TIMING_REPEATS = 20


class TimingReport(BaseModel):
    """Median wall-clock seconds to estimate one batch of windows."""

    model_config = ConfigDict(frozen=True)

    n_rows: int
    repeats: int
    lstm_seconds: float
    mom_seconds: float

    @property
    def ratio(self) -> float:
        """How many times faster the LSTM is (mom / lstm)."""
        return self.mom_seconds / self.lstm_seconds if self.lstm_seconds > 0 else float("inf")

    @property
    def lstm_faster(self) -> bool:
        return self.ratio > 1.0


class ComparisonReport(BaseModel):
    """Pooled and per-parameter errors of both estimators.

    MOM errors cover only rows where the MOM estimate is valid; the LSTM is
    scored both on all rows and on that same subset. ``improvement`` is
    ``1 - mse_lstm / mse_mom`` on the shared subset.
    """

    model_config = ConfigDict(frozen=True)

    n_test: int
    n_mom_valid: int
    mom_invalid: Dict[str, int]
    lstm_all: MetricSet
    lstm: Optional[MetricSet] = None
    mom: Optional[MetricSet] = None
    lstm_mu: Optional[MetricSet] = None
    lstm_beta: Optional[MetricSet] = None
    mom_mu: Optional[MetricSet] = None
    mom_beta: Optional[MetricSet] = None
    improvement: Optional[float] = None
    baseline_failed: bool = False
    timing: Optional[TimingReport] = None

    @property
    def mse_lstm(self) -> float:
        return (self.lstm or self.lstm_all).mse

    @property
    def mse_mom(self) -> Optional[float]:
        return self.mom.mse if self.mom else None

    def to_json(self) -> Dict:
        data = self.model_dump(mode="json")
        data["mse_lstm"] = self.mse_lstm
        data["mse_mom"] = self.mse_mom
        if self.timing is not None:
            data["timing"]["ratio"] = self.timing.ratio
            data["timing"]["lstm_faster"] = self.timing.lstm_faster
        return data


def _median_seconds(fn: Callable[[], object], repeats: int) -> float:
    samples: List[float] = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - t0)
    return statistics.median(samples)


def time_estimators(
    model: Predictor,
    windows: np.ndarray,
    clip: Optional[ClipPolicy] = None,
    repeats: int = MIN_TIMING_REPEATS,
) -> TimingReport:
    """Median time of batched LSTM inference and of MOM on the same windows."""
    repeats = max(repeats, MIN_TIMING_REPEATS)
    clip = clip or ClipPolicy()
    lstm_s = _median_seconds(lambda: model.predict(windows), repeats)
    mom_s = _median_seconds(lambda: mom_estimate_windows(windows, clip), repeats)
    report = TimingReport(n_rows=int(windows.shape[0]), repeats=repeats, lstm_seconds=lstm_s, mom_seconds=mom_s)
    logger.info("estimators_timed", n_rows=report.n_rows, lstm_s=lstm_s, mom_s=mom_s, ratio=report.ratio)
    if not report.lstm_faster:
        logger.warning("lstm_not_faster_than_mom", ratio=report.ratio)
    return report


def compare_with_mom(
    model: Predictor,
    test_set: LabeledDataset,
    clip: Optional[ClipPolicy] = None,
    timing_repeats: Optional[int] = MIN_TIMING_REPEATS,
    timing_rows: Optional[int] = None,
) -> ComparisonReport:
    """Score the LSTM and the MOM estimator on the same test windows.

    Args:
        model: Trained predictor.
        test_set: Held-out labelled windows.
        clip: MOM guards.
        timing_repeats: Repetitions for timing (at least 20); None skips timing.
        timing_rows: Time on the first rows only; defaults to the whole set.

    Returns:
        A :class:`ComparisonReport`. When no MOM estimate is valid,
        ``baseline_failed`` is set and the MOM fields stay empty.
    """
    clip = clip or ClipPolicy()
    windows, labels = test_set.windows, test_set.labels
    pred = np.asarray(model.predict(windows), dtype=float)
    lstm_all, _, _ = compute_metrics(pred, labels)

    moms = mom_estimate_windows(windows, clip)
    cols = moms.to_arrays()
    valid = cols["valid"]
    summary = moms.summary
    invalid = {k: v for k, v in summary.items() if k not in ("total", "valid", "invalid")}

    fields: Dict = {"n_test": test_set.n_samples, "n_mom_valid": int(valid.sum()), "mom_invalid": invalid, "lstm_all": lstm_all}
    if not valid.any():
        logger.warning("mom_baseline_failed", n_test=test_set.n_samples, **invalid)
        fields["baseline_failed"] = True
    else:
        mom_pred = np.stack([cols["mu_hat"], cols["beta_hat"]], axis=1)[valid]
        lstm, lstm_mu, lstm_beta = compute_metrics(pred[valid], labels[valid])
        mom, mom_mu, mom_beta = compute_metrics(mom_pred, labels[valid])
        fields.update(
            lstm=lstm, lstm_mu=lstm_mu, lstm_beta=lstm_beta,
            mom=mom, mom_mu=mom_mu, mom_beta=mom_beta,
            improvement=1.0 - lstm.mse / mom.mse if mom.mse > 0 else None,
        )

    if timing_repeats is not None:
        timed = windows if timing_rows is None else windows[:timing_rows]
        fields["timing"] = time_estimators(model, timed, clip, timing_repeats)

    report = ComparisonReport(**fields)
    logger.info(
        "comparison_finished",
        mse_lstm=report.mse_lstm,
        mse_mom=report.mse_mom,
        improvement=report.improvement,
        n_mom_valid=report.n_mom_valid,
    )
    return report
