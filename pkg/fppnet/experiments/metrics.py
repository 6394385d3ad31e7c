"""Regression metrics and evaluation reports."""

import math
import time
from typing import Optional, Protocol, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from ..errors import DomainError
from ..simulation.dataset import LabeledDataset
from ..utils.logging import get_logger

logger = get_logger(__name__)


class Predictor(Protocol):
    """Anything mapping an (n, seq_len) window matrix to (n, 2) estimates."""

    def predict(self, windows: np.ndarray) -> np.ndarray: ...


class MetricSet(BaseModel):
    """MSE, RMSE, MAE and R^2 of one target (or of both pooled)."""

    model_config = ConfigDict(frozen=True)

    mse: float
    rmse: float
    mae: float
    r2: float


class EvalReport(BaseModel):
    """Test-set metrics of a predictor.

    ``overall`` pools both parameters on their raw scales; ``mu`` and ``beta``
    are per-parameter. R^2 of the pooled set uses the per-column label means.
    """

    model_config = ConfigDict(frozen=True)

    overall: MetricSet
    mu: MetricSet
    beta: MetricSet
    n_test: int
    wall_clock_train: Optional[float] = None
    wall_clock_infer_per_batch: float = 0.0


def _r2(ss_res: float, ss_tot: float) -> float:
    # Constant targets: a perfect fit scores 1, anything else 0.
    if ss_tot == 0.0:
        return 1.0 if ss_res == 0.0 else 0.0
    return 1.0 - ss_res / ss_tot


def _metric_set(err: np.ndarray, centred: np.ndarray) -> MetricSet:
    mse = float(np.mean(err * err))
    return MetricSet(
        mse=mse,
        rmse=math.sqrt(mse),
        mae=float(np.mean(np.abs(err))),
        r2=_r2(float(np.sum(err * err)), float(np.sum(centred * centred))),
    )


def compute_metrics(pred: np.ndarray, labels: np.ndarray) -> Tuple[MetricSet, MetricSet, MetricSet]:
    """(overall, mu, beta) metric sets.

    Raises:
        DomainError: On shape mismatch or an empty set.
    """
    pred = np.asarray(pred, dtype=float)
    labels = np.asarray(labels, dtype=float)
    if pred.shape != labels.shape or pred.ndim != 2 or pred.shape[1] != 2:
        raise DomainError(f"expected matching (n, 2) arrays, got {pred.shape} and {labels.shape}")
    if pred.shape[0] == 0:
        raise DomainError("cannot compute metrics on an empty set")

    err = pred - labels
    centred = labels - labels.mean(axis=0)
    overall = _metric_set(err, centred)
    return overall, _metric_set(err[:, 0], centred[:, 0]), _metric_set(err[:, 1], centred[:, 1])


def evaluate(
    model: Predictor,
    test_set: LabeledDataset,
    batch_size: int = 64,
    wall_clock_train: Optional[float] = None,
) -> EvalReport:
    """Score ``model`` on ``test_set``.

    Inference is timed batch by batch; the report carries the mean time per
    batch of ``batch_size`` rows.

    Raises:
        DomainError: If the test set is empty.
    """
    if test_set.n_samples == 0:
        raise DomainError("test set is empty")

    parts = []
    elapsed = 0.0
    n_batches = 0
    for start in range(0, test_set.n_samples, batch_size):
        chunk = test_set.windows[start:start + batch_size]
        t0 = time.perf_counter()
        parts.append(np.asarray(model.predict(chunk), dtype=float))
        elapsed += time.perf_counter() - t0
        n_batches += 1
    pred = np.concatenate(parts, axis=0)

    overall, mu, beta = compute_metrics(pred, test_set.labels)
    report = EvalReport(
        overall=overall,
        mu=mu,
        beta=beta,
        n_test=test_set.n_samples,
        wall_clock_train=wall_clock_train,
        wall_clock_infer_per_batch=elapsed / n_batches,
    )
    logger.info("model_evaluated", n_test=report.n_test, mse=overall.mse, rmse=overall.rmse, r2=overall.r2)
    return report
