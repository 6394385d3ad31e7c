"""Mini-batch Adam training of the LSTM regressor."""

import math
import time
from pathlib import Path
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..config import ModelConfig, TrainSpec
from ..errors import ConfigError, NumericalError
from ..neural.model import LstmModel, init_weights, loss_and_grads, loss_mse, predict
from ..neural.optim import AdamState, adam_step, clip_grad_norm
from ..simulation.dataset import LabeledDataset, load_dataset
from ..utils.logging import get_logger
from ..utils.rng import derive_seed, make_generator

logger = get_logger(__name__)


class LossCurves(BaseModel):
    """Per-epoch losses (epochs numbered from 1).

    With ``val_fraction=0`` there are no validation rows; ``val_loss`` then
    repeats the training loss and selects the best epoch from it.
    """

    model_config = ConfigDict(frozen=True)

    train_loss: List[float]
    val_loss: List[float]

    @property
    def epochs(self) -> int:
        return len(self.train_loss)

    @property
    def best_epoch(self) -> int:
        """Epoch with the lowest validation loss (first one on ties)."""
        return int(np.argmin(self.val_loss)) + 1

    @property
    def best_val_loss(self) -> float:
        return float(min(self.val_loss))


class DataSplit(BaseModel):
    """Row indices of the train/validation/test partitions."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    fit: np.ndarray
    val: np.ndarray
    test: np.ndarray

    @property
    def train(self) -> np.ndarray:
        """Fit and validation rows together (everything not in test)."""
        return np.sort(np.concatenate([self.fit, self.val]))


class TrainResult(BaseModel):
    """Everything a training run produces."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    model: LstmModel
    best_model: LstmModel
    curves: LossCurves
    optimizer: AdamState
    split: DataSplit
    wall_clock_train: float = Field(ge=0.0)


def split_dataset(n_rows: int, split_fraction: float, val_fraction: float, seed: int) -> DataSplit:
    """Shuffle rows into disjoint fit, validation and test sets.

    Raises:
        ConfigError: If any required partition would be empty.
    """
    perm = make_generator(derive_seed(seed, "split")).permutation(n_rows)
    n_train = int(math.floor(n_rows * split_fraction))
    if n_train < 1 or n_train >= n_rows:
        raise ConfigError(f"split_fraction={split_fraction} leaves an empty partition for {n_rows} rows")
    train_rows, test_rows = perm[:n_train], perm[n_train:]
    n_val = int(math.ceil(n_train * val_fraction)) if val_fraction > 0.0 else 0
    if n_val >= n_train:
        raise ConfigError(f"val_fraction={val_fraction} leaves no rows to fit on")
    return DataSplit(fit=train_rows[n_val:], val=train_rows[:n_val], test=test_rows)


def _diverged(epoch: int, batch: int, loss: float, grad_norm: Optional[float] = None) -> NumericalError:
    diagnostics = {"epoch": epoch, "batch": batch, "loss": loss, "grad_norm": grad_norm}
    logger.error("training_diverged", **diagnostics)
    return NumericalError(f"training diverged at epoch {epoch}, batch {batch} (loss={loss})", diagnostics)


def train(
    spec: TrainSpec,
    config: ModelConfig,
    dataset: Optional[LabeledDataset] = None,
) -> TrainResult:
    """Train a regressor on a labelled dataset.

    Args:
        spec: Training protocol. ``spec.dataset`` is loaded when ``dataset``
            is not given.
        config: Architecture; ``config.seed`` fixes the initial weights.
        dataset: In-memory dataset.

    Returns:
        Final and best-validation models, loss curves, optimiser state and
        the row split (test rows are never touched here).

    Raises:
        ConfigError: If no dataset is available or the split is degenerate.
        NumericalError: If a loss or gradient becomes non-finite.
    """
    if dataset is None:
        if spec.dataset is None:
            raise ConfigError("train needs a dataset or spec.dataset")
        dataset = load_dataset(Path(spec.dataset))

    split = split_dataset(dataset.n_samples, spec.split_fraction, spec.val_fraction, spec.shuffle_seed)
    x_fit, y_fit = dataset.windows[split.fit], dataset.labels[split.fit]
    x_val, y_val = dataset.windows[split.val], dataset.labels[split.val]

    weights = init_weights(config)
    state = AdamState.zeros(weights, lr=spec.lr)
    best_weights, best_val = weights, math.inf
    train_curve: List[float] = []
    val_curve: List[float] = []

    logger.info(
        "training_started",
        n_fit=len(split.fit),
        n_val=len(split.val),
        n_test=len(split.test),
        epochs=spec.epochs,
        lr=spec.lr,
        batch_size=spec.batch_size,
    )
    t0 = time.perf_counter()
    n_fit = len(split.fit)
    for epoch in range(1, spec.epochs + 1):
        order = make_generator(derive_seed(spec.shuffle_seed, "epoch", epoch)).permutation(n_fit)
        total = 0.0
        for b, start in enumerate(range(0, n_fit, spec.batch_size)):
            rows = order[start:start + spec.batch_size]
            loss, grads = loss_and_grads(weights, config, x_fit[rows], y_fit[rows], threads=spec.threads)
            if not math.isfinite(loss):
                raise _diverged(epoch, b, loss)
            grad_norm = None
            if config.grad_clip_norm is not None:
                grads, grad_norm = clip_grad_norm(grads, config.grad_clip_norm)
            try:
                weights, state = adam_step(weights, grads, state)
            except NumericalError as e:
                raise _diverged(epoch, b, loss, grad_norm) from e
            total += loss * len(rows)

        train_loss = total / n_fit
        val_loss = loss_mse(predict(weights, config, x_val), y_val) if len(x_val) else train_loss
        if not math.isfinite(val_loss):
            raise _diverged(epoch, -1, val_loss)
        train_curve.append(train_loss)
        val_curve.append(val_loss)
        if val_loss < best_val:
            best_val, best_weights = val_loss, weights

        if epoch % spec.early_metrics_cadence == 0 or epoch == spec.epochs:
            logger.info("epoch_finished", epoch=epoch, train_loss=train_loss, val_loss=val_loss)

    elapsed = time.perf_counter() - t0
    curves = LossCurves(train_loss=train_curve, val_loss=val_curve)
    logger.info("training_finished", seconds=elapsed, best_epoch=curves.best_epoch, best_val_loss=curves.best_val_loss)
    return TrainResult(
        model=LstmModel(config=config, weights=weights),
        best_model=LstmModel(config=config, weights=best_weights),
        curves=curves,
        optimizer=state,
        split=split,
        wall_clock_train=elapsed,
    )


def held_out_set(dataset: LabeledDataset, result: TrainResult) -> LabeledDataset:
    """The held-out rows of ``dataset`` for a finished run."""
    return dataset.subset(result.split.test)


def train_test_sets(dataset: LabeledDataset, split: DataSplit) -> Tuple[LabeledDataset, LabeledDataset]:
    """(train incl. validation, test) subsets for a split."""
    return dataset.subset(split.train), dataset.subset(split.test)
