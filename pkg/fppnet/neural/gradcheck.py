"""Central finite-difference audit of the analytic gradients."""

from typing import Dict, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict

from ..config import ModelConfig
from ..utils.logging import get_logger
from ..utils.rng import make_generator
from .model import PARAM_NAMES, LstmWeights, backward, forward_batch, loss_mse

logger = get_logger(__name__)


class GradCheckReport(BaseModel):
    """Outcome of :func:`gradient_check`.

    Attributes:
        max_rel_error: Largest relative error over all checked coordinates.
        per_param: Largest relative error per tensor.
        n_checked: Coordinates compared.
        n_skipped: Coordinates skipped because a ReLU changed side.
        passed: ``max_rel_error < tolerance``.
    """

    model_config = ConfigDict(frozen=True)

    max_rel_error: float
    per_param: Dict[str, float]
    n_checked: int
    n_skipped: int
    tolerance: float
    passed: bool


def _loss_and_mask(weights: LstmWeights, config: ModelConfig, windows: np.ndarray, labels: np.ndarray):
    pred, cache = forward_batch(weights, config, windows)
    return loss_mse(pred, labels), cache.a1 > 0.0


def gradient_check(
    weights: LstmWeights,
    config: ModelConfig,
    windows: np.ndarray,
    labels: np.ndarray,
    coords_per_param: Optional[int] = 5,
    step: float = 1e-5,
    tolerance: float = 1e-4,
    rng_seed: int = 0,
    abs_floor: float = 1e-6,
) -> GradCheckReport:
    """Compare backward-pass gradients with central differences.

    Relative error is ``|a - n| / max(|a|, |n|, abs_floor)``. Coordinates whose
    perturbation flips a dense-layer ReLU are skipped because the loss is not
    differentiable there.

    Args:
        weights: Point at which to check.
        config: Model configuration.
        windows: (batch, seq_len) inputs.
        labels: (batch, 2) targets.
        coords_per_param: Random coordinates sampled per tensor; None checks all.
        step: Finite-difference step h.
        tolerance: Pass threshold on the relative error.
        rng_seed: Seed for coordinate sampling.
        abs_floor: Denominator floor for near-zero gradients.
    """
    windows = np.asarray(windows, dtype=float)
    labels = np.asarray(labels, dtype=float)
    _, cache = forward_batch(weights, config, windows)
    analytic = backward(weights, config, cache, labels)
    base_mask = cache.a1 > 0.0

    rng = make_generator(rng_seed)
    tensors = {n: a.copy() for n, a in weights.as_dict().items()}
    per_param: Dict[str, float] = {}
    checked = skipped = 0

    for name in PARAM_NAMES:
        arr = tensors[name]
        size = arr.size
        if coords_per_param is None or coords_per_param >= size:
            flat_idx = np.arange(size)
        else:
            flat_idx = rng.choice(size, size=coords_per_param, replace=False)

        worst = 0.0
        grad_flat = getattr(analytic, name).ravel()
        for k in flat_idx:
            idx = np.unravel_index(int(k), arr.shape)
            original = arr[idx]

            arr[idx] = original + step
            plus, mask_p = _loss_and_mask(LstmWeights.from_dict(tensors, validate=False), config, windows, labels)
            arr[idx] = original - step
            minus, mask_m = _loss_and_mask(LstmWeights.from_dict(tensors, validate=False), config, windows, labels)
            arr[idx] = original

            if not (np.array_equal(mask_p, base_mask) and np.array_equal(mask_m, base_mask)):
                skipped += 1
                continue

            numeric = (plus - minus) / (2.0 * step)
            a = float(grad_flat[k])
            rel = abs(a - numeric) / max(abs(a), abs(numeric), abs_floor)
            worst = max(worst, rel)
            checked += 1
        per_param[name] = worst

    max_rel = max(per_param.values()) if per_param else 0.0
    report = GradCheckReport(
        max_rel_error=max_rel,
        per_param=per_param,
        n_checked=checked,
        n_skipped=skipped,
        tolerance=tolerance,
        passed=max_rel < tolerance,
    )
    logger.debug("gradient_checked", max_rel_error=max_rel, n_checked=checked, n_skipped=skipped)
    return report
