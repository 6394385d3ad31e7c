"""Adam with bias correction, plus global-norm gradient clipping."""

import math
from typing import Dict, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..errors import NumericalError
from ..utils.logging import get_logger
from .model import PARAM_NAMES, Gradients, LstmWeights

logger = get_logger(__name__)


class AdamState(BaseModel):
    """Moment accumulators and hyper-parameters of Adam.

    Attributes:
        m: First-moment estimates, keyed like the weights.
        v: Second-moment estimates, keyed like the weights.
        step_count: Updates applied so far.
        lr: Step size.
        beta1: First-moment decay.
        beta2: Second-moment decay.
        eps: Denominator offset.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    m: Dict[str, np.ndarray]
    v: Dict[str, np.ndarray]
    step_count: int = Field(default=0, ge=0)
    lr: float = Field(default=1e-3, ge=0.0)
    beta1: float = Field(default=0.9, ge=0.0, lt=1.0)
    beta2: float = Field(default=0.999, ge=0.0, lt=1.0)
    eps: float = Field(default=1e-8, gt=0.0)

    @classmethod
    def zeros(cls, weights: LstmWeights, lr: float = 1e-3, **kwargs) -> "AdamState":
        """Fresh state with zero accumulators shaped like ``weights``."""
        return cls(
            m={n: np.zeros_like(getattr(weights, n)) for n in PARAM_NAMES},
            v={n: np.zeros_like(getattr(weights, n)) for n in PARAM_NAMES},
            lr=lr,
            **kwargs,
        )

    def with_lr(self, lr: float) -> "AdamState":
        return self.model_copy(update={"lr": lr})


def _check_finite(grads: Gradients) -> None:
    bad = [n for n in PARAM_NAMES if not np.all(np.isfinite(getattr(grads, n)))]
    if bad:
        logger.error("adam_nonfinite_gradient", params=bad)
        raise NumericalError(
            f"non-finite gradient in {', '.join(bad)}; update refused",
            diagnostics={"nonfinite_params": bad},
        )


def adam_step(weights: LstmWeights, grads: Gradients, state: AdamState) -> Tuple[LstmWeights, AdamState]:
    """Apply one bias-corrected Adam update.

    ``param -= (lr / bc1) * m / (sqrt(v / bc2) + eps)`` with
    ``bc1 = 1 - beta1**t`` and ``bc2 = 1 - beta2**t``. Inputs are not
    modified; new weights and a new state are returned.

    Raises:
        NumericalError: If any gradient entry is non-finite.
        ValueError: If gradient and weight shapes differ.
    """
    _check_finite(grads)
    t = state.step_count + 1
    bc1 = 1.0 - state.beta1**t
    bc2 = 1.0 - state.beta2**t
    step_size = state.lr / bc1

    new_w: Dict[str, np.ndarray] = {}
    new_m: Dict[str, np.ndarray] = {}
    new_v: Dict[str, np.ndarray] = {}
    for name in PARAM_NAMES:
        p = getattr(weights, name)
        g = getattr(grads, name)
        if g.shape != p.shape:
            raise ValueError(f"gradient for {name} has shape {g.shape}, weight has {p.shape}")
        m = state.beta1 * state.m[name] + (1.0 - state.beta1) * g
        v = state.beta2 * state.v[name] + (1.0 - state.beta2) * (g * g)
        new_w[name] = p - step_size * m / (np.sqrt(v / bc2) + state.eps)
        new_m[name], new_v[name] = m, v

    return (
        LstmWeights.from_dict(new_w, validate=False),
        state.model_copy(update={"m": new_m, "v": new_v, "step_count": t}),
    )


def clip_grad_norm(grads: Gradients, max_norm: float) -> Tuple[Gradients, float]:
    """Scale gradients so their global norm is at most ``max_norm``.

    Returns:
        (possibly rescaled gradients, norm before clipping).
    """
    norm = grads.global_norm()
    if not math.isfinite(norm) or norm <= max_norm:
        return grads, norm
    scale = max_norm / norm
    return LstmWeights.from_dict({n: a * scale for n, a in grads.as_dict().items()}, validate=False), norm
