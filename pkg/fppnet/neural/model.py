"""Single-layer LSTM regressor for (mu, beta), written directly in numpy.

Per time step, with x_t the (optionally log-transformed, optionally
ReLU-activated) scalar input:

    i_t = sigmoid(W_ii x_t + b_ii + W_hi h_{t-1} + b_hi)
    f_t = sigmoid(W_if x_t + b_if + W_hf h_{t-1} + b_hf)
    g_t = tanh(W_ig x_t + b_ig + W_hg h_{t-1} + b_hg)
    o_t = sigmoid(W_io x_t + b_io + W_ho h_{t-1} + b_ho)
    c_t = f_t * c_{t-1} + i_t * g_t
    h_t = o_t * tanh(c_t)

The final hidden state goes through a ReLU dense layer and a linear layer with
two outputs; softplus gives mu > 0 and sigmoid gives beta in (0, 1).

Weights are kept per gate; the four gates are stacked into one matrix product
per step inside :func:`forward_batch`.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.special import expit

from ..config import InputActivation, ModelConfig
from ..errors import DomainError
from ..utils.logging import get_logger
from ..utils.rng import make_generator

logger = get_logger(__name__)

GATES = ("i", "f", "g", "o")

# Serialisation order of every parameter tensor.
PARAM_NAMES: Tuple[str, ...] = (
    "W_ii", "W_if", "W_ig", "W_io",
    "W_hi", "W_hf", "W_hg", "W_ho",
    "b_ii", "b_hi", "b_if", "b_hf", "b_ig", "b_hg", "b_io", "b_ho",
    "fc1_w", "fc1_b", "fc2_w", "fc2_b",
)

_TINY = float(np.finfo(float).tiny)
_BETA_EPS = float(np.finfo(float).eps)


def param_shapes(config: ModelConfig) -> Dict[str, Tuple[int, ...]]:
    """Expected shape of every parameter for ``config``."""
    h, d, f, o = config.hidden_dim, config.input_dim, config.fc_dim, config.output_dim
    shapes: Dict[str, Tuple[int, ...]] = {}
    for gate in GATES:
        shapes[f"W_i{gate}"] = (h, d)
        shapes[f"W_h{gate}"] = (h, h)
        shapes[f"b_i{gate}"] = (h,)
        shapes[f"b_h{gate}"] = (h,)
    shapes.update({"fc1_w": (f, h), "fc1_b": (f,), "fc2_w": (o, f), "fc2_b": (o,)})
    return {name: shapes[name] for name in PARAM_NAMES}


class LstmWeights(BaseModel):
    """All trainable tensors of the regressor.

    The same type carries gradients (see :func:`backward`).
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    W_ii: np.ndarray
    W_if: np.ndarray
    W_ig: np.ndarray
    W_io: np.ndarray
    W_hi: np.ndarray
    W_hf: np.ndarray
    W_hg: np.ndarray
    W_ho: np.ndarray
    b_ii: np.ndarray
    b_hi: np.ndarray
    b_if: np.ndarray
    b_hf: np.ndarray
    b_ig: np.ndarray
    b_hg: np.ndarray
    b_io: np.ndarray
    b_ho: np.ndarray
    fc1_w: np.ndarray
    fc1_b: np.ndarray
    fc2_w: np.ndarray
    fc2_b: np.ndarray

    @model_validator(mode="after")
    def _consistent(self) -> "LstmWeights":
        h = self.W_hi.shape[0]
        f = self.fc1_w.shape[0]
        expected = param_shapes(
            ModelConfig.model_construct(hidden_dim=h, fc_dim=f, input_dim=1, output_dim=2)
        )
        for name in PARAM_NAMES:
            arr = getattr(self, name)
            if arr.shape != expected[name]:
                raise ValueError(f"{name} has shape {arr.shape}, expected {expected[name]}")
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} contains non-finite entries")
        return self

    @classmethod
    def from_dict(cls, tensors: Dict[str, np.ndarray], validate: bool = True) -> "LstmWeights":
        values = {name: np.asarray(tensors[name], dtype=float) for name in PARAM_NAMES}
        return cls(**values) if validate else cls.model_construct(**values)

    def as_dict(self) -> Dict[str, np.ndarray]:
        """Tensors keyed by name, in :data:`PARAM_NAMES` order."""
        return {name: getattr(self, name) for name in PARAM_NAMES}

    @property
    def hidden_dim(self) -> int:
        return int(self.W_hi.shape[0])

    @property
    def fc_dim(self) -> int:
        return int(self.fc1_w.shape[0])

    @property
    def n_params(self) -> int:
        return sum(getattr(self, name).size for name in PARAM_NAMES)

    def global_norm(self) -> float:
        """Euclidean norm over every entry."""
        return math.sqrt(sum(float(np.sum(getattr(self, n) ** 2)) for n in PARAM_NAMES))

    def copy(self) -> "LstmWeights":
        return LstmWeights.from_dict({n: a.copy() for n, a in self.as_dict().items()}, validate=False)


Gradients = LstmWeights


class Prediction(BaseModel):
    """One (mu, beta) estimate."""

    model_config = ConfigDict(frozen=True)

    mu_hat: float = Field(gt=0.0)
    beta_hat: float = Field(gt=0.0, lt=1.0)


class Cache(BaseModel):
    """Per-step activations of one forward pass, consumed by :func:`backward`.

    Time-indexed arrays have shape (T, B, H); ``h`` and ``c`` include the zero
    initial state at index 0 and so have T + 1 entries.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    hidden_dim: int
    inputs: np.ndarray
    i: np.ndarray
    f: np.ndarray
    g: np.ndarray
    o: np.ndarray
    c: np.ndarray
    h: np.ndarray
    tanh_c: np.ndarray
    a1: np.ndarray
    r1: np.ndarray
    a2: np.ndarray
    pred: np.ndarray

    @property
    def batch_size(self) -> int:
        return int(self.inputs.shape[0])

    @property
    def seq_len(self) -> int:
        return int(self.inputs.shape[1])


def init_weights(config: ModelConfig) -> LstmWeights:
    """Uniform initialisation in [-k, k], k = 1/sqrt(hidden_dim).

    Every tensor, biases and dense layers included, is drawn from one PCG64
    stream seeded with ``config.seed`` in :data:`PARAM_NAMES` order.
    """
    k = 1.0 / math.sqrt(config.hidden_dim)
    rng = make_generator(config.seed)
    tensors = {name: rng.uniform(-k, k, size=shape) for name, shape in param_shapes(config).items()}
    return LstmWeights.from_dict(tensors)


def _stacked(weights: LstmWeights) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    wx = np.concatenate([getattr(weights, f"W_i{g}")[:, 0] for g in GATES])
    wh = np.concatenate([getattr(weights, f"W_h{g}") for g in GATES], axis=0)
    b = np.concatenate([getattr(weights, f"b_i{g}") + getattr(weights, f"b_h{g}") for g in GATES])
    return wx, wh, b


def prepare_inputs(config: ModelConfig, windows: np.ndarray) -> np.ndarray:
    """Validate a window batch and apply the configured input transforms.

    Raises:
        DomainError: On non-finite values, a wrong rank, or non-positive
            values when ``log_inputs`` is set.
    """
    x = np.asarray(windows, dtype=float)
    if x.ndim == 1:
        x = x[None, :]
    if x.ndim != 2 or x.shape[1] < 1:
        raise DomainError(f"expected a (batch, seq_len) array with seq_len >= 1, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise DomainError("input sequence contains non-finite values")
    if config.log_inputs:
        if np.any(x <= 0.0):
            raise DomainError("log_inputs requires strictly positive inputs")
        x = np.log(x)
    if config.input_activation is InputActivation.RELU:
        x = np.maximum(x, 0.0)
    return x


def _head(weights: LstmWeights, h_last: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    a1 = h_last @ weights.fc1_w.T + weights.fc1_b
    r1 = np.maximum(a1, 0.0)
    a2 = r1 @ weights.fc2_w.T + weights.fc2_b
    mu = np.maximum(np.logaddexp(0.0, a2[:, 0]), _TINY)
    beta = np.clip(expit(a2[:, 1]), _BETA_EPS, 1.0 - _BETA_EPS)
    return a1, r1, a2, np.stack([mu, beta], axis=1)


def forward_batch(
    weights: LstmWeights, config: ModelConfig, windows: np.ndarray, keep_cache: bool = True
) -> Tuple[np.ndarray, Optional[Cache]]:
    """Run the network on a (batch, seq_len) matrix.

    Args:
        weights: Model parameters.
        config: Architecture and input options.
        windows: Raw inter-arrival windows; any seq_len >= 1.
        keep_cache: Store per-step activations for :func:`backward`.

    Returns:
        ((batch, 2) array of (mu_hat, beta_hat), cache or None).
    """
    x = prepare_inputs(config, windows)
    n, steps = x.shape
    hid = weights.hidden_dim
    wx, wh, b = _stacked(weights)

    h = np.zeros((n, hid))
    c = np.zeros((n, hid))
    if keep_cache:
        hs = np.zeros((steps + 1, n, hid))
        cs = np.zeros((steps + 1, n, hid))
        gates = np.zeros((4, steps, n, hid))
        tanh_cs = np.zeros((steps, n, hid))

    for t in range(steps):
        z = x[:, t, None] * wx + h @ wh.T + b
        i = expit(z[:, :hid])
        f = expit(z[:, hid:2 * hid])
        g = np.tanh(z[:, 2 * hid:3 * hid])
        o = expit(z[:, 3 * hid:])
        c = f * c + i * g
        tc = np.tanh(c)
        h = o * tc
        if keep_cache:
            gates[0, t], gates[1, t], gates[2, t], gates[3, t] = i, f, g, o
            cs[t + 1], hs[t + 1], tanh_cs[t] = c, h, tc

    a1, r1, a2, pred = _head(weights, h)
    if not keep_cache:
        return pred, None
    cache = Cache(
        hidden_dim=hid, inputs=x,
        i=gates[0], f=gates[1], g=gates[2], o=gates[3],
        c=cs, h=hs, tanh_c=tanh_cs,
        a1=a1, r1=r1, a2=a2, pred=pred,
    )
    return pred, cache


def forward(weights: LstmWeights, config: ModelConfig, sequence: Sequence[float]) -> Tuple[Prediction, Cache]:
    """Forward pass for one sequence.

    Raises:
        DomainError: If the sequence is empty or contains non-finite values.
    """
    seq = np.asarray(sequence, dtype=float)
    if seq.ndim != 1:
        raise DomainError(f"expected a 1-D sequence, got shape {seq.shape}")
    pred, cache = forward_batch(weights, config, seq[None, :])
    return Prediction(mu_hat=float(pred[0, 0]), beta_hat=float(pred[0, 1])), cache


def predict(weights: LstmWeights, config: ModelConfig, windows: np.ndarray, batch_size: int = 4096) -> np.ndarray:
    """(n, 2) predictions without keeping activations."""
    windows = np.asarray(windows, dtype=float)
    if windows.ndim == 1:
        windows = windows[None, :]
    if windows.shape[0] == 0:
        return np.zeros((0, 2))
    parts = [
        forward_batch(weights, config, windows[s:s + batch_size], keep_cache=False)[0]
        for s in range(0, windows.shape[0], batch_size)
    ]
    return np.concatenate(parts, axis=0)


def loss_mse(pred_batch: np.ndarray, label_batch: np.ndarray) -> float:
    """Mean squared error over rows and both output coordinates.

    Raises:
        DomainError: On shape mismatch.
    """
    pred = np.asarray(pred_batch, dtype=float)
    label = np.asarray(label_batch, dtype=float)
    if pred.shape != label.shape:
        raise DomainError(f"prediction shape {pred.shape} != label shape {label.shape}")
    if pred.size == 0:
        raise DomainError("loss of an empty batch is undefined")
    diff = pred - label
    return float(np.mean(diff * diff))


def backward(
    weights: LstmWeights,
    config: ModelConfig,
    cache: Cache,
    label: np.ndarray,
    total_rows: Optional[int] = None,
) -> Gradients:
    """Gradients of :func:`loss_mse` through time for every parameter.

    Args:
        weights: The parameters the cache was produced with.
        config: Model configuration (kept for signature symmetry with forward).
        cache: Output of :func:`forward_batch` / :func:`forward`.
        label: (batch, 2) or (2,) targets.
        total_rows: Rows of the full batch when ``cache`` covers one shard of
            it; the loss is normalised by this count. Defaults to the cache's
            own batch size.

    Returns:
        Gradients with the same structure as ``weights``. The softplus floor
        and sigmoid clip of the output are treated as identity.

    Raises:
        DomainError: If the cache does not match ``weights`` or ``label``.
    """
    label = np.asarray(label, dtype=float)
    if label.ndim == 1:
        label = label[None, :]
    hid = weights.hidden_dim
    if cache.hidden_dim != hid or cache.h.shape[2] != hid:
        raise DomainError(f"stale cache: hidden size {cache.hidden_dim} does not match weights ({hid})")
    if label.shape != cache.pred.shape:
        raise DomainError(f"label shape {label.shape} does not match cached predictions {cache.pred.shape}")

    rows = total_rows or cache.batch_size
    dpred = (cache.pred - label) / rows

    s = expit(cache.a2)
    da2 = np.empty_like(dpred)
    da2[:, 0] = dpred[:, 0] * s[:, 0]
    da2[:, 1] = dpred[:, 1] * s[:, 1] * (1.0 - s[:, 1])

    h_last = cache.h[-1]
    grads: Dict[str, np.ndarray] = {
        "fc2_w": da2.T @ cache.r1,
        "fc2_b": da2.sum(axis=0),
    }
    da1 = (da2 @ weights.fc2_w) * (cache.a1 > 0.0)
    grads["fc1_w"] = da1.T @ h_last
    grads["fc1_b"] = da1.sum(axis=0)

    _, wh, _ = _stacked(weights)
    dwx = np.zeros(4 * hid)
    dwh = np.zeros((4 * hid, hid))
    db = np.zeros(4 * hid)

    dh = da1 @ weights.fc1_w
    dc = np.zeros_like(dh)
    x = cache.inputs
    for t in range(cache.seq_len - 1, -1, -1):
        i, f, g, o, tc = cache.i[t], cache.f[t], cache.g[t], cache.o[t], cache.tanh_c[t]
        do = dh * tc
        dc = dc + dh * o * (1.0 - tc * tc)
        dz = np.concatenate(
            [
                dc * g * i * (1.0 - i),
                dc * cache.c[t] * f * (1.0 - f),
                dc * i * (1.0 - g * g),
                do * o * (1.0 - o),
            ],
            axis=1,
        )
        dwx += dz.T @ x[:, t]
        dwh += dz.T @ cache.h[t]
        db += dz.sum(axis=0)
        dh = dz @ wh
        dc = dc * f

    for k, gate in enumerate(GATES):
        rows_k = slice(k * hid, (k + 1) * hid)
        grads[f"W_i{gate}"] = dwx[rows_k][:, None]
        grads[f"W_h{gate}"] = dwh[rows_k]
        grads[f"b_i{gate}"] = db[rows_k].copy()
        grads[f"b_h{gate}"] = db[rows_k].copy()

    return LstmWeights.from_dict(grads, validate=False)


def _add_grads(total: Dict[str, np.ndarray], part: LstmWeights) -> None:
    for name in PARAM_NAMES:
        total[name] += getattr(part, name)


def loss_and_grads(
    weights: LstmWeights,
    config: ModelConfig,
    windows: np.ndarray,
    labels: np.ndarray,
    threads: int = 1,
) -> Tuple[float, Gradients]:
    """Batch loss and its gradient.

    With ``threads > 1`` the batch is split into contiguous shards processed
    concurrently; shard gradients are summed in shard order, so the result is
    deterministic for a fixed thread count.
    """
    windows = np.asarray(windows, dtype=float)
    labels = np.asarray(labels, dtype=float)
    n = windows.shape[0]
    shards = min(max(threads, 1), n)

    if shards <= 1:
        pred, cache = forward_batch(weights, config, windows)
        return loss_mse(pred, labels), backward(weights, config, cache, labels)

    bounds = np.linspace(0, n, shards + 1).astype(int)

    def run(k: int) -> Tuple[np.ndarray, LstmWeights]:
        lo, hi = bounds[k], bounds[k + 1]
        pred, cache = forward_batch(weights, config, windows[lo:hi])
        return pred, backward(weights, config, cache, labels[lo:hi], total_rows=n)

    with ThreadPoolExecutor(max_workers=shards) as pool:
        results: List[Tuple[np.ndarray, LstmWeights]] = list(pool.map(run, range(shards)))

    total = {name: np.zeros_like(getattr(weights, name)) for name in PARAM_NAMES}
    for _, part in results:
        _add_grads(total, part)
    pred = np.concatenate([p for p, _ in results], axis=0)
    return loss_mse(pred, labels), LstmWeights.from_dict(total, validate=False)


class LstmModel(BaseModel):
    """Configuration and weights of a regressor, as trained and persisted."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    config: ModelConfig
    weights: LstmWeights

    @classmethod
    def initialise(cls, config: ModelConfig) -> "LstmModel":
        return cls(config=config, weights=init_weights(config))

    def predict(self, windows: np.ndarray) -> np.ndarray:
        return predict(self.weights, self.config, windows)

    def predict_one(self, sequence: Sequence[float]) -> Prediction:
        return forward(self.weights, self.config, sequence)[0]
