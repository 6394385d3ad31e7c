"""From-scratch LSTM regressor, Adam optimiser and gradient audit."""

from ..config import InputActivation, ModelConfig
from .gradcheck import GradCheckReport, gradient_check
from .model import (
    PARAM_NAMES,
    Cache,
    Gradients,
    LstmModel,
    LstmWeights,
    Prediction,
    backward,
    forward,
    forward_batch,
    init_weights,
    loss_and_grads,
    loss_mse,
    param_shapes,
    predict,
)
from .optim import AdamState, adam_step, clip_grad_norm
from .persistence import MODEL_FORMAT_VERSION, SavedModel, load_model, save_model

__all__ = [
    "InputActivation",
    "ModelConfig",
    "PARAM_NAMES",
    "Cache",
    "Gradients",
    "LstmModel",
    "LstmWeights",
    "Prediction",
    "init_weights",
    "param_shapes",
    "forward",
    "forward_batch",
    "predict",
    "loss_mse",
    "backward",
    "loss_and_grads",
    "AdamState",
    "adam_step",
    "clip_grad_norm",
    "GradCheckReport",
    "gradient_check",
    "MODEL_FORMAT_VERSION",
    "SavedModel",
    "save_model",
    "load_model",
]
