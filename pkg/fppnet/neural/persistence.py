"""Versioned binary container for trained regressors.

Layout (all integers little-endian)::

    magic           8 bytes   b"FPPLSTM\\x00"
    format_version  uint32
    header_length   uint32
    header          UTF-8 JSON: config, tensor names and shapes, optimizer
                    hyper-parameters (or null), metadata
    payload         float64 little-endian: every tensor in PARAM_NAMES order,
                    then Adam m and v in the same order when present
"""

import json
import struct
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..config import ModelConfig
from ..errors import ModelFormatError
from ..utils.logging import get_logger
from .model import PARAM_NAMES, LstmModel, LstmWeights, param_shapes
from .optim import AdamState

logger = get_logger(__name__)

MAGIC = b"FPPLSTM\x00"
MODEL_FORMAT_VERSION = 1
_PREFIX = struct.Struct("<8sII")
_DTYPE = np.dtype("<f8")


class SavedModel(BaseModel):
    """Contents of a model file."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    model: LstmModel
    optimizer: Optional[AdamState] = None
    metadata: Dict[str, Any] = Field(default_factory=dict)


def save_model(
    path: Union[str, Path],
    model: LstmModel,
    optimizer: Optional[AdamState] = None,
    metadata: Optional[Dict[str, Any]] = None,
) -> Path:
    """Write a model (and optionally its Adam state) to ``path``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    shapes = param_shapes(model.config)

    header = {
        "config": model.config.model_dump(mode="json"),
        "tensors": [{"name": n, "shape": list(shapes[n])} for n in PARAM_NAMES],
        "optimizer": None
        if optimizer is None
        else {
            "step_count": optimizer.step_count,
            "lr": optimizer.lr,
            "beta1": optimizer.beta1,
            "beta2": optimizer.beta2,
            "eps": optimizer.eps,
        },
        "metadata": metadata or {},
    }
    header_bytes = json.dumps(header, sort_keys=True).encode("utf-8")

    chunks = [np.ascontiguousarray(getattr(model.weights, n), dtype=_DTYPE).tobytes() for n in PARAM_NAMES]
    if optimizer is not None:
        chunks += [np.ascontiguousarray(optimizer.m[n], dtype=_DTYPE).tobytes() for n in PARAM_NAMES]
        chunks += [np.ascontiguousarray(optimizer.v[n], dtype=_DTYPE).tobytes() for n in PARAM_NAMES]

    with open(path, "wb") as f:
        f.write(_PREFIX.pack(MAGIC, MODEL_FORMAT_VERSION, len(header_bytes)))
        f.write(header_bytes)
        for chunk in chunks:
            f.write(chunk)

    logger.info("model_saved", path=str(path), n_params=model.weights.n_params, optimizer=optimizer is not None)
    return path


def _read_tensors(payload: memoryview, offset: int, shapes: Dict[str, tuple]) -> tuple:
    out = {}
    for name in PARAM_NAMES:
        count = int(np.prod(shapes[name]))
        nbytes = count * _DTYPE.itemsize
        out[name] = np.frombuffer(payload[offset:offset + nbytes], dtype=_DTYPE).astype(float).reshape(shapes[name])
        offset += nbytes
    return out, offset


def load_model(path: Union[str, Path]) -> SavedModel:
    """Read a file written by :func:`save_model`.

    Raises:
        FileNotFoundError: If ``path`` does not exist.
        ModelFormatError: On bad magic, unsupported version, malformed header
            or a payload of the wrong size.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Model file not found: {path}")
    data = path.read_bytes()

    if len(data) < _PREFIX.size:
        raise ModelFormatError(f"{path} is truncated ({len(data)} bytes)")
    magic, version, header_len = _PREFIX.unpack_from(data)
    if magic != MAGIC:
        raise ModelFormatError(f"{path} is not a model file (bad magic {magic!r})")
    if version != MODEL_FORMAT_VERSION:
        raise ModelFormatError(f"unsupported model format_version {version}, expected {MODEL_FORMAT_VERSION}")

    start = _PREFIX.size
    if len(data) < start + header_len:
        raise ModelFormatError(f"{path} is truncated inside the header")
    try:
        header = json.loads(data[start:start + header_len].decode("utf-8"))
        config = ModelConfig(**header["config"])
    except (ValueError, KeyError, TypeError) as e:
        raise ModelFormatError(f"malformed model header: {e}") from e

    shapes = param_shapes(config)
    stored = {t["name"]: tuple(t["shape"]) for t in header.get("tensors", [])}
    if stored != shapes:
        raise ModelFormatError("tensor table does not match the stored configuration")

    opt_header = header.get("optimizer")
    per_set = sum(int(np.prod(s)) for s in shapes.values()) * _DTYPE.itemsize
    expected = per_set * (3 if opt_header else 1)
    payload = memoryview(data)[start + header_len:]
    if len(payload) != expected:
        raise ModelFormatError(f"payload has {len(payload)} bytes, expected {expected}")

    tensors, offset = _read_tensors(payload, 0, shapes)
    try:
        weights = LstmWeights.from_dict(tensors)
    except ValueError as e:
        raise ModelFormatError(f"stored weights are invalid: {e}") from e

    optimizer = None
    if opt_header:
        m, offset = _read_tensors(payload, offset, shapes)
        v, offset = _read_tensors(payload, offset, shapes)
        optimizer = AdamState(m=m, v=v, **opt_header)

    logger.info("model_loaded", path=str(path), n_params=weights.n_params)
    return SavedModel(
        model=LstmModel(config=config, weights=weights),
        optimizer=optimizer,
        metadata=header.get("metadata") or {},
    )
