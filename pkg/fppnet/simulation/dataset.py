"""Labelled window datasets: synthetic generation and persistence.

On disk a dataset is two files sharing a stem:

- ``<stem>.bin``: little-endian float64, the windows matrix (row-major,
  n_samples x seq_len) followed by the labels matrix (n_samples x 2, columns
  mu, beta);
- ``<stem>.json``: header with format_version, n_samples, seq_len, ranges,
  seed, metadata and the SHA-256 of the payload.
"""

import hashlib
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..config import FppParams, SamplerKind, SimulationConfig, build_config
from ..errors import DatasetFormatError
from ..utils.io import read_json, write_json_atomic
from ..utils.logging import get_logger
from ..utils.rng import make_generator

logger = get_logger(__name__)

DATASET_FORMAT_VERSION = 1
_DTYPE = np.dtype("<f8")


class LabeledDataset(BaseModel):
    """Windows of inter-arrival times paired with (mu, beta) labels.

    Attributes:
        windows: (n_samples, seq_len) matrix of inter-arrivals.
        labels: (n_samples, 2) matrix of (mu, beta).
        seq_len: Window length.
        rng_seed: Seed the rows were generated from (0 for real data).
        metadata: Free-form provenance (ranges, source file, time unit, ...).
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    windows: np.ndarray
    labels: np.ndarray
    seq_len: int = Field(ge=2)
    rng_seed: int = 0
    metadata: Dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _shapes(self) -> "LabeledDataset":
        if self.windows.ndim != 2 or self.windows.shape[1] != self.seq_len:
            raise ValueError(f"windows must be (n, {self.seq_len}), got {self.windows.shape}")
        if self.labels.ndim != 2 or self.labels.shape[1] != 2:
            raise ValueError(f"labels must be (n, 2), got {self.labels.shape}")
        if self.windows.shape[0] != self.labels.shape[0]:
            raise ValueError("windows and labels must have the same number of rows")
        return self

    @property
    def n_samples(self) -> int:
        return int(self.windows.shape[0])

    def __len__(self) -> int:
        return self.n_samples

    def subset(self, indices: Sequence[int]) -> "LabeledDataset":
        """Rows selected by index, provenance kept."""
        idx = np.asarray(indices, dtype=np.int64)
        return LabeledDataset(
            windows=self.windows[idx],
            labels=self.labels[idx],
            seq_len=self.seq_len,
            rng_seed=self.rng_seed,
            metadata=dict(self.metadata),
        )


def _generate_row(
    child: np.random.SeedSequence,
    seq_len: int,
    mu_range: Tuple[float, float],
    beta_range: Tuple[float, float],
    sampler,
) -> Tuple[np.ndarray, float, float]:
    rng = make_generator(child)
    mu = float(rng.uniform(mu_range[0], mu_range[1]))
    beta = float(rng.uniform(beta_range[0], beta_range[1]))
    window = sampler.sample(FppParams(mu=mu, beta=beta), seq_len, rng)
    return window, mu, beta


def generate_dataset(
    n_samples: int,
    seq_len: int,
    mu_range: Tuple[float, float] = (0.5, 5.0),
    beta_range: Tuple[float, float] = (0.1, 0.9),
    rng_seed: int = 0,
    sampler: SamplerKind = SamplerKind.KANTER,
    threads: int = 1,
) -> LabeledDataset:
    """Simulate a labelled dataset with independent uniform (mu, beta) per row.

    Row ``i`` draws its parameters and its window from child ``i`` of
    ``SeedSequence(rng_seed)``, so the result does not depend on ``threads``.

    Args:
        n_samples: Number of rows.
        seq_len: Inter-arrivals per row.
        mu_range: Closed range for mu.
        beta_range: Closed range for beta.
        rng_seed: Root seed.
        sampler: Sampler variant.
        threads: Worker threads.

    Returns:
        The generated :class:`LabeledDataset`.

    Raises:
        ConfigError: On degenerate or out-of-domain ranges.
    """
    from . import create_sampler

    cfg = build_config(
        SimulationConfig,
        n_samples=n_samples,
        seq_len=seq_len,
        mu_range=tuple(mu_range),
        beta_range=tuple(beta_range),
        seed=rng_seed,
        sampler=sampler,
        threads=threads,
    )
    smp = create_sampler(cfg.sampler)
    children = np.random.SeedSequence(cfg.seed).spawn(cfg.n_samples)

    def run(child):
        return _generate_row(child, cfg.seq_len, cfg.mu_range, cfg.beta_range, smp)

    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            rows = list(pool.map(run, children))
    else:
        rows = [run(child) for child in children]

    windows = np.stack([r[0] for r in rows])
    labels = np.array([[r[1], r[2]] for r in rows], dtype=float)

    logger.info(
        "dataset_generated",
        n_samples=cfg.n_samples,
        seq_len=cfg.seq_len,
        seed=cfg.seed,
        sampler=cfg.sampler.value,
        threads=cfg.threads,
    )
    return LabeledDataset(
        windows=windows,
        labels=labels,
        seq_len=cfg.seq_len,
        rng_seed=cfg.seed,
        metadata={
            "source": "simulated",
            "mu_range": list(cfg.mu_range),
            "beta_range": list(cfg.beta_range),
            "sampler": cfg.sampler.value,
        },
    )


# --- Persistence ---


def _stem_paths(path: Union[str, Path]) -> Tuple[Path, Path]:
    path = Path(path)
    stem = path.with_suffix("") if path.suffix in (".bin", ".json") else path
    return stem.with_suffix(".bin"), stem.with_suffix(".json")


def save_dataset(dataset: LabeledDataset, path: Union[str, Path]) -> Tuple[Path, Path]:
    """Write ``<stem>.bin`` and ``<stem>.json``.

    Returns:
        (payload path, header path).
    """
    bin_path, header_path = _stem_paths(path)
    bin_path.parent.mkdir(parents=True, exist_ok=True)

    payload = (
        np.ascontiguousarray(dataset.windows, dtype=_DTYPE).tobytes()
        + np.ascontiguousarray(dataset.labels, dtype=_DTYPE).tobytes()
    )
    bin_path.write_bytes(payload)

    header = {
        "format_version": DATASET_FORMAT_VERSION,
        "n_samples": dataset.n_samples,
        "seq_len": dataset.seq_len,
        "seed": dataset.rng_seed,
        "mu_range": dataset.metadata.get("mu_range"),
        "beta_range": dataset.metadata.get("beta_range"),
        "dtype": "float64-le",
        "layout": ["windows", "labels[mu,beta]"],
        "sha256": hashlib.sha256(payload).hexdigest(),
        "metadata": dataset.metadata,
    }
    write_json_atomic(header_path, header)
    logger.info("dataset_saved", path=str(bin_path), n_samples=dataset.n_samples)
    return bin_path, header_path


def load_dataset(path: Union[str, Path]) -> LabeledDataset:
    """Read a dataset written by :func:`save_dataset`.

    Raises:
        FileNotFoundError: If either file is missing.
        DatasetFormatError: On version, size or checksum mismatch.
    """
    bin_path, header_path = _stem_paths(path)
    header = read_json(header_path)
    if not bin_path.exists():
        raise FileNotFoundError(f"Dataset payload not found: {bin_path}")

    version = header.get("format_version")
    if version != DATASET_FORMAT_VERSION:
        raise DatasetFormatError(f"Unsupported dataset format_version {version}")

    try:
        n, seq_len = int(header["n_samples"]), int(header["seq_len"])
    except (KeyError, TypeError, ValueError) as e:
        raise DatasetFormatError(f"Malformed dataset header: {e}") from e

    payload = bin_path.read_bytes()
    expected = n * (seq_len + 2) * _DTYPE.itemsize
    if len(payload) != expected:
        raise DatasetFormatError(f"Payload has {len(payload)} bytes, header implies {expected}")
    if hashlib.sha256(payload).hexdigest() != header.get("sha256"):
        raise DatasetFormatError("Payload checksum does not match header")

    flat = np.frombuffer(payload, dtype=_DTYPE).astype(float)
    split = n * seq_len
    dataset = LabeledDataset(
        windows=flat[:split].reshape(n, seq_len),
        labels=flat[split:].reshape(n, 2),
        seq_len=seq_len,
        rng_seed=int(header.get("seed", 0)),
        metadata=header.get("metadata") or {},
    )
    logger.info("dataset_loaded", path=str(bin_path), n_samples=n)
    return dataset


def dataset_header(path: Union[str, Path]) -> Optional[Dict[str, Any]]:
    """The JSON header of a saved dataset, or None if absent."""
    _, header_path = _stem_paths(path)
    return read_json(header_path) if header_path.exists() else None
