"""Sliding windows over inter-arrival gaps and MOM labelling."""

from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from pydantic import BaseModel, ConfigDict, model_validator

from ..config import ClipPolicy, TimestampSeriesSpec
from ..errors import IngestError
from ..estimation.mom import mom_estimate_windows
from ..simulation.dataset import LabeledDataset
from ..utils.io import write_json_atomic
from ..utils.logging import get_logger
from .timestamps import SourceStats, load_interarrivals

logger = get_logger(__name__)

MIN_WINDOW_LEN = 3


class WindowSet(BaseModel):
    """Overlapping windows of positive gaps.

    ``num_windows = (n_valid - window_len) // stride + 1``.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    windows: np.ndarray
    window_len: int
    stride: int
    source_stats: Optional[SourceStats] = None

    @model_validator(mode="after")
    def _check(self) -> "WindowSet":
        if self.windows.ndim != 2 or self.windows.shape[1] != self.window_len:
            raise ValueError(f"windows must be (n, {self.window_len}), got {self.windows.shape}")
        return self

    @property
    def num_windows(self) -> int:
        return int(self.windows.shape[0])


def make_windows(
    gaps: np.ndarray,
    window_len: int,
    stride: int = 1,
    source_stats: Optional[SourceStats] = None,
) -> WindowSet:
    """Slice ``gaps`` into windows of ``window_len`` starting every ``stride``.

    Raises:
        IngestError: If ``window_len < 3``, ``stride < 1``, the series is
            shorter than one window, or a gap is not finite and positive.
    """
    gaps = np.asarray(gaps, dtype=float)
    counts = {"n_gaps": int(gaps.size), "window_len": window_len, "stride": stride}
    if window_len < MIN_WINDOW_LEN:
        raise IngestError(f"window_len must be >= {MIN_WINDOW_LEN} for moment estimation, got {window_len}", counts)
    if stride < 1:
        raise IngestError(f"stride must be >= 1, got {stride}", counts)
    if gaps.ndim != 1 or gaps.size < window_len:
        raise IngestError(f"series of {gaps.size} gaps is shorter than one window of {window_len}", counts)
    if not np.all(np.isfinite(gaps)) or np.any(gaps <= 0.0):
        raise IngestError("gaps must be finite and > 0", counts)

    windows = np.ascontiguousarray(sliding_window_view(gaps, window_len)[::stride])
    logger.info("windows_made", n_windows=windows.shape[0], **counts)
    return WindowSet(windows=windows, window_len=window_len, stride=stride, source_stats=source_stats)


def label_windows_with_mom(
    window_set: WindowSet,
    clip: Optional[ClipPolicy] = None,
    keep_saturated: bool = False,
) -> LabeledDataset:
    """Label every window with its MOM estimate and drop unusable rows.

    Args:
        window_set: Windows to label.
        clip: MOM guards.
        keep_saturated: Also keep rows whose beta estimate was clamped to the
            clip bounds (labelled with the clamped value).

    Returns:
        A :class:`LabeledDataset` in window order; provenance and the MOM
        accounting are stored in ``metadata``.

    Raises:
        IngestError: If no window gets a usable label.
    """
    moms = mom_estimate_windows(window_set.windows, clip or ClipPolicy())
    cols = moms.to_arrays()
    keep = cols["usable"] if keep_saturated else cols["valid"]
    summary = moms.summary

    if not keep.any():
        logger.error("no_valid_labels", **summary)
        raise IngestError(f"none of {window_set.num_windows} windows has a valid MOM label", summary)

    stats = window_set.source_stats
    metadata: Dict[str, Any] = {
        "source": stats.path if stats else "in-memory",
        "unit": stats.unit if stats else None,
        "window_len": window_set.window_len,
        "stride": window_set.stride,
        "n_windows": window_set.num_windows,
        "n_labeled": int(keep.sum()),
        "keep_saturated": keep_saturated,
        "mom_summary": summary,
    }
    labels = np.stack([cols["mu_hat"], cols["beta_hat"]], axis=1)[keep]
    dataset = LabeledDataset(
        windows=window_set.windows[keep],
        labels=labels,
        seq_len=window_set.window_len,
        metadata=metadata,
    )
    logger.info("windows_labeled", n_windows=window_set.num_windows, n_labeled=dataset.n_samples)
    return dataset


def ingest_timestamps(
    spec: TimestampSeriesSpec,
    window_len: int,
    stride: int = 1,
    clip: Optional[ClipPolicy] = None,
    keep_saturated: bool = False,
) -> LabeledDataset:
    """File to labelled dataset: load, window and label in one call."""
    series = load_interarrivals(spec)
    windows = make_windows(series.gaps, window_len, stride, series.source_stats)
    return label_windows_with_mom(windows, clip, keep_saturated)


def write_ingest_stats(path: Union[str, Path], dataset: LabeledDataset, stats: Optional[SourceStats] = None) -> Path:
    """Write ``ingest_stats.json``: source accounting plus windowing and labelling counts."""
    payload: Dict[str, Any] = {"source": stats.model_dump(mode="json") if stats else None}
    payload.update({k: v for k, v in dataset.metadata.items() if k != "source"})
    return write_json_atomic(path, payload)
