"""Real-data pipeline: timestamp files to MOM-labelled windows."""

from ..config import TimestampFormat, TimestampSeriesSpec
from .timestamps import InterarrivalSeries, SourceStats, load_interarrivals
from .windows import (
    MIN_WINDOW_LEN,
    WindowSet,
    ingest_timestamps,
    label_windows_with_mom,
    make_windows,
    write_ingest_stats,
)

__all__ = [
    "TimestampFormat",
    "TimestampSeriesSpec",
    "InterarrivalSeries",
    "SourceStats",
    "load_interarrivals",
    "MIN_WINDOW_LEN",
    "WindowSet",
    "make_windows",
    "label_windows_with_mom",
    "ingest_timestamps",
    "write_ingest_stats",
]
