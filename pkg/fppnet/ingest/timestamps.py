"""Read a timestamp column and turn it into positive inter-arrival times.

The file is streamed in chunks. Every data row is accounted for::

    n_raw = n_gaps + 1 + n_unparseable + n_date_excluded
    n_gaps = n_valid + n_dropped_nonpositive

Gaps are in the unit of the source: seconds for ISO datetimes and epoch
seconds, microseconds for epoch microseconds.
"""

from typing import Optional, Tuple, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict

from ..config import TimestampFormat, TimestampSeriesSpec
from ..errors import IngestError
from ..utils.logging import get_logger

logger = get_logger(__name__)

_EPOCH = pd.Timestamp("1970-01-01")
_UNIT_CODE = {TimestampFormat.EPOCH_SECONDS: "s", TimestampFormat.EPOCH_MICROS: "us"}


class SourceStats(BaseModel):
    """Row accounting for one ingested file."""

    model_config = ConfigDict(frozen=True)

    path: str
    format: TimestampFormat
    unit: str
    n_raw: int
    n_unparseable: int
    n_date_excluded: int
    n_gaps: int
    n_valid: int
    n_dropped_nonpositive: int
    t_start: Optional[float] = None
    t_end: Optional[float] = None


class InterarrivalSeries(BaseModel):
    """Positive gaps and the accounting that produced them."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    gaps: np.ndarray
    source_stats: SourceStats


def _resolve_column(columns: pd.Index, wanted: Union[str, int]) -> object:
    if wanted in columns:
        return wanted
    if isinstance(wanted, int) and 0 <= wanted < len(columns):
        return columns[wanted]
    raise IngestError(
        f"timestamp column {wanted!r} not found; available: {list(columns)}",
        counts={"columns": [str(c) for c in columns]},
    )


def _parse_chunk(raw: pd.Series, fmt: TimestampFormat) -> Tuple[np.ndarray, pd.Series]:
    """(times in source units, datetimes for date filtering); NaN/NaT where unparseable."""
    text = raw.astype(str).str.strip()
    if fmt is TimestampFormat.ISO_DATETIME:
        stamps = pd.to_datetime(text, errors="coerce", format="ISO8601")
        if getattr(stamps.dt, "tz", None) is not None:
            stamps = stamps.dt.tz_localize(None)
        times = ((stamps - _EPOCH) / pd.Timedelta(seconds=1)).to_numpy(dtype=float, na_value=np.nan)
        return times, stamps
    values = pd.to_numeric(text, errors="coerce").to_numpy(dtype=float, na_value=np.nan)
    stamps = pd.to_datetime(pd.Series(values, index=text.index), unit=_UNIT_CODE[fmt], errors="coerce")
    return values, stamps


def load_interarrivals(spec: TimestampSeriesSpec) -> InterarrivalSeries:
    """Parse ``spec.path`` and return the positive consecutive differences.

    Raises:
        FileNotFoundError: If the file does not exist.
        IngestError: On an unknown column, a parse failure rate above
            ``spec.parse_tolerance``, or fewer than two usable timestamps.
    """
    if not spec.path.exists():
        raise FileNotFoundError(f"Timestamp file not found: {spec.path}")

    reader = pd.read_csv(
        spec.path,
        sep=spec.delimiter,
        header=0 if spec.has_header else None,
        dtype=str,
        keep_default_na=False,
        chunksize=spec.chunk_size,
    )

    column = None
    n_raw = n_unparseable = n_excluded = 0
    kept = []
    with reader:
        for chunk in reader:
            if column is None:
                column = _resolve_column(chunk.columns, spec.timestamp_column)
            times, stamps = _parse_chunk(chunk[column], spec.format)
            n_raw += len(times)
            ok = np.isfinite(times)
            n_unparseable += int((~ok).sum())
            if spec.date_filter is not None:
                on_day = (stamps.dt.date == spec.date_filter).to_numpy(dtype=bool, na_value=False)
                n_excluded += int((ok & ~on_day).sum())
                ok &= on_day
            kept.append(times[ok])

    counts = {"n_raw": n_raw, "n_unparseable": n_unparseable, "n_date_excluded": n_excluded}
    if n_raw and n_unparseable / n_raw > spec.parse_tolerance:
        logger.error("parse_tolerance_exceeded", path=str(spec.path), tolerance=spec.parse_tolerance, **counts)
        raise IngestError(
            f"{n_unparseable} of {n_raw} rows unparseable, above tolerance {spec.parse_tolerance:.2%}", counts
        )
    if n_unparseable:
        logger.warning("unparseable_rows_skipped", path=str(spec.path), **counts)

    times = np.concatenate(kept) if kept else np.zeros(0)
    if times.size < 2:
        raise IngestError(f"need at least two usable timestamps in {spec.path}, found {times.size}", counts)
    if spec.sort:
        times = np.sort(times, kind="stable")

    gaps = np.diff(times)
    positive = gaps > 0.0
    stats = SourceStats(
        path=str(spec.path),
        format=spec.format,
        unit=spec.format.unit,
        n_raw=n_raw,
        n_unparseable=n_unparseable,
        n_date_excluded=n_excluded,
        n_gaps=int(gaps.size),
        n_valid=int(positive.sum()),
        n_dropped_nonpositive=int((~positive).sum()),
        t_start=float(times[0]),
        t_end=float(times[-1]),
    )
    logger.info("interarrivals_loaded", **stats.model_dump(mode="json"))
    return InterarrivalSeries(gaps=gaps[positive], source_stats=stats)
