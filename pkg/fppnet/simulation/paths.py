"""Single event paths and counting-process draws."""

import math
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from ..config import FppParams, SamplerKind
from ..errors import DomainError
from ..utils.logging import get_logger
from ..utils.rng import make_generator
from .base import BaseSampler

logger = get_logger(__name__)


class EventPath(BaseModel):
    """Inter-arrival sequence with its cumulative event times.

    Attributes:
        inter_arrivals: Positive waiting times.
        event_times: Cumulative sums of ``inter_arrivals``.
        params: Generating parameters, when known.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    inter_arrivals: np.ndarray
    event_times: np.ndarray
    params: Optional[FppParams] = None

    @model_validator(mode="after")
    def _consistent(self) -> "EventPath":
        gaps = self.inter_arrivals
        if gaps.ndim != 1 or gaps.shape != self.event_times.shape:
            raise ValueError("inter_arrivals and event_times must be 1-D of equal length")
        if not np.all(np.isfinite(gaps)) or np.any(gaps <= 0.0):
            raise ValueError("every inter-arrival must be finite and > 0")
        if not np.array_equal(self.event_times, np.cumsum(gaps)):
            raise ValueError("event_times must equal the cumulative sums of inter_arrivals")
        return self

    @classmethod
    def from_interarrivals(cls, gaps: np.ndarray, params: Optional[FppParams] = None) -> "EventPath":
        gaps = np.asarray(gaps, dtype=float)
        return cls(inter_arrivals=gaps, event_times=np.cumsum(gaps), params=params)

    @property
    def n_events(self) -> int:
        return int(self.inter_arrivals.size)

    def count_at(self, t: float) -> int:
        """N(t) = number of events with time <= t.

        Raises:
            DomainError: If the path ends before t, so the count is censored.
        """
        if self.event_times[-1] <= t:
            raise DomainError(f"path ends at {self.event_times[-1]:.6g} <= t={t}; count is censored")
        return int(np.searchsorted(self.event_times, t, side="right"))


def _resolve(sampler) -> BaseSampler:
    from . import create_sampler

    return sampler if isinstance(sampler, BaseSampler) else create_sampler(sampler)


def simulate_path(
    params: FppParams,
    n_events: int,
    rng_seed: int,
    sampler: SamplerKind | BaseSampler = SamplerKind.KANTER,
) -> EventPath:
    """Simulate ``n_events`` inter-arrival times of one FPP path.

    Args:
        params: Generating (mu, beta).
        n_events: Number of events, >= 1.
        rng_seed: Seed; the path is a deterministic function of it.
        sampler: Sampler kind or instance.

    Returns:
        The simulated :class:`EventPath`, labelled with ``params``.
    """
    if n_events < 1:
        raise DomainError(f"n_events must be >= 1, got {n_events}")
    rng = make_generator(rng_seed)
    gaps = _resolve(sampler).sample(params, n_events, rng)
    return EventPath.from_interarrivals(gaps, params=params)


def simulate_counts(
    params: FppParams,
    t: float,
    n_paths: int,
    rng_seed: int,
    sampler: SamplerKind | BaseSampler = SamplerKind.KANTER,
    block_events: int = 32,
) -> np.ndarray:
    """Draw N_beta(t) for ``n_paths`` independent paths.

    Events are drawn in blocks of ``block_events`` per unfinished path until
    every path has passed t, so counts are never censored.

    Returns:
        Integer array of counts, one per path.
    """
    if not (math.isfinite(t) and t >= 0.0):
        raise DomainError(f"t must be finite and >= 0, got {t}")
    if n_paths < 1:
        raise DomainError(f"n_paths must be >= 1, got {n_paths}")

    smp = _resolve(sampler)
    rng = make_generator(rng_seed)
    counts = np.zeros(n_paths, dtype=np.int64)
    elapsed = np.zeros(n_paths)
    active = np.arange(n_paths)
    rounds = 0

    while active.size:
        rounds += 1
        gaps = smp.sample(params, (active.size, block_events), rng)
        times = elapsed[active, None] + np.cumsum(gaps, axis=1)
        counts[active] += (times <= t).sum(axis=1)
        elapsed[active] = times[:, -1]
        active = active[times[:, -1] <= t]

    logger.debug("counts_simulated", n_paths=n_paths, t=t, rounds=rounds)
    return counts
