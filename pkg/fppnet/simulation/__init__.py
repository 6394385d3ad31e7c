"""Mittag-Leffler random variates, FPP paths and synthetic datasets."""

import numpy as np

from ..config import FppParams, SamplerKind
from .base import BaseSampler
from .samplers import KanterSampler, PrintedExponentSampler


def create_sampler(kind: str | SamplerKind = SamplerKind.KANTER) -> BaseSampler:
    """Factory function to create sampler instances.

    Args:
        kind: SamplerKind value (or its string form).

    Returns:
        A :class:`BaseSampler` instance.

    Raises:
        TypeError: If ``kind`` is not a known sampler.

    Example:
        >>> from fppnet.simulation import create_sampler, SamplerKind
        >>> sampler = create_sampler(SamplerKind.KANTER)
    """
    sampler_map = {
        SamplerKind.KANTER: KanterSampler,
        SamplerKind.PRINTED_EXPONENT: PrintedExponentSampler,
    }
    try:
        kind = SamplerKind(kind)
    except ValueError:
        raise TypeError(
            f"Unknown sampler '{kind}'. Use SamplerKind values: {[k.value for k in sampler_map]}"
        ) from None
    return sampler_map[kind]()


def sample_interarrival(params: FppParams, u1: float, u2: float, u3: float) -> float:
    """One Mittag-Leffler waiting time from explicit uniforms (Kanter sampler).

    Raises:
        DomainError: If any uniform is not strictly inside (0, 1).
    """
    return KanterSampler().interarrival(params, u1, u2, u3)


def sample_interarrivals(
    params: FppParams,
    size,
    rng: np.random.Generator,
    kind: str | SamplerKind = SamplerKind.KANTER,
) -> np.ndarray:
    """Array of waiting times of shape ``size``, finite and > 0 even for extreme uniforms."""
    return create_sampler(kind).sample(params, size, rng)


from .dataset import LabeledDataset, dataset_header, generate_dataset, load_dataset, save_dataset  # noqa: E402
from .paths import EventPath, simulate_counts, simulate_path  # noqa: E402

__all__ = [
    "FppParams",
    "SamplerKind",
    "BaseSampler",
    "KanterSampler",
    "PrintedExponentSampler",
    "create_sampler",
    "sample_interarrival",
    "sample_interarrivals",
    "EventPath",
    "simulate_path",
    "simulate_counts",
    "LabeledDataset",
    "generate_dataset",
    "save_dataset",
    "load_dataset",
    "dataset_header",
]
