"""Seed splitting and open-interval uniforms.

A single integer seed drives every run. Sub-streams are derived with numpy's
``SeedSequence`` so they are statistically independent and do not depend on
how many threads consume them:

- ``derive_seed(root, "split")`` style keyed children for pipeline stages;
- ``row_generators(seed, n)`` for per-row streams (child ``i`` of
  ``SeedSequence(seed).spawn(n)`` belongs to row ``i``).
"""

import hashlib
from typing import List, Union

import numpy as np

SeedLike = Union[int, np.random.SeedSequence]


def _key_to_int(key: Union[str, int]) -> int:
    if isinstance(key, int):
        return key
    digest = hashlib.sha256(key.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")


def derive_seed(root: int, *keys: Union[str, int]) -> int:
    """Derive a 64-bit child seed from a root seed and a path of keys.

    Args:
        root: The run's root seed.
        *keys: Stage names or indices, e.g. ``("ablation", "lr", 2)``.

    Returns:
        A deterministic 64-bit integer seed.

    Example:
        >>> derive_seed(7, "split") == derive_seed(7, "split")
        True
    """
    entropy = [root, *(_key_to_int(k) for k in keys)]
    return int(np.random.SeedSequence(entropy).generate_state(1, dtype=np.uint64)[0])


def make_generator(seed: SeedLike) -> np.random.Generator:
    """Create a PCG64 generator from an int seed or a SeedSequence."""
    return np.random.Generator(np.random.PCG64(seed))


def row_generators(seed: int, n_rows: int) -> List[np.random.Generator]:
    """One independent generator per row, derived by spawning."""
    return [make_generator(child) for child in np.random.SeedSequence(seed).spawn(n_rows)]


def open_uniform(rng: np.random.Generator, size) -> np.ndarray:
    """Uniform draws on the open interval (0, 1).

    ``Generator.random`` samples [0, 1); exact zeros are redrawn.
    """
    u = rng.random(size)
    zeros = u == 0.0
    while np.any(zeros):
        u[zeros] = rng.random(int(zeros.sum()))
        zeros = u == 0.0
    return u
