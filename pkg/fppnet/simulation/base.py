"""Base class for Mittag-Leffler inter-arrival samplers.

A sampler turns three independent uniforms (u1, u2, u3) into one waiting time

    T = |ln u1|**(1/beta) / mu**(1/beta) * S(beta, u2, u3)

where the auxiliary factor S is a one-sided stable variate built from
(u2, u3). Subclasses only define ``log_auxiliary``; the shared code handles
domain checks, the exponential limit beta = 1, log-space evaluation and the
clamp that keeps every draw finite and positive.
"""

import math
from abc import ABC, abstractmethod

import numpy as np

from ..config import FppParams
from ..errors import DomainError
from ..utils.rng import open_uniform

# exp() of these stays a positive finite double.
LOG_T_MIN = math.log(np.finfo(float).tiny)
LOG_T_MAX = math.log(np.finfo(float).max)


class BaseSampler(ABC):
    """Abstract inter-arrival sampler.

    Subclass Requirements:
        - Must implement: log_auxiliary(beta, u2, u3) -> ln S (array-valued)

    Example:
        >>> from fppnet.simulation import SamplerKind, create_sampler
        >>> sampler = create_sampler(SamplerKind.KANTER)
        >>> sampler.interarrival(FppParams(mu=2.0, beta=1.0), math.exp(-2.0), 0.37, 0.91)
        1.0
    """

    name: str = "base"

    @abstractmethod
    def log_auxiliary(self, beta: float, u2: np.ndarray, u3: np.ndarray) -> np.ndarray:
        """Return ln S for beta in (0, 1) and uniforms strictly inside (0, 1)."""

    def log_interarrivals(self, params: FppParams, u1: np.ndarray, u2: np.ndarray, u3: np.ndarray) -> np.ndarray:
        """ln T for arrays of uniforms, clamped to the finite positive range."""
        beta, mu = params.beta, params.mu
        log_t = (np.log(-np.log(u1)) - math.log(mu)) / beta + self.log_auxiliary(beta, u2, u3)
        return np.clip(log_t, LOG_T_MIN, LOG_T_MAX)

    def transform(self, params: FppParams, u1: np.ndarray, u2: np.ndarray, u3: np.ndarray) -> np.ndarray:
        """Map uniform arrays to inter-arrival times.

        At beta = 1 the auxiliary factor is 1 and T = -ln(u1)/mu exactly.
        """
        if params.beta == 1.0:
            return -np.log(u1) / params.mu
        return np.exp(self.log_interarrivals(params, u1, u2, u3))

    def interarrival(self, params: FppParams, u1: float, u2: float, u3: float) -> float:
        """One inter-arrival time from explicit uniforms.

        Raises:
            DomainError: If any uniform is not strictly inside (0, 1).
        """
        for name, u in (("u1", u1), ("u2", u2), ("u3", u3)):
            if not (math.isfinite(u) and 0.0 < u < 1.0):
                raise DomainError(f"{name} must lie strictly inside (0, 1), got {u}")
        out = self.transform(params, np.array([u1]), np.array([u2]), np.array([u3]))
        return float(out[0])

    def sample(self, params: FppParams, size, rng: np.random.Generator) -> np.ndarray:
        """Draw inter-arrival times of the given shape from ``rng``.

        Uniforms are drawn as one (3, *size) block so a seed fixes the output.
        """
        shape = (size,) if isinstance(size, int) else tuple(size)
        u = open_uniform(rng, (3, *shape))
        return self.transform(params, u[0], u[1], u[2])
