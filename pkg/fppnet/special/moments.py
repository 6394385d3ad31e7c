"""Mean and variance of the counting process N_beta(t).

With q = mu / Gamma(1 + beta):

    E[N(t)]   = q t**beta
    Var[N(t)] = q t**beta * (1 + q t**beta * (beta * B(beta, 1/2) * 2**(1 - 2 beta) - 1))

The variance bracket uses 2**(1 - 2 beta); a version with 2 / (2**beta - 1)
does not reduce to the Poisson identity Var = E at beta = 1 and is not used.
"""

import math

from pydantic import BaseModel, ConfigDict

from ..errors import DomainError
from .gamma import beta_fn, gamma


class FppMoments(BaseModel):
    """First two moments of N_beta(t) at one time point."""

    model_config = ConfigDict(frozen=True)

    mean: float
    variance: float
    q: float
    t: float
    beta: float


def _check(mu: float, beta: float, t: float) -> None:
    if not (math.isfinite(mu) and mu > 0.0):
        raise DomainError(f"mu must be finite and > 0, got {mu}")
    if not (math.isfinite(beta) and 0.0 < beta <= 1.0):
        raise DomainError(f"beta must lie in (0, 1], got {beta}")
    if not (math.isfinite(t) and t >= 0.0):
        raise DomainError(f"t must be finite and >= 0, got {t}")


def fpp_rate(mu: float, beta: float) -> float:
    """q = mu / Gamma(1 + beta)."""
    return mu / gamma(1.0 + beta)


def fpp_mean(mu: float, beta: float, t: float) -> float:
    """E[N_beta(t)] = q t**beta."""
    _check(mu, beta, t)
    return fpp_rate(mu, beta) * t**beta


def variance_bracket(beta: float) -> float:
    """beta B(beta, 1/2) 2**(1 - 2 beta) - 1; exactly zero at beta = 1."""
    if beta == 1.0:
        return 0.0
    return beta * beta_fn(beta, 0.5) * 2.0 ** (1.0 - 2.0 * beta) - 1.0


def fpp_variance(mu: float, beta: float, t: float) -> float:
    """Var[N_beta(t)], reducing to q t at beta = 1."""
    _check(mu, beta, t)
    m = fpp_rate(mu, beta) * t**beta
    return m * (1.0 + m * variance_bracket(beta))


def fpp_moments(mu: float, beta: float, t: float) -> FppMoments:
    """Both moments bundled with q."""
    return FppMoments(
        mean=fpp_mean(mu, beta, t),
        variance=fpp_variance(mu, beta, t),
        q=fpp_rate(mu, beta),
        t=t,
        beta=beta,
    )
