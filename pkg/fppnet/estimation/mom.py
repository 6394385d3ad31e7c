"""Log-moment (method-of-moments) estimator for (mu, beta).

For Mittag-Leffler waiting times

    Var(ln T) = (pi**2 / 6) * (2 / beta**2 - 1)
    E[ln T]   = -ln(mu) / beta - C          (C: Euler-Mascheroni)

which inverts to

    beta_hat = pi / sqrt(3 s**2 + pi**2 / 2)
    mu_hat   = exp(-beta_hat * (mean(ln T) + C))

with s**2 the unbiased sample variance of ln T.

The estimator never raises on bad data. Degenerate windows come back with
``valid=False`` and a reason code; clamped beta values still carry numbers so
labelling pipelines can use them (see :attr:`MomEstimate.usable`).
"""

import math
from typing import Dict, Iterator, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict

from ..config import ClipPolicy
from ..special.gamma import EULER_GAMMA
from ..utils.logging import get_logger

logger = get_logger(__name__)

_HALF_PI_SQ = math.pi**2 / 2.0

# Reason codes, in precedence order.
REASON_NONFINITE = "nonfinite"
REASON_NONPOSITIVE = "nonpositive"
REASON_TOO_FEW = "too_few"
REASON_ZERO_VARIANCE = "zero_variance"
REASON_BETA_SATURATED = "beta_saturated"
REASON_MU_OVERFLOW = "mu_overflow"

_REASONS = (
    None,
    REASON_NONFINITE,
    REASON_NONPOSITIVE,
    REASON_TOO_FEW,
    REASON_ZERO_VARIANCE,
    REASON_BETA_SATURATED,
    REASON_MU_OVERFLOW,
)


class MomEstimate(BaseModel):
    """Method-of-moments estimate for one window.

    Attributes:
        mu_hat: Estimated mu (NaN when no estimate exists).
        beta_hat: Estimated beta after clamping (NaN when no estimate exists).
        beta_raw: beta before clamping.
        n_used: Values that survived the [t_min, t_max] filter.
        valid: Both estimates are inside their domains, finite and unclamped.
        reason: Why the estimate is invalid, or None.
    """

    model_config = ConfigDict(frozen=True)

    mu_hat: float
    beta_hat: float
    beta_raw: float
    n_used: int
    valid: bool
    reason: Optional[str] = None

    @property
    def usable(self) -> bool:
        """Numbers are finite: valid, or only invalid because beta was clamped."""
        return self.valid or self.reason == REASON_BETA_SATURATED


def _mom_arrays(windows: np.ndarray, clip: ClipPolicy) -> Dict[str, np.ndarray]:
    """Row-wise estimator core shared by the scalar and batch entry points."""
    x = np.asarray(windows, dtype=float)
    n_rows = x.shape[0]

    finite = np.isfinite(x)
    bad_finite = ~finite.all(axis=1)
    bad_positive = ~bad_finite & (np.where(finite, x, 1.0) <= 0.0).any(axis=1)

    keep = finite & (x >= clip.t_min) & (x <= clip.t_max)
    n_used = keep.sum(axis=1)
    too_few = ~bad_finite & ~bad_positive & (n_used < clip.min_points)

    logs = np.log(np.where(keep, x, 1.0))
    logs = np.where(keep, logs, 0.0)
    denom = np.maximum(n_used, 1)
    mean = logs.sum(axis=1) / denom
    dev = np.where(keep, logs - mean[:, None], 0.0)
    s2 = (dev * dev).sum(axis=1) / np.maximum(n_used - 1, 1)

    # s2 keeps rounding residue on all-equal windows
    hi = np.where(keep, x, -np.inf).max(axis=1)
    lo = np.where(keep, x, np.inf).min(axis=1)
    degenerate = bad_finite | bad_positive | too_few
    zero_var = ~degenerate & ((hi <= lo) | (s2 <= 0.0))
    degenerate |= zero_var

    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        beta_raw = math.pi / np.sqrt(3.0 * s2 + _HALF_PI_SQ)
        beta_hat = np.clip(beta_raw, clip.beta_min, clip.beta_max)
        mu_hat = np.exp(-beta_hat * (mean + EULER_GAMMA))

    saturated = ~degenerate & ((beta_raw < clip.beta_min) | (beta_raw > clip.beta_max))
    overflow = ~degenerate & ~np.isfinite(mu_hat)

    reason = np.zeros(n_rows, dtype=np.int8)
    for code, mask in (
        (6, overflow),
        (5, saturated & ~overflow),
        (4, zero_var),
        (3, too_few),
        (2, bad_positive),
        (1, bad_finite),
    ):
        reason[mask] = code

    no_numbers = degenerate | overflow
    beta_raw = np.where(degenerate, np.nan, beta_raw)
    beta_hat = np.where(no_numbers, np.nan, beta_hat)
    mu_hat = np.where(no_numbers, np.nan, mu_hat)

    return {
        "mu_hat": mu_hat,
        "beta_hat": beta_hat,
        "beta_raw": beta_raw,
        "n_used": n_used,
        "reason": reason,
    }


def _to_estimates(arrays: Dict[str, np.ndarray]) -> List[MomEstimate]:
    out = []
    for mu, beta, raw, n, code in zip(
        arrays["mu_hat"], arrays["beta_hat"], arrays["beta_raw"], arrays["n_used"], arrays["reason"]
    ):
        out.append(
            MomEstimate(
                mu_hat=float(mu),
                beta_hat=float(beta),
                beta_raw=float(raw),
                n_used=int(n),
                valid=bool(code == 0),
                reason=_REASONS[int(code)],
            )
        )
    return out


def mom_estimate(inter_arrivals: Sequence[float], clip: Optional[ClipPolicy] = None) -> MomEstimate:
    """Estimate (mu, beta) from one window of inter-arrival times.

    Args:
        inter_arrivals: Waiting times; all must be finite and > 0.
        clip: Numerical guards; defaults to :class:`ClipPolicy()`.

    Returns:
        A :class:`MomEstimate`; never raises on degenerate data.

    Example:
        >>> mom_estimate([1.0, 1.0, 1.0, 1.0]).reason
        'zero_variance'
    """
    clip = clip or ClipPolicy()
    row = np.asarray(inter_arrivals, dtype=float).reshape(1, -1)
    if row.size == 0:
        return MomEstimate(
            mu_hat=math.nan, beta_hat=math.nan, beta_raw=math.nan,
            n_used=0, valid=False, reason=REASON_TOO_FEW,
        )
    return _to_estimates(_mom_arrays(row, clip))[0]


class MomEstimates(BaseModel):
    """Row-wise estimates for a window matrix, in row order.

    Behaves as a read-only sequence of :class:`MomEstimate`.
    """

    model_config = ConfigDict(frozen=True)

    estimates: List[MomEstimate]

    def __len__(self) -> int:
        return len(self.estimates)

    def __iter__(self) -> Iterator[MomEstimate]:
        return iter(self.estimates)

    def __getitem__(self, index: int) -> MomEstimate:
        return self.estimates[index]

    @property
    def summary(self) -> Dict[str, int]:
        """Counts of valid rows and of each invalid reason."""
        counts: Dict[str, int] = {"total": len(self.estimates), "valid": 0, "invalid": 0}
        for est in self.estimates:
            if est.valid:
                counts["valid"] += 1
            else:
                counts["invalid"] += 1
                counts[est.reason] = counts.get(est.reason, 0) + 1
        return counts

    def to_arrays(self) -> Dict[str, np.ndarray]:
        """Column arrays: mu_hat, beta_hat, valid, usable."""
        return {
            "mu_hat": np.array([e.mu_hat for e in self.estimates], dtype=float),
            "beta_hat": np.array([e.beta_hat for e in self.estimates], dtype=float),
            "valid": np.array([e.valid for e in self.estimates], dtype=bool),
            "usable": np.array([e.usable for e in self.estimates], dtype=bool),
        }


def mom_estimate_windows(windows: np.ndarray, clip: Optional[ClipPolicy] = None) -> MomEstimates:
    """Apply :func:`mom_estimate` to every row of a window matrix.

    Invalid rows stay in place, flagged. An empty matrix gives an empty result.
    """
    clip = clip or ClipPolicy()
    windows = np.asarray(windows, dtype=float)
    if windows.size == 0:
        return MomEstimates(estimates=[])
    if windows.ndim != 2:
        windows = windows.reshape(1, -1)

    result = MomEstimates(estimates=_to_estimates(_mom_arrays(windows, clip)))
    summary = result.summary
    if summary["invalid"]:
        logger.warning("mom_invalid_rows", **summary)
    else:
        logger.debug("mom_windows_estimated", **summary)
    return result
