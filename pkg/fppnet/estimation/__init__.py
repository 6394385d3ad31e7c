"""Classical estimators for FPP parameters."""

from ..config import ClipPolicy
from .mom import MomEstimate, MomEstimates, mom_estimate, mom_estimate_windows

__all__ = [
    "ClipPolicy",
    "MomEstimate",
    "MomEstimates",
    "mom_estimate",
    "mom_estimate_windows",
]
