"""Special-function kernel: Gamma/Beta, Mittag-Leffler, FPP moments."""

from .gamma import EULER_GAMMA, beta_fn, gamma, lgamma
from .mittag_leffler import (
    MittagLefflerEval,
    mittag_leffler,
    ml_cdf,
    ml_pdf,
    ml_survival,
)
from .moments import FppMoments, fpp_mean, fpp_moments, fpp_rate, fpp_variance

__all__ = [
    "EULER_GAMMA",
    "gamma",
    "lgamma",
    "beta_fn",
    "MittagLefflerEval",
    "mittag_leffler",
    "ml_cdf",
    "ml_pdf",
    "ml_survival",
    "FppMoments",
    "fpp_rate",
    "fpp_mean",
    "fpp_variance",
    "fpp_moments",
]
