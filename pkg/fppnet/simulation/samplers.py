"""Concrete auxiliary-variable samplers."""

import math

import numpy as np

from .base import BaseSampler


class KanterSampler(BaseSampler):
    """Kanter's one-sided stable generator.

        S = sin(beta pi u2) * sin((1-beta) pi u2)**(1/beta - 1)
            / (sin(pi u2)**(1/beta) * |ln u3|**(1/beta - 1))

    Produces waiting times whose law is exactly the Mittag-Leffler
    distribution with survival function M_beta(-mu x**beta).
    """

    name = "kanter"

    def log_auxiliary(self, beta: float, u2: np.ndarray, u3: np.ndarray) -> np.ndarray:
        k = 1.0 / beta - 1.0
        return (
            np.log(np.sin(beta * math.pi * u2))
            + k * np.log(np.sin((1.0 - beta) * math.pi * u2))
            - np.log(np.sin(math.pi * u2)) / beta
            - k * np.log(-np.log(u3))
        )


class PrintedExponentSampler(BaseSampler):
    """Variant with |ln u3|**(1/(beta - 1)) in the denominator.

    This is not a Mittag-Leffler generator; the distributional test rejects
    it. Kept so the comparison can be rerun.
    """

    name = "printed_exponent"

    def log_auxiliary(self, beta: float, u2: np.ndarray, u3: np.ndarray) -> np.ndarray:
        k = 1.0 / beta - 1.0
        return (
            np.log(np.sin(beta * math.pi * u2))
            + k * np.log(np.sin((1.0 - beta) * math.pi * u2))
            - np.log(np.sin(math.pi * u2)) / beta
            - np.log(-np.log(u3)) / (beta - 1.0)
        )
