"""Unit tests for the Gamma and Beta helpers."""
import math

import numpy as np
import pytest
from scipy import special

from fppnet.errors import DomainError
from fppnet.special import EULER_GAMMA, beta_fn, gamma, lgamma


class TestGamma:
    """Test the Lanczos Gamma function."""

    @pytest.mark.parametrize("x", np.linspace(0.05, 30.0, 120))
    def test_matches_reference(self, x):
        """Test relative error below 1e-12 on (0, 30]."""
        assert gamma(float(x)) == pytest.approx(math.gamma(x), rel=1e-12)

    def test_integer_arguments_are_factorials(self):
        """Test Gamma(n + 1) = n!."""
        for n in range(1, 15):
            assert gamma(n + 1.0) == pytest.approx(math.factorial(n), rel=1e-13)

    def test_half(self):
        """Test Gamma(1/2) = sqrt(pi)."""
        assert gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-14)

    def test_overflow_returns_inf(self):
        """Test arguments past the double range give inf."""
        assert gamma(200.0) == math.inf

    @pytest.mark.parametrize("x", [0.0, -1.0, -0.5, math.nan, math.inf])
    def test_domain(self, x):
        """Test non-positive or non-finite arguments are rejected."""
        with pytest.raises(DomainError):
            gamma(x)


class TestLogGamma:
    """Test lgamma."""

    @pytest.mark.parametrize("x", [0.1, 0.5, 1.0, 1.5, 2.0, 7.3, 29.9, 150.0, 1000.0])
    def test_matches_reference(self, x):
        """Test absolute agreement with math.lgamma."""
        assert lgamma(x) == pytest.approx(math.lgamma(x), rel=1e-12, abs=1e-12)

    def test_domain(self):
        """Test lgamma rejects zero."""
        with pytest.raises(DomainError):
            lgamma(0.0)


class TestBetaAndConstant:
    """Test beta_fn and the Euler-Mascheroni constant."""

    def test_beta_one_half(self):
        """Test B(1, 1/2) = 2, the value that zeroes the Poisson bracket."""
        assert beta_fn(1.0, 0.5) == pytest.approx(2.0, rel=1e-14)

    @pytest.mark.parametrize("a,b", [(0.2, 0.5), (0.7, 0.5), (3.0, 4.5), (100.0, 90.0)])
    def test_matches_scipy(self, a, b):
        """Test agreement with scipy.special.beta."""
        assert beta_fn(a, b) == pytest.approx(special.beta(a, b), rel=1e-11)

    def test_beta_domain(self):
        """Test non-positive arguments are rejected."""
        with pytest.raises(DomainError):
            beta_fn(-1.0, 0.5)

    def test_euler_gamma(self):
        """Test the stored constant."""
        assert EULER_GAMMA == pytest.approx(np.euler_gamma, rel=1e-15)
