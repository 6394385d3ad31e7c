"""Unit tests for the counting-process moment formulas."""
import math

import numpy as np
import pytest
from scipy import special

from fppnet.config import FppParams
from fppnet.errors import DomainError
from fppnet.simulation import simulate_counts
from fppnet.special import FppMoments, fpp_mean, fpp_moments, fpp_rate, fpp_variance
from fppnet.special.moments import variance_bracket


def _assert_matches_simulation(mu, beta, t, n_paths, seed, n_se):
    counts = simulate_counts(FppParams(mu=mu, beta=beta), t=t, n_paths=n_paths, rng_seed=seed).astype(float)
    mean, var = counts.mean(), counts.var(ddof=1)
    se_mean = math.sqrt(var / n_paths)
    fourth = np.mean((counts - mean) ** 4)
    se_var = math.sqrt(max(fourth - var**2, 0.0) / n_paths)
    assert abs(mean - fpp_mean(mu, beta, t)) < n_se * se_mean
    assert abs(var - fpp_variance(mu, beta, t)) < n_se * se_var


class TestMean:
    """Test fpp_mean."""

    def test_poisson_limit(self):
        """Test beta = 1 gives mu t."""
        assert fpp_mean(1.0, 1.0, 3.0) == pytest.approx(3.0, rel=1e-13)

    def test_fractional_value(self):
        """Test (mu=2, beta=0.5, t=4) against an independent Gamma."""
        expected = 2.0 / special.gamma(1.5) * 2.0
        assert fpp_mean(2.0, 0.5, 4.0) == pytest.approx(expected, rel=1e-12)
        assert fpp_mean(2.0, 0.5, 4.0) == pytest.approx(4.51352, abs=1e-5)

    def test_zero_time(self):
        """Test no events are expected at t = 0."""
        assert fpp_mean(5.0, 0.9, 0.0) == 0.0

    def test_rate(self):
        """Test q = mu / Gamma(1 + beta)."""
        assert fpp_rate(3.0, 0.4) == pytest.approx(3.0 / special.gamma(1.4), rel=1e-12)

    @pytest.mark.parametrize("mu,beta,t", [(0.0, 0.5, 1.0), (1.0, 0.0, 1.0), (1.0, 1.2, 1.0), (1.0, 0.5, -1.0)])
    def test_domain(self, mu, beta, t):
        """Test out-of-domain arguments raise DomainError."""
        with pytest.raises(DomainError):
            fpp_mean(mu, beta, t)


class TestVariance:
    """Test fpp_variance and the bracket term."""

    def test_poisson_limit(self):
        """Test beta = 1 gives variance = mean = mu t."""
        assert fpp_variance(1.0, 1.0, 3.0) == pytest.approx(3.0, abs=1e-12)

    @pytest.mark.parametrize("mu", [0.3, 1.0, 7.5])
    @pytest.mark.parametrize("t", [0.5, 2.0, 40.0])
    def test_poisson_identity(self, mu, t):
        """Test variance equals mean at beta = 1."""
        assert fpp_variance(mu, 1.0, t) == pytest.approx(fpp_mean(mu, 1.0, t), rel=1e-12, abs=1e-12)

    def test_bracket_vanishes_at_one(self):
        """Test the bracket is zero at beta = 1 and positive below it."""
        assert variance_bracket(1.0) == 0.0
        for beta in (0.1, 0.3, 0.5, 0.7, 0.95):
            assert variance_bracket(beta) > 0.0

    def test_zero_time(self):
        """Test zero variance at t = 0."""
        assert fpp_variance(2.0, 0.6, 0.0) == 0.0

    @pytest.mark.parametrize("beta", [0.05, 0.2, 0.5, 0.8, 1.0])
    def test_non_negative(self, beta):
        """Test the variance is non-negative across parameters."""
        for mu in (0.1, 1.0, 10.0):
            for t in (1e-3, 1.0, 1e3):
                assert fpp_variance(mu, beta, t) >= 0.0

    def test_overdispersion_below_one(self):
        """Test fractional processes are overdispersed relative to Poisson."""
        assert fpp_variance(1.0, 0.5, 1.0) > fpp_mean(1.0, 0.5, 1.0)

    def test_bundle(self):
        """Test fpp_moments collects both moments with q."""
        m = fpp_moments(2.0, 0.8, 2.0)
        assert isinstance(m, FppMoments)
        assert m.mean == fpp_mean(2.0, 0.8, 2.0)
        assert m.variance == fpp_variance(2.0, 0.8, 2.0)
        assert m.q == fpp_rate(2.0, 0.8)
        assert (m.t, m.beta) == (2.0, 0.8)


class TestMomentsBySimulation:
    """Test the formulas against simulated counts."""

    @pytest.mark.parametrize("mu,beta,t", [(1.0, 0.5, 1.0), (2.0, 0.8, 2.0)])
    def test_reduced_sample(self, mu, beta, t):
        """Test mean and variance within 4 standard errors over 20 000 paths."""
        _assert_matches_simulation(mu, beta, t, n_paths=20_000, seed=101, n_se=4.0)

    @pytest.mark.slow
    @pytest.mark.parametrize("mu,beta,t", [(1.0, 0.5, 1.0), (2.0, 0.8, 2.0)])
    def test_full_sample(self, mu, beta, t):
        """Test mean and variance within 3 standard errors over 10^5 paths."""
        _assert_matches_simulation(mu, beta, t, n_paths=100_000, seed=7, n_se=3.0)

    @pytest.mark.slow
    def test_variance_million_paths(self):
        """Test the (mu=1, beta=0.5, t=1) variance over 10^6 paths."""
        _assert_matches_simulation(1.0, 0.5, 1.0, n_paths=1_000_000, seed=19, n_se=3.0)
