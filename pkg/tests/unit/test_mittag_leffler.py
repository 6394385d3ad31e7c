"""Unit tests for the Mittag-Leffler function and distribution."""
import importlib
import math

import numpy as np
import pytest
from scipy import integrate, special

from fppnet.errors import ConvergenceError, DomainError
from fppnet.special import MittagLefflerEval, mittag_leffler, ml_cdf, ml_pdf, ml_survival


def _ml_high_precision(a, b, z, dps=60):
    """Reference value of the power series in extended precision."""
    mpmath = pytest.importorskip("mpmath")
    with mpmath.workdps(dps):
        total = mpmath.mpf(0)
        zz = mpmath.mpf(z)
        n = 0
        while True:
            term = zz**n / mpmath.gamma(mpmath.mpf(a) * n + b)
            total += term
            if n > 10 and abs(term) < mpmath.mpf(10) ** (-40):
                break
            n += 1
        return float(total)


class TestMittagLeffler:
    """Test the two-parameter Mittag-Leffler function."""

    @pytest.mark.parametrize("z", np.linspace(-20.0, 5.0, 26))
    def test_exponential_identity(self, z):
        """Test M_{1,1}(z) = exp(z) on [-20, 5]."""
        ev = mittag_leffler(1.0, 1.0, float(z))
        assert ev.converged
        assert ev.value == pytest.approx(math.exp(z), rel=1e-9)

    @pytest.mark.parametrize("z", np.linspace(-5.0, 5.0, 11))
    def test_exponential_identity_by_series(self, z):
        """Test the plain series reproduces exp(z) where it is well conditioned."""
        ev = mittag_leffler(1.0, 1.0, float(z), method="series")
        assert ev.method == "series"
        assert ev.converged
        assert ev.value == pytest.approx(math.exp(z), rel=1e-9)

    def test_zero_argument(self):
        """Test M_{a,b}(0) = 1/Gamma(b)."""
        assert mittag_leffler(0.5, 1.0, 0.0).value == 1.0
        assert mittag_leffler(0.5, 2.5, 0.0).value == pytest.approx(1.0 / math.gamma(2.5), rel=1e-13)

    def test_half_order_at_minus_one(self):
        """Test M_{1/2}(-1) = e * erfc(1)."""
        ev = mittag_leffler(0.5, 1.0, -1.0)
        assert isinstance(ev, MittagLefflerEval)
        assert ev.converged
        assert abs(ev.value - special.erfcx(1.0)) < 1e-10

    @pytest.mark.parametrize("x", [0.1, 1.0, 2.0, 5.0, 10.0, 30.0, 50.0])
    def test_half_order_erfcx_identity(self, x):
        """Test M_{1/2}(-x) = exp(x^2) erfc(x) across the supported range."""
        ev = mittag_leffler(0.5, 1.0, -x)
        assert ev.converged
        assert ev.value == pytest.approx(special.erfcx(x), rel=1e-9)

    @pytest.mark.parametrize("x", [0.1, 1.0, 2.0, 5.0])
    def test_half_order_density_kernel(self, x):
        """Test M_{1/2,1/2}(-x) = 1/sqrt(pi) - x exp(x^2) erfc(x)."""
        expected = 1.0 / math.sqrt(math.pi) - x * special.erfcx(x)
        ev = mittag_leffler(0.5, 0.5, -x)
        assert ev.converged
        assert ev.value == pytest.approx(expected, rel=1e-9)

    @pytest.mark.parametrize("a", [0.5, 0.7, 0.9])
    @pytest.mark.parametrize("b_is_a", [False, True])
    @pytest.mark.parametrize("z", [-0.5, -2.0, -5.0])
    def test_matches_extended_precision(self, a, b_is_a, z):
        """Test agreement with an extended-precision series."""
        b = a if b_is_a else 1.0
        expected = _ml_high_precision(a, b, z)
        ev = mittag_leffler(a, b, z)
        assert ev.converged
        assert ev.value == pytest.approx(expected, rel=1e-9, abs=1e-13)

    def test_positive_argument_series(self):
        """Test a positive argument against extended precision."""
        expected = _ml_high_precision(0.8, 1.0, 3.0)
        ev = mittag_leffler(0.8, 1.0, 3.0)
        assert ev.method == "series"
        assert ev.value == pytest.approx(expected, rel=1e-12)

    def test_term_cap_flags_non_convergence(self):
        """Test that hitting max_terms is reported, not hidden."""
        ev = mittag_leffler(0.5, 1.0, -1.0, max_terms=3, method="series")
        assert not ev.converged
        assert ev.terms_used == 3

    def test_cancellation_flags_non_convergence(self):
        """Test the plain series at a large negative argument is not trusted."""
        ev = mittag_leffler(0.5, 1.0, -15.0, method="series")
        assert not ev.converged
        assert not ev.error_estimate <= 1e-10

    def test_auto_falls_back_to_integral(self):
        """Test auto mode switches to the integral where the series cancels."""
        ev = mittag_leffler(0.5, 1.0, -40.0)
        assert ev.method == "integral"
        assert ev.converged
        assert ev.value == pytest.approx(special.erfcx(40.0), rel=1e-9)

    @pytest.mark.parametrize(
        "a,b,z",
        [(0.0, 1.0, -1.0), (-1.0, 1.0, -1.0), (0.5, 0.0, -1.0), (0.5, 1.0, math.nan), (0.5, 1.0, math.inf)],
    )
    def test_domain(self, a, b, z):
        """Test invalid indices or arguments raise DomainError."""
        with pytest.raises(DomainError):
            mittag_leffler(a, b, z)

    def test_bad_tolerance(self):
        """Test non-positive tolerance is rejected."""
        with pytest.raises(DomainError):
            mittag_leffler(0.5, 1.0, -1.0, tol=0.0)


class TestMittagLefflerDistribution:
    """Test ml_cdf, ml_survival and ml_pdf."""

    def test_cdf_exponential_limit(self):
        """Test beta = 1 gives the exponential CDF."""
        assert ml_cdf(1.0, 2.0, 1.0) == pytest.approx(1.0 - math.exp(-2.0), rel=1e-12)

    def test_cdf_at_zero(self):
        """Test the CDF vanishes at the origin."""
        assert ml_cdf(0.7, 1.0, 0.0) == 0.0
        assert ml_survival(0.7, 1.0, 0.0) == 1.0

    def test_cdf_half_order(self):
        """Test the beta = 1/2 closed form."""
        assert ml_cdf(0.5, 1.0, 1.0) == pytest.approx(1.0 - special.erfcx(1.0), abs=1e-10)

    def test_cdf_accepts_arrays(self):
        """Test vectorised evaluation keeps the input shape."""
        out = ml_cdf(0.6, 1.5, np.array([[0.0, 1.0], [2.0, 3.0]]))
        assert out.shape == (2, 2)
        assert out[0, 0] == 0.0
        assert out[1, 1] == pytest.approx(ml_cdf(0.6, 1.5, 3.0))

    def test_survival_complements_cdf(self):
        """Test survival + CDF = 1."""
        x = np.array([0.3, 1.0, 4.0])
        np.testing.assert_allclose(ml_survival(0.4, 2.0, x) + ml_cdf(0.4, 2.0, x), 1.0, atol=1e-15)

    @pytest.mark.parametrize("beta", [0.2, 0.45, 0.75, 1.0])
    @pytest.mark.parametrize("mu", [0.5, 2.0, 5.0])
    def test_cdf_monotone_and_bounded(self, beta, mu):
        """Test monotonicity and [0, 1] bounds over a wide grid."""
        x = np.logspace(-4.0, 3.0, 40)
        cdf = ml_cdf(beta, mu, x)
        assert np.all(cdf >= 0.0) and np.all(cdf <= 1.0)
        assert np.all(np.diff(cdf) >= -1e-10)

    def test_pdf_exponential_limit(self):
        """Test beta = 1 gives the exponential density."""
        assert ml_pdf(1.0, 2.0, 0.5) == pytest.approx(2.0 * math.exp(-1.0), rel=1e-12)

    def test_pdf_at_zero(self):
        """Test the density at the origin: mu for beta = 1, singular otherwise."""
        assert ml_pdf(1.0, 3.0, 0.0) == 3.0
        with pytest.raises(DomainError):
            ml_pdf(0.5, 1.0, 0.0)

    def test_pdf_is_cdf_derivative(self):
        """Test the density against a central difference of the CDF."""
        h = 1e-5
        fd = (ml_cdf(0.5, 1.0, 1.0 + h) - ml_cdf(0.5, 1.0, 1.0 - h)) / (2.0 * h)
        pdf = ml_pdf(0.5, 1.0, 1.0)
        assert pdf > 0.0
        assert pdf == pytest.approx(fd, abs=1e-6)
        assert pdf == pytest.approx(1.0 / math.sqrt(math.pi) - special.erfcx(1.0), rel=1e-9)

    @pytest.mark.parametrize("x", [0.2, 0.9, 3.0])
    def test_pdf_derivative_other_orders(self, x):
        """Test the derivative relation at beta = 0.7."""
        h = 1e-5
        fd = (ml_cdf(0.7, 1.3, x + h) - ml_cdf(0.7, 1.3, x - h)) / (2.0 * h)
        assert ml_pdf(0.7, 1.3, x) == pytest.approx(fd, abs=1e-6)

    def test_pdf_integrates_to_cdf(self):
        """Test quadrature of the density matches the CDF increment."""
        eps, upper = 1e-3, 4.0
        area, _ = integrate.quad(lambda v: float(ml_pdf(0.7, 1.5, v)), eps, upper, limit=200)
        expected = ml_cdf(0.7, 1.5, upper) - ml_cdf(0.7, 1.5, eps)
        assert area == pytest.approx(expected, abs=1e-5)

    @pytest.mark.parametrize(
        "beta,mu,x", [(0.0, 1.0, 1.0), (1.5, 1.0, 1.0), (0.5, 0.0, 1.0), (0.5, 1.0, -1.0), (0.5, 1.0, math.nan)]
    )
    def test_domain(self, beta, mu, x):
        """Test out-of-domain parameters raise DomainError."""
        with pytest.raises(DomainError):
            ml_cdf(beta, mu, x)

    def test_non_convergence_propagates(self, monkeypatch):
        """Test a failed evaluation surfaces as ConvergenceError."""
        module = importlib.import_module("fppnet.special.mittag_leffler")

        def failing(a, b, z, **kwargs):
            return MittagLefflerEval(
                a=a, b=b, z=z, value=0.5, terms_used=10, converged=False, method="series", error_estimate=1.0
            )

        monkeypatch.setattr(module, "mittag_leffler", failing)
        with pytest.raises(ConvergenceError):
            module.ml_cdf(0.5, 1.0, 2.0)
