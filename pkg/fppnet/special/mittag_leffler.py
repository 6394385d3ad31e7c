"""Two-parameter Mittag-Leffler function and the Mittag-Leffler distribution.

``M_{a,b}(z) = sum_n z**n / Gamma(a*n + b)`` is summed directly with
Neumaier-compensated accumulation. For negative arguments the series is
alternating and loses roughly ``max|term| * eps`` in absolute accuracy; the
result carries that estimate and is only marked converged when it stays below
``max_rel_error``.

For 0 < a < 1, z < 0 and b in {1, a} the function is the Laplace transform of
a positive spectral density, which gives a cancellation-free integral:

    M_{a,1}(-x) = sin(a pi)/(a pi) * int_0^inf exp(-v**(1/a)) * x / (v**2 + 2 v x cos(a pi) + x**2) dv
    M_{a,a}(-x) = sin(a pi)/(a pi) * int_0^inf v**(1/a) exp(-v**(1/a)) / (v**2 + 2 v x cos(a pi) + x**2) dv

``method="auto"`` uses the series while it is trustworthy and the integral
otherwise; ``method="series"`` never falls back. The distribution functions
(survival, CDF and density of inter-arrival times) only need these two cases.
"""

import math
from typing import Literal, Union

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy import integrate

from ..errors import ConvergenceError, DomainError
from ..utils.logging import get_logger
from .gamma import gamma, lgamma

logger = get_logger(__name__)

MAX_TERMS = 10_000
SERIES_TOL = 1e-15
MAX_REL_ERROR = 1e-10
SUPPORTED_ABS_Z = 50.0
"""Documented argument range of the series path."""

_EPS = float(np.finfo(float).eps)
# Past this magnitude of a single term the alternating series cannot deliver
# MAX_REL_ERROR for results of order one; auto mode switches to the integral.
_SERIES_ABORT_TERM = 1e5
# exp(-w) underflows for w above this.
_EXP_CUTOFF = 745.0

Method = Literal["auto", "series"]
ArrayLike = Union[float, np.ndarray, list]


class MittagLefflerEval(BaseModel):
    """Result of one Mittag-Leffler evaluation.

    Attributes:
        a: First index.
        b: Second index.
        z: Argument.
        value: Computed value. Only exact to tolerance when ``converged``.
        terms_used: Series terms summed (1 for closed forms, quadrature
            evaluations for the integral path).
        converged: Whether the value met the tolerance.
        method: "series", "integral" or "exponential".
        error_estimate: Estimated relative error of ``value``.
    """

    model_config = ConfigDict(frozen=True)

    a: float
    b: float
    z: float
    value: float
    terms_used: int
    converged: bool
    method: Literal["series", "integral", "exponential"]
    error_estimate: float


def _series(a: float, b: float, z: float, tol: float, max_terms: int, abort_on_growth: bool):
    """Compensated partial sums of the power series.

    Returns:
        (value, terms_used, stopped, max_abs_term)
    """
    if z == 0.0:
        return 1.0 / gamma(b), 1, True, abs(1.0 / gamma(b))

    log_abs_z = math.log(abs(z))
    total = 0.0
    comp = 0.0
    max_abs = 0.0
    prev_abs = math.inf

    for n in range(max_terms):
        arg = a * n + b
        if arg < 170.0 and n * log_abs_z < 700.0:
            term = z**n / gamma(arg)
        else:
            mag = math.exp(min(n * log_abs_z - lgamma(arg), 709.0))
            term = -mag if (z < 0.0 and n % 2 == 1) else mag

        # Neumaier summation
        t = total + term
        if abs(total) >= abs(term):
            comp += (total - t) + term
        else:
            comp += (term - t) + total
        total = t

        abs_term = abs(term)
        max_abs = max(max_abs, abs_term)
        if abort_on_growth and max_abs > _SERIES_ABORT_TERM:
            return total + comp, n + 1, False, max_abs

        decreasing = abs_term < prev_abs
        if n >= 1 and decreasing and abs_term <= tol * abs(total + comp):
            return total + comp, n + 1, True, max_abs
        prev_abs = abs_term

    return total + comp, max_terms, False, max_abs


def _spectral_integral(a: float, b: float, x: float):
    """Integral representation of M_{a,b}(-x) for 0 < a < 1, b in {1, a}, x > 0.

    Returns:
        (value, abs_error_estimate, evaluations)
    """
    sin_term = math.sin(a * math.pi) / (a * math.pi)
    two_cos = 2.0 * math.cos(a * math.pi)
    inv_a = 1.0 / a
    v_max = _EXP_CUTOFF**a

    if b == 1.0:

        def integrand(v: float) -> float:
            return math.exp(-(v**inv_a)) * x / (v * v + two_cos * v * x + x * x)

    else:

        def integrand(v: float) -> float:
            w = v**inv_a
            return w * math.exp(-w) / (v * v + two_cos * v * x + x * x)

    points = [x] if x < v_max else None
    # quad appends a message to the tuple when it warns
    result = integrate.quad(
        integrand, 0.0, v_max, points=points, epsabs=0.0, epsrel=1e-12, limit=400, full_output=1
    )
    value, abserr, info = result[0], result[1], result[2]
    return sin_term * value, sin_term * abserr, int(info["neval"])


def mittag_leffler(
    a: float,
    b: float,
    z: float,
    tol: float = SERIES_TOL,
    max_terms: int = MAX_TERMS,
    method: Method = "auto",
    max_rel_error: float = MAX_REL_ERROR,
) -> MittagLefflerEval:
    """Evaluate the two-parameter Mittag-Leffler function M_{a,b}(z).

    Args:
        a: First index, > 0.
        b: Second index, > 0.
        z: Real argument. The series path is documented for |z| <= 50.
        tol: Stop once a decreasing term falls below ``tol * |sum|``.
        max_terms: Cap on series terms.
        method: "auto" (closed form / series / integral as appropriate) or
            "series" (plain series only).
        max_rel_error: Largest acceptable estimated relative error, including
            cancellation loss, for the result to count as converged.

    Returns:
        A :class:`MittagLefflerEval`. ``converged`` is False when neither path
        reached the tolerance; the value is then only an approximation.

    Raises:
        DomainError: If a or b is not positive, z is not finite, or tol or
            max_terms are not positive.

    Example:
        >>> round(mittag_leffler(1.0, 1.0, -1.0).value, 7)
        0.3678794
    """
    if not (math.isfinite(a) and a > 0.0):
        raise DomainError(f"a must be finite and > 0, got {a}")
    if not (math.isfinite(b) and b > 0.0):
        raise DomainError(f"b must be finite and > 0, got {b}")
    if not math.isfinite(z):
        raise DomainError(f"z must be finite, got {z}")
    if tol <= 0.0 or max_terms < 1:
        raise DomainError("tol and max_terms must be positive")
    if method not in ("auto", "series"):
        raise DomainError(f"Unknown method '{method}'")

    if method == "auto" and a == 1.0 and b == 1.0:
        return MittagLefflerEval(
            a=a, b=b, z=z, value=math.exp(z), terms_used=1,
            converged=True, method="exponential", error_estimate=_EPS,
        )

    integral_ok = method == "auto" and z < 0.0 and a < 1.0 and (b == 1.0 or b == a)

    value, terms, stopped, max_abs = _series(a, b, z, tol, max_terms, abort_on_growth=integral_ok)
    err = 4.0 * max_abs * _EPS / abs(value) if value != 0.0 else math.inf
    converged = stopped and err <= max_rel_error

    if converged or not integral_ok:
        if not converged:
            logger.debug("ml_series_not_converged", a=a, b=b, z=z, terms=terms, error_estimate=err)
        return MittagLefflerEval(
            a=a, b=b, z=z, value=value, terms_used=terms,
            converged=converged, method="series", error_estimate=err,
        )

    logger.debug("ml_integral_fallback", a=a, b=b, z=z, series_terms=terms, series_error=err)
    ivalue, iabserr, neval = _spectral_integral(a, b, -z)
    ierr = iabserr / abs(ivalue) if ivalue != 0.0 else math.inf
    return MittagLefflerEval(
        a=a, b=b, z=z, value=ivalue, terms_used=neval,
        converged=ierr <= max_rel_error, method="integral", error_estimate=ierr,
    )


def _check_beta_mu(beta: float, mu: float) -> None:
    if not (math.isfinite(beta) and 0.0 < beta <= 1.0):
        raise DomainError(f"beta must lie in (0, 1], got {beta}")
    if not (math.isfinite(mu) and mu > 0.0):
        raise DomainError(f"mu must be finite and > 0, got {mu}")


def _checked_value(ev: MittagLefflerEval) -> float:
    if not ev.converged:
        logger.error("ml_evaluation_failed", a=ev.a, b=ev.b, z=ev.z, method=ev.method)
        raise ConvergenceError(
            f"Mittag-Leffler M_{{{ev.a},{ev.b}}}({ev.z}) did not converge "
            f"(method={ev.method}, error_estimate={ev.error_estimate:.3g})"
        )
    return ev.value


def _ml_survival_scalar(beta: float, mu: float, x: float) -> float:
    if not math.isfinite(x) or x < 0.0:
        raise DomainError(f"x must be finite and >= 0, got {x}")
    if x == 0.0:
        return 1.0
    return _checked_value(mittag_leffler(beta, 1.0, -mu * x**beta))


def _map(fn, beta: float, mu: float, x: ArrayLike):
    _check_beta_mu(beta, mu)
    if np.ndim(x) == 0:
        return fn(beta, mu, float(x))
    arr = np.asarray(x, dtype=float)
    return np.array([fn(beta, mu, float(v)) for v in arr.ravel()]).reshape(arr.shape)


def ml_survival(beta: float, mu: float, x: ArrayLike):
    """Survival function P(T > x) = M_beta(-mu x**beta) of the inter-arrival time."""
    return _map(_ml_survival_scalar, beta, mu, x)


def _ml_cdf_scalar(beta: float, mu: float, x: float) -> float:
    return 1.0 - _ml_survival_scalar(beta, mu, x)


def ml_cdf(beta: float, mu: float, x: ArrayLike):
    """Mittag-Leffler distribution function P(T <= x) = 1 - M_beta(-mu x**beta).

    Accepts a scalar or an array of points.

    Raises:
        DomainError: If beta is outside (0, 1], mu <= 0 or x < 0.
        ConvergenceError: If the Mittag-Leffler evaluation does not converge.
    """
    return _map(_ml_cdf_scalar, beta, mu, x)


def _ml_pdf_scalar(beta: float, mu: float, x: float) -> float:
    if not math.isfinite(x) or x < 0.0:
        raise DomainError(f"x must be finite and >= 0, got {x}")
    if x == 0.0:
        if beta == 1.0:
            return mu
        raise DomainError("density is singular at x = 0 for beta < 1")
    ml = _checked_value(mittag_leffler(beta, beta, -mu * x**beta))
    return mu * x ** (beta - 1.0) * ml


def ml_pdf(beta: float, mu: float, x: ArrayLike):
    """Mittag-Leffler density f(x) = mu x**(beta-1) M_{beta,beta}(-mu x**beta).

    Raises:
        DomainError: If x = 0 with beta < 1 (integrable singularity), or the
            parameters are outside their domain.
        ConvergenceError: If the Mittag-Leffler evaluation does not converge.
    """
    return _map(_ml_pdf_scalar, beta, mu, x)
