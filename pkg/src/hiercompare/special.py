"""Location-scale Student t, rate-parameterized Gamma and Cauchy helpers.

Thin, vectorized wrappers over :mod:`scipy.special` with argument checking.
Everything returns numpy arrays or floats and accepts broadcastable input.
"""
import numpy as np
from scipy import special as sc

from .exceptions import DomainError

_LOG_PI = np.log(np.pi)


def _check_positive(name, value):
    if np.any(~(np.asarray(value) > 0)):
        raise DomainError(f"{name} must be > 0, got {value!r}")


def student_t_logpdf(x, loc, scale, df):
    """Log-density of the location-scale Student t.

    Evaluated as the standard t log-density at ``(x - loc) / scale`` minus
    ``log(scale)``.
    """
    _check_positive("scale", scale)
    _check_positive("df", df)
    return _student_t_logpdf_unchecked(x, loc, scale, df)


def _student_t_logpdf_unchecked(x, loc, scale, df):
    z = (np.asarray(x, dtype=float) - loc) / scale
    return (
        sc.gammaln(0.5 * (df + 1.0))
        - sc.gammaln(0.5 * df)
        - 0.5 * (np.log(df) + _LOG_PI)
        - np.log(scale)
        - 0.5 * (df + 1.0) * np.log1p(z * z / df)
    )


def student_t_pdf(x, loc, scale, df):
    return np.exp(student_t_logpdf(x, loc, scale, df))


def student_t_cdf(x, loc, scale, df):
    """CDF of the location-scale Student t (handles ``x = +-inf``)."""
    _check_positive("scale", scale)
    _check_positive("df", df)
    return sc.stdtr(df, (np.asarray(x, dtype=float) - loc) / scale)


def gamma_logpdf(x, shape, rate):
    """Log-density of Gamma(shape, rate), mean ``shape / rate``.

    Returns ``-inf`` for ``x <= 0``.
    """
    _check_positive("shape", shape)
    _check_positive("rate", rate)
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = shape * np.log(rate) - sc.gammaln(shape) + (shape - 1.0) * np.log(x) - rate * x
    return np.where(x > 0, out, -np.inf)


def gamma_pdf(x, shape, rate):
    return np.exp(gamma_logpdf(x, shape, rate))


def gamma_cdf(x, shape, rate):
    _check_positive("shape", shape)
    _check_positive("rate", rate)
    x = np.asarray(x, dtype=float)
    return sc.gammainc(shape, rate * np.clip(x, 0.0, np.inf))


def gamma_moments(shape, rate):
    """Mean and standard deviation of Gamma(shape, rate)."""
    _check_positive("shape", shape)
    _check_positive("rate", rate)
    return shape / rate, np.sqrt(shape) / rate


def normal_logpdf(x, loc, scale):
    z = (np.asarray(x, dtype=float) - loc) / scale
    return -0.5 * z * z - np.log(scale) - 0.5 * np.log(2.0 * np.pi)


def cauchy_sample(loc, scale, rng, size=None):
    """Draw from Cauchy(loc, scale) by inverting the CDF."""
    _check_positive("scale", scale)
    u = rng.random(size)
    return loc + scale * np.tan(np.pi * (u - 0.5))
