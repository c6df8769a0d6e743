"""
Standard normal CDF family and small log helpers.

Phi is scipy's erfc-based ``ndtr`` so the lower tail keeps relative
accuracy; upper-tail quantities are always computed by reflection
(``std_normal_sf``) rather than as ``1 - Phi``.
"""
import math

import numpy as np
from scipy import special

from .exceptions import DomainError

# |x| beyond this saturates Phi to {0, 1}
TAIL_CUTOFF = 38.0

_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def _as_result(value):
    value = np.asarray(value, dtype=float)
    return float(value) if value.ndim == 0 else value


def std_normal_pdf(x):
    x = np.asarray(x, dtype=float)
    return _as_result(_INV_SQRT_2PI * np.exp(-0.5 * x * x))


def std_normal_cdf(x):
    """Phi(x), saturated to 0/1 outside [-TAIL_CUTOFF, TAIL_CUTOFF]."""
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise DomainError('std_normal_cdf requires finite arguments')
    out = special.ndtr(x)
    out = np.where(x > TAIL_CUTOFF, 1.0, out)
    out = np.where(x < -TAIL_CUTOFF, 0.0, out)
    return _as_result(out)


def std_normal_sf(x):
    """Upper tail 1 - Phi(x), accurate where Phi(x) rounds to 1."""
    return std_normal_cdf(-np.asarray(x, dtype=float))


def log_std_normal_cdf(x):
    """log Phi(x) without forming Phi(x) first."""
    x = np.asarray(x, dtype=float)
    return _as_result(special.log_ndtr(x))


def _lower_quantile(p):
    # p in (0, 0.5]; Newton polish against ndtr in the tail where it is accurate
    x = float(special.ndtri(p))
    density = float(std_normal_pdf(x))
    if density > 0.0:
        x -= (float(special.ndtr(x)) - p) / density
    return x


def std_normal_quantile(p):
    """Phi^{-1}(p) for 0 < p < 1.

    Rational approximation (cephes ``ndtri``) followed by one Newton step.
    The upper half is reflected onto the lower one; 1 - p is exact there.
    """
    p = float(p)
    if not 0.0 < p < 1.0:
        raise DomainError(f'std_normal_quantile requires 0 < p < 1, got {p!r}')
    if p > 0.5:
        return -_lower_quantile(1.0 - p)
    return _lower_quantile(p)


def log1p_safe(x):
    x = float(x)
    if not x > -1.0:
        raise DomainError(f'log1p_safe requires x > -1, got {x!r}')
    return float(np.log1p(x))


def xlogx(u):
    """u * log(u) with the 0 log 0 = 0 convention."""
    u = np.asarray(u, dtype=float)
    if np.any(u < 0):
        raise DomainError('xlogx requires u >= 0')
    return _as_result(special.xlogy(u, u))
