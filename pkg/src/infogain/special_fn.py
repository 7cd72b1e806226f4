"""Log-gamma, digamma and log-beta for positive real arguments.

All functions accept a Python scalar or a numpy array and return the same
kind. Only the positive half-line is supported; there is no reflection
formula because every posterior shape parameter used by this package is
strictly positive.

Both ``log_gamma`` and ``digamma`` shift small arguments upward with the
functional recurrence and then evaluate the Stirling / de Moivre asymptotic
series. Series coefficients are the even Bernoulli numbers
B2..B16 (Abramowitz & Stegun, Table 23.2):

    B2 = 1/6, B4 = -1/30, B6 = 1/42, B8 = -1/30, B10 = 5/66,
    B12 = -691/2730, B14 = 7/6, B16 = -3617/510
"""

import math

import numpy as np

from .errors import DomainError

# digamma: psi(x) ~ ln x - 1/(2x) - sum_k B_2k / (2k x^2k), k = 1..7.
# Truncation error at x = 6 is below |B16| / (16 * 6**16) ~ 1.6e-13.
_DIGAMMA_SHIFT = 6.0
_DIGAMMA_COEFFS = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
)

# log-gamma: ln G(x) ~ (x - 1/2) ln x - x + ln(2 pi)/2
#                      + sum_k B_2k / (2k (2k - 1) x^(2k - 1)), k = 1..8.
# Truncation error at x = 10 is below B18 / (306 * 10**17) ~ 2e-18.
_LGAMMA_SHIFT = 10.0
_LGAMMA_COEFFS = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def _as_positive_array(x, name):
    arr = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} requires finite arguments")
    if np.any(arr <= 0.0):
        raise DomainError(f"{name} requires strictly positive arguments")
    return arr


def _polynomial(coeffs, z):
    # Horner in z, lowest-order coefficient first.
    acc = np.zeros_like(z)
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def _unwrap(value, like):
    return float(value) if np.ndim(like) == 0 else value


def _check_scalar(x, name):
    if not math.isfinite(x):
        raise DomainError(f"{name} requires finite arguments")
    if x <= 0.0:
        raise DomainError(f"{name} requires strictly positive arguments")


# Scalar fast paths: same algorithm as the array code, without numpy overhead.

def _digamma_scalar(x):
    _check_scalar(x, "digamma")
    shift = 0.0
    while x < _DIGAMMA_SHIFT:
        shift += 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    acc = 0.0
    for c in reversed(_DIGAMMA_COEFFS):
        acc = acc * inv2 + c
    return math.log(x) - 0.5 / x - inv2 * acc - shift


def _log_gamma_scalar(x):
    _check_scalar(x, "log_gamma")
    prod = 1.0
    while x < _LGAMMA_SHIFT:
        prod *= x
        x += 1.0
    inv = 1.0 / x
    inv2 = inv * inv
    acc = 0.0
    for c in reversed(_LGAMMA_COEFFS):
        acc = acc * inv2 + c
    return (x - 0.5) * math.log(x) - x + _HALF_LOG_2PI + inv * acc - math.log(prod)


def digamma(x):
    """Digamma function psi(x) = d/dx ln Gamma(x) for x > 0.

    Absolute error is at most ~1e-13 over [1e-3, 1e8].
    """
    if isinstance(x, (int, float)):
        return _digamma_scalar(float(x))
    arr = _as_positive_array(x, "digamma")
    z = arr.copy()
    shift = np.zeros_like(z)
    # at most six steps are ever needed to reach the asymptotic region
    while True:
        low = z < _DIGAMMA_SHIFT
        if not np.any(low):
            break
        shift = np.where(low, shift + 1.0 / np.where(low, z, 1.0), shift)
        z = np.where(low, z + 1.0, z)
    inv2 = 1.0 / (z * z)
    series = inv2 * _polynomial(_DIGAMMA_COEFFS, inv2)
    result = np.log(z) - 0.5 / z - series - shift
    return _unwrap(result, x)


def log_gamma(x):
    """Natural log of the gamma function for x > 0.

    Absolute error is ~1e-14 while |ln Gamma(x)| is O(1); for large x the
    error is a few units in the last place of the result.
    """
    if isinstance(x, (int, float)):
        return _log_gamma_scalar(float(x))
    arr = _as_positive_array(x, "log_gamma")
    z = arr.copy()
    prod = np.ones_like(z)
    while True:
        low = z < _LGAMMA_SHIFT
        if not np.any(low):
            break
        prod = np.where(low, prod * z, prod)
        z = np.where(low, z + 1.0, z)
    inv = 1.0 / z
    series = inv * _polynomial(_LGAMMA_COEFFS, inv * inv)
    result = (z - 0.5) * np.log(z) - z + _HALF_LOG_2PI + series - np.log(prod)
    return _unwrap(result, x)


def log_beta(a, b):
    """ln B(a, b) = ln Gamma(a) + ln Gamma(b) - ln Gamma(a + b)."""
    if isinstance(a, (int, float)) and isinstance(b, (int, float)):
        a, b = float(a), float(b)
        return _log_gamma_scalar(a) + _log_gamma_scalar(b) - log_gamma(a + b)
    a_arr = _as_positive_array(a, "log_beta")
    b_arr = _as_positive_array(b, "log_beta")
    result = log_gamma(a_arr) + log_gamma(b_arr) - log_gamma(a_arr + b_arr)
    if np.ndim(a) == 0 and np.ndim(b) == 0:
        return float(result)
    return result
