"""Statistical parameter estimation for geometry attribute distributions.

Four families are fitted to each attribute array: basic moments plus
histogram entropy, a generalized Gaussian (GGD), an asymmetric
generalized Gaussian (AGGD), and a shape/rate Gamma. GGD and AGGD shapes
are solved by moment matching against a precomputed gamma-function ratio
table, the standard practice in natural-scene-statistics quality models.
"""

from __future__ import annotations

import warnings
from typing import NamedTuple

import numpy as np
from scipy.special import gamma as gamma_fn
from scipy.special import gammaln

from .errors import DegenerateInputError

ENTROPY_BINS = 256

# Shape candidates for the GGD/AGGD moment match.
SHAPE_GRID = np.linspace(0.2, 10.0, 9801)  # step 1e-3

_RATIO_TABLE = None


def _shape_ratio_table():
    """r(a) = gamma(2/a)^2 / (gamma(1/a) gamma(3/a)) over SHAPE_GRID."""
    global _RATIO_TABLE
    if _RATIO_TABLE is None:
        a = SHAPE_GRID
        _RATIO_TABLE = np.exp(2 * gammaln(2 / a) - gammaln(1 / a) - gammaln(3 / a))
    return _RATIO_TABLE


class BasicParams(NamedTuple):
    mean: float
    variance: float
    entropy: float


class GgdParams(NamedTuple):
    shape: float
    scale: float


class AggdParams(NamedTuple):
    asymmetry: float
    shape: float
    left_variance: float
    right_variance: float


class GammaParams(NamedTuple):
    shape: float
    rate: float


class OneSidedFieldWarning(UserWarning):
    """AGGD input had values on only one side of zero."""


def _as_field_values(field):
    values = getattr(field, "values", field)
    return np.asarray(values, dtype=np.float64)


def zscore(field):
    """Center and scale to unit variance; degenerate if the field is constant."""
    x = _as_field_values(field)
    sigma = float(np.std(x))
    # ptp == 0 catches bitwise-constant fields whose floating-point
    # variance is a rounding residue rather than exactly zero
    if sigma == 0.0 or np.ptp(x) == 0.0:
        raise DegenerateInputError("cannot z-score a constant field")
    return (x - float(np.mean(x))) / sigma


def shift_to_positive(field):
    """Shift a field to strictly positive support for Gamma fitting.

    Returns ``x - min(x) + eps`` with ``eps = 1e-6 * (max - min + 1)``.
    """
    x = _as_field_values(field)
    lo = float(np.min(x))
    hi = float(np.max(x))
    eps = 1e-6 * (hi - lo + 1.0)
    return x - lo + eps


def histogram_counts(x, bins=ENTROPY_BINS):
    """Equal-width histogram over [min, max] of the samples.

    Ranges too narrow for ``bins`` distinct edges (constant fields, or
    spreads of a few ulps) collapse to a single occupied bin. Returns
    (counts, edges) like ``np.histogram``.
    """
    x = np.asarray(x, dtype=np.float64)
    lo, hi = float(np.min(x)), float(np.max(x))
    if hi - lo > bins * np.spacing(max(abs(lo), abs(hi))):
        return np.histogram(x, bins=bins, range=(lo, hi))
    counts = np.zeros(bins, dtype=np.int64)
    counts[0] = x.size
    return counts, np.linspace(lo, lo + 1.0, bins + 1)


def fit_basic(field):
    """Sample mean, population variance, and 256-bin histogram entropy.

    Entropy is Shannon entropy in nats of the equal-width histogram over
    [min, max] of the samples; empty bins contribute zero. A constant
    field occupies a single bin and has zero entropy.
    """
    x = _as_field_values(field)
    if x.size < 2:
        raise DegenerateInputError("fit_basic needs at least 2 samples")
    mean = float(np.mean(x))
    variance = float(np.var(x))
    counts, _ = histogram_counts(x)
    p = counts[counts > 0] / x.size
    entropy = float(-np.sum(p * np.log(p)))
    return BasicParams(mean, variance, entropy)


def fit_ggd(field):
    """Moment-matching GGD fit on a normalized (zero-centered) field.

    The shape is the grid value whose theoretical ratio
    ``(E|x|)^2 / E[x^2]`` is closest to the empirical one; the scale
    follows as ``sigma * sqrt(gamma(1/a) / gamma(3/a))``.
    """
    x = _as_field_values(field)
    if x.size < 2 or np.all(x == x[0]):
        raise DegenerateInputError("GGD fit needs at least 2 distinct values")
    mean_sq = float(np.mean(x ** 2))
    if mean_sq == 0.0:
        raise DegenerateInputError("GGD fit on an all-zero field")
    gamma_hat = float(np.mean(np.abs(x))) ** 2 / mean_sq
    shape = float(SHAPE_GRID[np.argmin(np.abs(_shape_ratio_table() - gamma_hat))])
    sigma = float(np.std(x))
    scale = sigma * float(np.sqrt(gamma_fn(1.0 / shape) / gamma_fn(3.0 / shape)))
    return GgdParams(shape, scale)


def fit_aggd(field):
    """Moment-matching AGGD fit on a normalized field.

    Left/right variances are the mean squares over x < 0 and x >= 0; the
    shape comes from the tie-corrected moment ratio on the same grid as
    :func:`fit_ggd`; the asymmetry is
    ``(beta_r - beta_l) * gamma(2/v) / gamma(1/v)`` with the usual
    per-side scales. When every value shares one sign the empty side's
    variance is 0 and a :class:`OneSidedFieldWarning` is emitted.
    """
    x = _as_field_values(field)
    if x.size < 2 or np.ptp(x) == 0.0:
        raise DegenerateInputError("AGGD fit needs at least 2 distinct values")
    mean_sq = float(np.mean(x ** 2))
    if mean_sq == 0.0:
        raise DegenerateInputError("AGGD fit on an all-zero field")
    left = x[x < 0]
    right = x[x >= 0]
    sigma_l_sq = float(np.mean(left ** 2)) if left.size else 0.0
    sigma_r_sq = float(np.mean(right ** 2)) if right.size else 0.0
    one_sided = left.size == 0 or not np.any(right > 0)
    if one_sided:
        warnings.warn(
            "AGGD fit on a one-sided field; empty side's variance set to 0",
            OneSidedFieldWarning,
            stacklevel=2,
        )

    r_hat = float(np.mean(np.abs(x))) ** 2 / mean_sq
    if sigma_l_sq == 0.0 or sigma_r_sq == 0.0:
        big_r = r_hat  # limit of the correction factor as the ratio -> 0 or inf
    else:
        g = np.sqrt(sigma_l_sq / sigma_r_sq)
        big_r = r_hat * (g ** 3 + 1.0) * (g + 1.0) / (g ** 2 + 1.0) ** 2
    shape = float(SHAPE_GRID[np.argmin(np.abs(_shape_ratio_table() - big_r))])

    side_factor = float(np.sqrt(gamma_fn(1.0 / shape) / gamma_fn(3.0 / shape)))
    beta_l = np.sqrt(sigma_l_sq) * side_factor
    beta_r = np.sqrt(sigma_r_sq) * side_factor
    asymmetry = (beta_r - beta_l) * float(
        gamma_fn(2.0 / shape) / gamma_fn(1.0 / shape)
    )
    return AggdParams(float(asymmetry), shape, sigma_l_sq, sigma_r_sq)


def fit_gamma(field):
    """Method-of-moments Gamma fit on a strictly positive field.

    Returns exactly ``(mean^2/var, mean/var)``. Signed fields must be
    passed through :func:`shift_to_positive` first.
    """
    x = _as_field_values(field)
    if x.size < 2:
        raise DegenerateInputError("Gamma fit needs at least 2 samples")
    if float(np.min(x)) <= 0.0:
        raise ValueError("Gamma fit requires strictly positive support")
    variance = float(np.var(x))
    if variance == 0.0 or np.ptp(x) == 0.0:
        raise DegenerateInputError("Gamma fit on a constant field")
    mean = float(np.mean(x))
    return GammaParams(mean ** 2 / variance, mean / variance)
