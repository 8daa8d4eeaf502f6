"""Agreement criteria between predicted and subjective scores.

Spearman and Kendall use the standard tie-corrected forms (average
ranks, tau-b). Degenerate inputs (zero variance) raise instead of
propagating NaN.
"""

from __future__ import annotations

import warnings

import numpy as np
from scipy import optimize, stats

from .errors import DegenerateInputError


def _validated(pred, mos, min_n):
    p = np.asarray(pred, dtype=np.float64)
    m = np.asarray(mos, dtype=np.float64)
    if p.shape != m.shape or p.ndim != 1:
        raise ValueError("score vectors must be 1-d and of equal length")
    if len(p) < min_n:
        raise ValueError(f"need at least {min_n} scores, got {len(p)}")
    if not (np.all(np.isfinite(p)) and np.all(np.isfinite(m))):
        raise ValueError("score vectors must be finite")
    return p, m


def _pearson(p, m):
    p_c = p - p.mean()
    m_c = m - m.mean()
    denom = np.sqrt(np.sum(p_c ** 2) * np.sum(m_c ** 2))
    if denom == 0.0:
        raise DegenerateInputError("correlation undefined for a constant vector")
    return float(np.dot(p_c, m_c) / denom)


def plcc(pred, mos):
    """Pearson linear correlation coefficient."""
    return _pearson(*_validated(pred, mos, 3))


def srcc(pred, mos):
    """Spearman rank correlation; ties receive average ranks."""
    p, m = _validated(pred, mos, 3)
    return _pearson(stats.rankdata(p), stats.rankdata(m))


def krcc(pred, mos):
    """Kendall rank correlation, tau-b (tie-corrected)."""
    p, m = _validated(pred, mos, 3)
    if np.all(p == p[0]) or np.all(m == m[0]):
        raise DegenerateInputError("correlation undefined for a constant vector")
    return float(stats.kendalltau(p, m, variant="b").statistic)


def rmse(pred, mos):
    """Root mean squared error on the raw score scale."""
    p, m = _validated(pred, mos, 2)
    return float(np.sqrt(np.mean((p - m) ** 2)))


def logistic_4param(x, upper, lower, center, slope):
    return (upper - lower) / (1.0 + np.exp(-(x - center) / np.abs(slope))) + lower


def logistic_remap(pred, mos):
    """Least-squares 4-parameter logistic remapping of predictions.

    The common VQA convention before computing PLCC/RMSE when predictor
    and subjective scales differ. Falls back to the raw predictions
    (with a warning) when the fit does not converge.
    """
    p, m = _validated(pred, mos, 4)
    spread = float(np.std(p))
    if spread == 0.0:
        raise DegenerateInputError("cannot remap constant predictions")
    init = [float(np.max(m)), float(np.min(m)), float(np.mean(p)), spread / 4.0]
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", optimize.OptimizeWarning)
            popt, _ = optimize.curve_fit(logistic_4param, p, m, p0=init, maxfev=20000)
    except RuntimeError:
        warnings.warn("logistic remap did not converge; using raw scores")
        return p
    return logistic_4param(p, *popt)
