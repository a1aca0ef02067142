"""Order statistics, the Hill estimator and lag-1 dependence scalings.

All operations act on a non-negative view of the data. By default the view
is the absolute value (so signed series such as regression residuals are
handled transparently); with ``use_abs=False`` the input must already be
non-negative. Thresholds are order statistics of the viewed values with ties
kept as-is: exceedance is always strict, so duplicated threshold values
reduce the excess count below ``k - 1``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "DegenerateThresholdError",
    "HillEstimate",
    "ScalingEstimates",
    "estimate_chi",
    "estimate_omega",
    "excess_indicators",
    "hill",
    "log_excesses",
    "nonneg_view",
    "order_statistic",
]


class DegenerateThresholdError(ValueError):
    """Raised when the order-statistic threshold is zero and log excesses are undefined."""


@dataclass(frozen=True)
class HillEstimate:
    """Mean log excess over the (k+1)-th largest value and its reciprocal.

    ``alpha_hat`` is ``1 / hill_mean``; a zero mean (all excesses vanish) is
    flagged as ``alpha_hat = inf`` rather than raising.
    """

    hill_mean: float
    alpha_hat: float
    k: int


@dataclass(frozen=True)
class ScalingEstimates:
    """Lag-1 dependence inflation estimates for the two statistic kinds."""

    omega_hat: float
    chi_hat: float


def nonneg_view(x, use_abs: bool = True) -> np.ndarray:
    """Non-negative 1-d float view of ``x`` (absolute values by default)."""
    v = np.asarray(x, dtype=float)
    if v.ndim != 1:
        raise ValueError(f"expected a 1-d series, got shape {v.shape}")
    if use_abs:
        return np.abs(v)
    if np.any(v < 0.0):
        raise ValueError("series contains negative values; drop use_abs=False or clean the input")
    return v


def _check_k(k: int, n: int) -> None:
    if not 1 <= k <= n - 1:
        raise ValueError(f"k must satisfy 1 <= k <= n - 1 = {n - 1}, got {k}")


def _descending(v: np.ndarray) -> np.ndarray:
    return np.sort(v)[::-1]


def order_statistic(x, j: int, use_abs: bool = True) -> float:
    """The ``j``-th largest value of the non-negative view (``j = 1`` is the maximum)."""
    v = nonneg_view(x, use_abs)
    n = v.size
    if not 1 <= j <= n:
        raise IndexError(f"j must satisfy 1 <= j <= n = {n}, got {j}")
    # partition puts the (n-j)-th smallest in place, i.e. the j-th largest
    return float(np.partition(v, n - j)[n - j])


def _hill_sorted(v: np.ndarray, srt: np.ndarray, k: int) -> HillEstimate:
    threshold = srt[k]
    if threshold <= 0.0:
        raise DegenerateThresholdError(
            f"(k+1)-th largest value is 0 (k={k}); the mean log excess is undefined"
        )
    mean = float(np.log(v[v > threshold] / threshold).sum()) / k
    return HillEstimate(hill_mean=mean, alpha_hat=(1.0 / mean if mean > 0.0 else np.inf), k=k)


def hill(x, k: int, use_abs: bool = True) -> HillEstimate:
    """Mean positive part of ``log X_i - log X_(k+1)`` over the whole sample, and its reciprocal.

    Parameters
    ----------
    x : array_like
        Observed series; the non-negative view is used.
    k : int
        Tail sample fraction, ``1 <= k <= n - 1``. The threshold is the
        (k+1)-th largest viewed value and must be positive.
    """
    v = nonneg_view(x, use_abs)
    _check_k(k, v.size)
    return _hill_sorted(v, _descending(v), k)


def excess_indicators(x, k: int, use_abs: bool = True) -> np.ndarray:
    """0/1 array marking values strictly above the k-th largest value.

    With all values distinct the indicators sum to ``k - 1`` (the threshold
    itself is excluded); ties at the threshold lower the sum further.
    """
    v = nonneg_view(x, use_abs)
    _check_k(k, v.size)
    threshold = _descending(v)[k - 1]
    return (v > threshold).astype(np.int64)


def log_excesses(x, k: int, use_abs: bool = True) -> np.ndarray:
    """Positive parts of ``log X_i - log X_(k)``; requires a positive threshold."""
    v = nonneg_view(x, use_abs)
    _check_k(k, v.size)
    threshold = _descending(v)[k - 1]
    if threshold <= 0.0:
        raise DegenerateThresholdError(
            f"k-th largest value is 0 (k={k}); log excesses are undefined"
        )
    return _log_excess_values(v, threshold)


def _log_excess_values(v: np.ndarray, threshold: float) -> np.ndarray:
    out = np.zeros(v.size)
    mask = v > threshold
    out[mask] = np.log(v[mask] / threshold)
    return out


def estimate_omega(x, k: int, use_abs: bool = True, max_lag: int = 1) -> float:
    """Joint-exceedance estimate of the variance inflation of the indicator statistic.

    Computes ``(2 / k) * sum_i I(X_i > X_(k), X_{i+h} > X_(k))`` summed over
    lags ``h = 1..max_lag``. The published estimator is lag-1 only, which is
    adequate for 2-dependent series such as MA(1); deeper lags are an
    extension for longer dependence.
    """
    v = nonneg_view(x, use_abs)
    _check_k(k, v.size)
    if max_lag < 1:
        raise ValueError(f"max_lag must be at least 1, got {max_lag}")
    threshold = _descending(v)[k - 1]
    ind = v > threshold
    total = 0
    for lag in range(1, max_lag + 1):
        total += int(np.count_nonzero(ind[:-lag] & ind[lag:]))
    return 2.0 * total / k


def estimate_chi(x, k: int, alpha_hat: float, use_abs: bool = True, max_lag: int = 1) -> float:
    """Joint log-excess estimate of the variance inflation of the log-excess statistic.

    Computes ``(2 * alpha_hat / k) * sum_i (log X_i - log X_(k))_+
    (log X_{i+h} - log X_(k))_+`` summed over lags ``h = 1..max_lag``
    (lag-1 is the published form; see :func:`estimate_omega`).
    """
    if not np.isfinite(alpha_hat) or alpha_hat <= 0.0:
        raise DegenerateThresholdError(
            f"alpha_hat must be finite and positive, got {alpha_hat}"
        )
    v = nonneg_view(x, use_abs)
    _check_k(k, v.size)
    if max_lag < 1:
        raise ValueError(f"max_lag must be at least 1, got {max_lag}")
    threshold = _descending(v)[k - 1]
    if threshold <= 0.0:
        raise DegenerateThresholdError(
            f"k-th largest value is 0 (k={k}); log excesses are undefined"
        )
    le = _log_excess_values(v, threshold)
    total = 0.0
    for lag in range(1, max_lag + 1):
        total += float(np.dot(le[:-lag], le[lag:]))
    return 2.0 * alpha_hat * total / k
