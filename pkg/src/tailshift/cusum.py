"""CUSUM statistics for a change in the tail index, and the change-point estimate.

The deviation process compares the running count (or running sum of log
excesses) over a high order-statistic threshold with its proportional share;
its maximum absolute value, scaled for dependence, is referred against the
sup-Brownian-bridge law. The first index attaining the maximum locates the
change.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import null_dist
from .tail_core import (
    DegenerateThresholdError,
    ScalingEstimates,
    _descending,
    _hill_sorted,
    _log_excess_values,
    nonneg_view,
)

__all__ = [
    "PHI_KINDS",
    "ADJUST_MODES",
    "TailTestConfig",
    "TestOutcome",
    "cusum_statistic",
    "deviation_process",
    "run_test",
    "scale_factor",
]

PHI_KINDS = ("indicator", "log_excess")
ADJUST_MODES = ("iid", "lag1")


def _check_phi(phi: str) -> None:
    if phi not in PHI_KINDS:
        raise ValueError(f"phi must be one of {PHI_KINDS}, got {phi!r}")


def _check_adjust(adjust: str) -> None:
    if adjust not in ADJUST_MODES:
        raise ValueError(f"adjust must be one of {ADJUST_MODES}, got {adjust!r}")


@dataclass(frozen=True)
class TailTestConfig:
    """Configuration of a tail-index change test.

    ``k`` is the tail sample fraction (number of upper order statistics),
    ``phi`` selects the exceedance transform ("indicator" counts exceedances,
    "log_excess" accumulates their log sizes), ``adjust`` picks the scaling
    ("iid" for independent data, "lag1" to correct for short-range dependence
    with the lag-1 estimates), and ``level`` is the nominal significance level.
    """

    k: int
    phi: str = "indicator"
    adjust: str = "iid"
    level: float = 0.05
    use_abs: bool = True

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be positive, got {self.k}")
        _check_phi(self.phi)
        _check_adjust(self.adjust)
        if not 0.0 < self.level < 1.0:
            raise ValueError(f"level must lie in (0, 1), got {self.level}")


@dataclass(frozen=True)
class TestOutcome:
    """Full record of one test run.

    ``scaled_statistic = scale_factor * statistic`` is compared against
    ``critical_value`` (reject when >=). ``l_hat`` is the smallest index
    attaining the maximum deviation and ``tau_hat = l_hat / n`` the implied
    change-point fraction. ``omega_hat``/``chi_hat`` are filled only in lag1
    mode.
    """

    n: int
    k: int
    phi: str
    adjust: str
    level: float
    alpha_hat: float
    omega_hat: float | None
    chi_hat: float | None
    statistic: float
    scale_factor: float
    scaled_statistic: float
    critical_value: float
    reject: bool
    l_hat: int
    tau_hat: float


def _phi_values(v: np.ndarray, threshold: float, phi: str) -> np.ndarray:
    if phi == "indicator":
        return (v > threshold).astype(float)
    return _log_excess_values(v, threshold)


def _deviations(values: np.ndarray) -> np.ndarray:
    n = values.size
    return np.cumsum(values) - np.arange(1, n + 1) / n * values.sum()


def deviation_process(x, k: int, phi: str = "indicator", use_abs: bool = True) -> np.ndarray:
    """Partial deviations ``D(l)`` of the transformed exceedances, ``l = 1..n``.

    ``D(l)`` is the sum of the first ``l`` transformed values minus ``l/n``
    times their total, so ``D(n) = 0`` up to rounding. The threshold is the
    k-th largest viewed value and must be positive for the log transform.
    """
    _check_phi(phi)
    v = nonneg_view(x, use_abs)
    n = v.size
    if not 1 <= k <= n - 1:
        raise ValueError(f"k must satisfy 1 <= k <= n - 1 = {n - 1}, got {k}")
    threshold = _descending(v)[k - 1]
    if phi == "log_excess" and threshold <= 0.0:
        raise DegenerateThresholdError(
            f"k-th largest value is 0 (k={k}); log excesses are undefined"
        )
    return _deviations(_phi_values(v, threshold, phi))


def cusum_statistic(x, k: int, phi: str = "indicator", use_abs: bool = True) -> tuple[float, int]:
    """Raw statistic ``max_l |D(l)| / sqrt(k)`` and the smallest maximizing ``l``."""
    d = deviation_process(x, k, phi, use_abs)
    abs_d = np.abs(d)
    l_hat = int(np.argmax(abs_d)) + 1  # argmax returns the first maximum
    return float(abs_d[l_hat - 1]) / math.sqrt(k), l_hat


def scale_factor(
    phi: str,
    adjust: str,
    alpha_hat: float | None = None,
    scalings: ScalingEstimates | None = None,
) -> float:
    """Dependence/shape scaling applied to the raw statistic before comparison.

    indicator:  1 under iid, ``1 / sqrt(1 + omega_hat)`` under lag1.
    log_excess: ``alpha_hat / sqrt(2)`` under iid,
                ``alpha_hat / sqrt(2 + chi_hat)`` under lag1.
    """
    _check_phi(phi)
    _check_adjust(adjust)
    if phi == "log_excess":
        if alpha_hat is None or not np.isfinite(alpha_hat) or alpha_hat <= 0.0:
            raise ValueError(
                f"log_excess scaling requires a finite positive alpha_hat, got {alpha_hat}"
            )
    if adjust == "iid":
        return 1.0 if phi == "indicator" else alpha_hat / math.sqrt(2.0)
    if scalings is None:
        raise ValueError("lag1 adjustment requires ScalingEstimates")
    if phi == "indicator":
        if scalings.omega_hat < 0.0:
            raise ValueError(f"omega_hat must be non-negative, got {scalings.omega_hat}")
        return 1.0 / math.sqrt(1.0 + scalings.omega_hat)
    if scalings.chi_hat < 0.0:
        raise ValueError(f"chi_hat must be non-negative, got {scalings.chi_hat}")
    return alpha_hat / math.sqrt(2.0 + scalings.chi_hat)


def run_test(x, cfg: TailTestConfig) -> TestOutcome:
    """Run the full change test on a series and fill every outcome field.

    Requires ``n >= max(4, k + 2)`` so that both order-statistic thresholds
    exist. Deterministic: the critical value is the analytic quantile at
    ``1 - level``.
    """
    v = nonneg_view(x, cfg.use_abs)
    n = v.size
    if n < max(4, cfg.k + 2):
        raise ValueError(f"need n >= max(4, k + 2) = {max(4, cfg.k + 2)}, got n = {n}")
    return _run_sorted(v, _descending(v), cfg)


def _run_sorted(v: np.ndarray, srt: np.ndarray, cfg: TailTestConfig) -> TestOutcome:
    """Core of :func:`run_test` on a precomputed descending sort (harness fast path)."""
    n = v.size
    k = cfg.k
    threshold = srt[k - 1]
    if cfg.phi == "log_excess" and threshold <= 0.0:
        raise DegenerateThresholdError(
            f"k-th largest value is 0 (k={k}); log excesses are undefined"
        )
    abs_d = np.abs(_deviations(_phi_values(v, threshold, cfg.phi)))
    l_hat = int(np.argmax(abs_d)) + 1
    statistic = float(abs_d[l_hat - 1]) / math.sqrt(k)

    hill_est = _hill_sorted(v, srt, k)
    alpha_hat = hill_est.alpha_hat

    omega_hat = chi_hat = None
    scalings = None
    if cfg.adjust == "lag1":
        if threshold <= 0.0:
            raise DegenerateThresholdError(
                f"k-th largest value is 0 (k={k}); dependence scalings are undefined"
            )
        ind = v > threshold
        omega_hat = 2.0 * int(np.count_nonzero(ind[:-1] & ind[1:])) / k
        if not np.isfinite(alpha_hat):
            raise DegenerateThresholdError(
                "alpha_hat is not finite; the lag-1 log-excess scaling is undefined"
            )
        le = _log_excess_values(v, threshold)
        chi_hat = 2.0 * alpha_hat * float(np.dot(le[:-1], le[1:])) / k
        scalings = ScalingEstimates(omega_hat=omega_hat, chi_hat=chi_hat)

    scale = scale_factor(cfg.phi, cfg.adjust, alpha_hat=alpha_hat, scalings=scalings)
    cv = null_dist.critical_value(1.0 - cfg.level)
    scaled = scale * statistic
    return TestOutcome(
        n=n,
        k=k,
        phi=cfg.phi,
        adjust=cfg.adjust,
        level=cfg.level,
        alpha_hat=alpha_hat,
        omega_hat=omega_hat,
        chi_hat=chi_hat,
        statistic=statistic,
        scale_factor=scale,
        scaled_statistic=scaled,
        critical_value=cv,
        reject=bool(scaled >= cv),
        l_hat=l_hat,
        tau_hat=l_hat / n,
    )
