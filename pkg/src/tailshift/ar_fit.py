"""AR(p) coefficient estimation and the residual-based change test.

Fits are intercept-free (the modelled processes are mean-zero with symmetric
innovations), either by least squares on the lagged design or by the
Yule-Walker equations on raw (uncentered) autocovariances solved with the
Levinson-Durbin recursion. The residual test applies the CUSUM machinery to
the absolute residuals with the i.i.d. scaling: filtering out the
autoregression removes the correlation effect, so no lag adjustment is
needed.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cusum import TailTestConfig, TestOutcome, run_test

__all__ = [
    "ArFit",
    "DegenerateDataError",
    "FIT_METHODS",
    "fit_ar",
    "residual_cusum",
]

FIT_METHODS = ("ols", "yule_walker")


class DegenerateDataError(ValueError):
    """Raised when the regression design or autocovariance system is singular."""


@dataclass(frozen=True)
class ArFit:
    """Fitted AR(p) coefficients with the implied one-step residuals.

    ``residuals[i]`` is the innovation estimate for observation ``order + 1 + i``
    (1-based), i.e. residuals exist only where all ``order`` lags are observed,
    giving ``n - order`` of them. The defining identity
    ``x[i] = coefficients . lags + residuals[...]`` holds exactly.
    """

    order: int
    coefficients: np.ndarray
    residuals: np.ndarray
    method: str


def _lag_matrix(x: np.ndarray, p: int) -> np.ndarray:
    # column j holds the lag-(j+1) values aligned with x[p:]
    return np.column_stack([x[p - j: x.size - j] for j in range(1, p + 1)])


def _fit_ols(x: np.ndarray, p: int) -> np.ndarray:
    design = _lag_matrix(x, p)
    gram = design.T @ design
    rhs = design.T @ x[p:]
    try:
        coef = np.linalg.solve(gram, rhs)
    except np.linalg.LinAlgError as exc:
        raise DegenerateDataError(f"singular normal equations for order {p}") from exc
    if not np.all(np.isfinite(coef)):
        raise DegenerateDataError(f"non-finite least-squares solution for order {p}")
    return coef


def _fit_yule_walker(x: np.ndarray, p: int) -> np.ndarray:
    n = x.size
    # raw second moments, no mean-centering
    acov = np.array([float(np.dot(x[: n - h], x[h:])) / n for h in range(p + 1)])
    if acov[0] <= 0.0:
        raise DegenerateDataError(
            "zero lag-0 autocovariance; series is identically zero or vanishes at double precision"
        )
    # Levinson-Durbin on the Toeplitz system
    coef = np.zeros(p)
    err = acov[0]
    for m in range(1, p + 1):
        kappa = acov[m] - float(np.dot(coef[: m - 1], acov[m - 1: 0: -1]))
        kappa /= err
        coef[m - 1] = kappa
        if m > 1:
            coef[: m - 1] -= kappa * coef[m - 2:: -1]
        err *= 1.0 - kappa * kappa
        if err <= 0.0 and m < p:
            raise DegenerateDataError(
                f"autocovariance system is singular at recursion step {m}"
            )
    return coef


def fit_ar(x, order: int, method: str = "ols") -> ArFit:
    """Fit an intercept-free AR(``order``) model and attach the residuals.

    Parameters
    ----------
    x : array_like
        Observed series, length at least ``order + 2``.
    order : int
        Autoregressive order ``p >= 1``.
    method : str
        ``"ols"`` minimizes the sum of squared one-step errors;
        ``"yule_walker"`` solves the raw-autocovariance Toeplitz system by
        Levinson-Durbin (for p = 1 this is the lag-1/lag-0 moment ratio,
        always inside [-1, 1]).
    """
    if method not in FIT_METHODS:
        raise ValueError(f"method must be one of {FIT_METHODS}, got {method!r}")
    v = np.asarray(x, dtype=float)
    if v.ndim != 1:
        raise ValueError(f"expected a 1-d series, got shape {v.shape}")
    if order < 1:
        raise ValueError(f"order must be at least 1, got {order}")
    if v.size < order + 2:
        raise ValueError(f"need n >= order + 2 = {order + 2}, got n = {v.size}")
    coef = _fit_ols(v, order) if method == "ols" else _fit_yule_walker(v, order)
    residuals = v[order:] - _lag_matrix(v, order) @ coef
    return ArFit(order=order, coefficients=coef, residuals=residuals, method=method)


def residual_cusum(
    x,
    order: int,
    k: int,
    phi: str = "indicator",
    method: str = "ols",
    level: float = 0.05,
) -> TestOutcome:
    """Change test on the absolute AR residuals with the i.i.d. scaling.

    ``k`` is validated against the residual count ``n - order``; the returned
    outcome's ``n``, ``l_hat`` and ``tau_hat`` refer to the residual axis,
    which trails the original series by ``order`` observations.
    """
    fit = fit_ar(x, order, method)
    n_res = fit.residuals.size
    if not 1 <= k <= n_res - 1:
        raise ValueError(
            f"k must satisfy 1 <= k <= (n - order) - 1 = {n_res - 1}, got {k}"
        )
    cfg = TailTestConfig(k=k, phi=phi, adjust="iid", level=level, use_abs=True)
    return run_test(fit.residuals, cfg)
