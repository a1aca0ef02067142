"""Batch simulation harness: empirical size, power and change-point MSE grids.

Each grid cell simulates ``replications`` series, runs the configured test at
every tail fraction in ``k_grid`` on the same simulated path (common random
numbers across the k axis), and aggregates rejection rates, the mean squared
error of the change-point fraction (when a change is injected) and the mean
tail-exponent estimate. Replication ``r`` draws from the split stream
``(seed, r)``; results are reduced per cell, so execution order is
irrelevant and reruns are bit-identical.

``table_specs`` reproduces the benchmark grids (numbered 2-10) used to
calibrate this implementation: sizes for i.i.d. Burr samples and for MA(1)/
AR(1) paths with Student-t innovations, powers under a mid-sample tail
change, and the localization MSE.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, replace

import numpy as np

from .ar_fit import fit_ar
from .cusum import TailTestConfig, _run_sorted
from .tail_core import _descending, nonneg_view
from .variates import (
    BurrParams,
    ChangeSpec,
    ModelSpec,
    TDistParams,
    replication_rng,
    simulate,
)

__all__ = [
    "KCell",
    "SimulationSpec",
    "TableResult",
    "results_to_csv",
    "results_to_report",
    "run_table",
    "spec_fingerprint",
    "sweep",
    "table_specs",
    "TABLE_IDS",
]

TEST_KINDS = ("direct", "ar_residual")


@dataclass(frozen=True)
class SimulationSpec:
    """One simulation design: model, optional change, test configuration and grid."""

    model: ModelSpec
    n: int
    k_grid: tuple[int, ...]
    phi: str = "indicator"
    adjust: str = "iid"
    test: str = "direct"
    ar_order: int = 1
    ar_method: str = "ols"
    level: float = 0.05
    replications: int = 2000
    seed: int = 0
    change: ChangeSpec | None = None
    label: str = ""

    def __post_init__(self):
        if self.n < 4:
            raise ValueError(f"n must be at least 4, got {self.n}")
        if not self.k_grid:
            raise ValueError("k_grid must be non-empty")
        for k in self.k_grid:
            if not 1 <= k <= self.n - 2:
                raise ValueError(f"every k must satisfy 1 <= k <= n - 2, got k={k}, n={self.n}")
        if self.test not in TEST_KINDS:
            raise ValueError(f"test must be one of {TEST_KINDS}, got {self.test!r}")
        if self.replications < 1:
            raise ValueError(f"replications must be at least 1, got {self.replications}")


@dataclass(frozen=True)
class KCell:
    """Aggregates for one (spec, k) cell."""

    k: int
    reject_count: int
    rejection_rate: float
    mse_tau: float | None
    mean_alpha_hat: float
    error_count: int


@dataclass(frozen=True)
class TableResult:
    spec: SimulationSpec
    rows: tuple[KCell, ...]
    error: str | None = None


def run_table(spec: SimulationSpec) -> TableResult:
    """Run every replication of ``spec`` and aggregate per k.

    A replication whose test raises (degenerate threshold and the like) counts
    as neither rejection nor acceptance; it is reported in ``error_count`` and
    the rejection rate keeps ``replications`` as its denominator.
    """
    n_k = len(spec.k_grid)
    rejects = np.zeros(n_k, dtype=np.int64)
    errors = np.zeros(n_k, dtype=np.int64)
    sq_err = np.zeros(n_k)
    ok_count = np.zeros(n_k, dtype=np.int64)
    alpha_sum = np.zeros(n_k)

    for r in range(spec.replications):
        rng = replication_rng(spec.seed, r)
        x = simulate(spec.model, spec.n, rng, spec.change)
        try:
            series = x if spec.test == "direct" else fit_ar(x, spec.ar_order, spec.ar_method).residuals
        except ValueError:
            errors += 1
            continue
        v = nonneg_view(series)
        srt = _descending(v)
        for j, k in enumerate(spec.k_grid):
            cfg = TailTestConfig(
                k=k, phi=spec.phi, adjust=spec.adjust, level=spec.level, use_abs=True
            )
            if v.size < max(4, k + 2):
                errors[j] += 1
                continue
            try:
                outcome = _run_sorted(v, srt, cfg)
            except ValueError:
                errors[j] += 1
                continue
            ok_count[j] += 1
            rejects[j] += outcome.reject
            alpha_sum[j] += outcome.alpha_hat
            if spec.change is not None:
                sq_err[j] += (outcome.tau_hat - spec.change.tau) ** 2

    rows = []
    for j, k in enumerate(spec.k_grid):
        ok = int(ok_count[j])
        rows.append(
            KCell(
                k=k,
                reject_count=int(rejects[j]),
                rejection_rate=int(rejects[j]) / spec.replications,
                mse_tau=(float(sq_err[j]) / ok if spec.change is not None and ok else None),
                mean_alpha_hat=(float(alpha_sum[j]) / ok if ok else float("nan")),
                error_count=int(errors[j]),
            )
        )
    return TableResult(spec=spec, rows=tuple(rows))


def sweep(specs) -> list[TableResult]:
    """Run independent specs in order; one failing spec does not abort the rest."""
    specs = list(specs)
    if not specs:
        raise ValueError("sweep requires at least one spec")
    results = []
    for spec in specs:
        try:
            results.append(run_table(spec))
        except Exception as exc:  # isolate per spec
            results.append(TableResult(spec=spec, rows=(), error=str(exc)))
    return results


def _innovation_tag(params) -> str:
    # semicolon separators keep the fingerprint comma-free for the CSV column
    if isinstance(params, BurrParams):
        return f"burr(lam={params.lam:g};beta={params.beta:g};gamma={params.gamma:g})"
    return f"t(nu={params.nu:g})"


def spec_fingerprint(spec: SimulationSpec) -> str:
    """Compact deterministic description used as the row key in delimited output."""
    model = spec.model
    parts = [model.kind + ("" if model.coef is None else f"[coef={model.coef:g}]")]
    parts.append(_innovation_tag(model.innovation))
    if spec.change is not None:
        parts.append(
            f"change(tau={spec.change.tau:g};pre={_innovation_tag(spec.change.pre)};"
            f"post={_innovation_tag(spec.change.post)})"
        )
    parts.append(f"n={spec.n}")
    parts.append(f"phi={spec.phi}")
    parts.append(f"adjust={spec.adjust}")
    test = spec.test if spec.test == "direct" else f"ar_residual(p={spec.ar_order};{spec.ar_method})"
    parts.append(f"test={test}")
    parts.append(f"level={spec.level:g}")
    parts.append(f"seed={spec.seed}")
    if spec.label:
        parts.insert(0, spec.label)
    return "/".join(parts)


def results_to_csv(results) -> str:
    """One ``spec,k,...`` row per grid cell; empty mse_tau when no change is injected."""
    lines = ["spec,k,rejection_rate,mse_tau,mean_alpha_hat,replications,error_count"]
    for result in results:
        if result.error is not None:
            message = result.error.replace(",", ";")  # keep the row parseable
            lines.append(f"{spec_fingerprint(result.spec)},,,,,{result.spec.replications},ERROR: {message}")
            continue
        for cell in result.rows:
            mse = "" if cell.mse_tau is None else repr(cell.mse_tau)
            lines.append(
                f"{spec_fingerprint(result.spec)},{cell.k},{cell.rejection_rate!r},"
                f"{mse},{cell.mean_alpha_hat!r},{result.spec.replications},{cell.error_count}"
            )
    return "\n".join(lines) + "\n"


def _spec_dict(spec: SimulationSpec) -> dict:
    model = {"kind": spec.model.kind, "coef": spec.model.coef,
             "innovation": _innovation_tag(spec.model.innovation)}
    change = None
    if spec.change is not None:
        change = {"tau": spec.change.tau,
                  "pre": _innovation_tag(spec.change.pre),
                  "post": _innovation_tag(spec.change.post)}
    return {
        "label": spec.label,
        "model": model,
        "change": change,
        "n": spec.n,
        "k_grid": list(spec.k_grid),
        "phi": spec.phi,
        "adjust": spec.adjust,
        "test": spec.test,
        "ar_order": spec.ar_order,
        "ar_method": spec.ar_method,
        "level": spec.level,
        "replications": spec.replications,
        "seed": spec.seed,
    }


def results_to_report(results) -> str:
    """Structured JSON report: full spec echo plus per-cell aggregates."""
    payload = []
    for result in results:
        entry = {"spec": _spec_dict(result.spec), "error": result.error, "rows": []}
        if result.error is None:
            entry["rows"] = [
                {
                    "k": cell.k,
                    "reject_count": cell.reject_count,
                    "rejection_rate": cell.rejection_rate,
                    "mse_tau": cell.mse_tau,
                    "mean_alpha_hat": cell.mean_alpha_hat,
                    "error_count": cell.error_count,
                }
                for cell in result.rows
            ]
        payload.append(entry)
    return json.dumps({"results": payload}, indent=2) + "\n"


# ---------------------------------------------------------------------------
# Benchmark table designs
# ---------------------------------------------------------------------------

TABLE_IDS = tuple(range(2, 11))

_K_SMALL = tuple(range(10, 101, 10))       # n = 1000
_K_LARGE = tuple(range(25, 251, 25))       # n = 3000
_BURR_ROWS = ((2.0, -2.0), (2.0, -0.5), (1.0, -2.0), (1.0, -0.5))
_MA_THETAS = (0.1, 0.5, 1.0)
_AR_COEFS = (0.5, 0.9)
_POWER_TAUS = (0.25, 0.5, 0.75)
_CHANGE_3_TO_1 = ChangeSpec(tau=0.5, pre=TDistParams(3.0), post=TDistParams(1.0))


def table_specs(
    table_id: int,
    replications: int = 2000,
    seed: int = 0,
    include_large: bool = False,
) -> list[SimulationSpec]:
    """Specs for one benchmark grid.

    Tables 2/3: size, i.i.d. Burr, indicator/log-excess statistic.
    Tables 4/5: size, MA(1) with t(2) innovations, lag-1 adjusted.
    Tables 6/7: size, AR(1) with t(2) innovations, residual test.
    Tables 8/9: power under a t(3) -> t(1) innovation change (MA direct /
    AR residual). Table 10: change-point MSE for the MA design of table 8.

    The ``n = 3000`` half of each grid is heavy and only included when
    ``include_large`` is set.
    """
    if table_id not in TABLE_IDS:
        raise ValueError(f"table_id must be in {TABLE_IDS[0]}..{TABLE_IDS[-1]}, got {table_id}")
    blocks = [(1000, _K_SMALL)]
    if include_large:
        blocks.append((3000, _K_LARGE))

    specs: list[SimulationSpec] = []

    def add(spec: SimulationSpec) -> None:
        specs.append(replace(spec, seed=seed + len(specs), replications=replications))

    for n, k_grid in blocks:
        if table_id in (2, 3):
            phi = "indicator" if table_id == 2 else "log_excess"
            for alpha, gamma in _BURR_ROWS:
                add(SimulationSpec(
                    model=ModelSpec("iid", BurrParams.from_alpha(alpha, gamma)),
                    n=n, k_grid=k_grid, phi=phi, adjust="iid",
                    label=f"size-iid-burr(alpha={alpha:g},gamma={gamma:g})",
                ))
        elif table_id in (4, 5):
            phi = "indicator" if table_id == 4 else "log_excess"
            for theta in _MA_THETAS:
                add(SimulationSpec(
                    model=ModelSpec("ma1", TDistParams(2.0), coef=theta),
                    n=n, k_grid=k_grid, phi=phi, adjust="lag1",
                    label=f"size-ma1(theta={theta:g})",
                ))
        elif table_id in (6, 7):
            phi = "indicator" if table_id == 6 else "log_excess"
            for coef in _AR_COEFS:
                add(SimulationSpec(
                    model=ModelSpec("ar1", TDistParams(2.0), coef=coef),
                    n=n, k_grid=k_grid, phi=phi, adjust="iid",
                    test="ar_residual", ar_order=1, ar_method="ols",
                    label=f"size-ar1-resid(coef={coef:g})",
                ))
        elif table_id == 8:
            for tau in _POWER_TAUS:
                add(SimulationSpec(
                    model=ModelSpec("ma1", TDistParams(3.0), coef=0.5),
                    n=n, k_grid=k_grid, phi="indicator", adjust="lag1",
                    change=replace(_CHANGE_3_TO_1, tau=tau),
                    label=f"power-ma1(tau={tau:g})",
                ))
        elif table_id == 9:
            for tau in _POWER_TAUS:
                add(SimulationSpec(
                    model=ModelSpec("ar1", TDistParams(3.0), coef=0.5),
                    n=n, k_grid=k_grid, phi="indicator", adjust="iid",
                    test="ar_residual", ar_order=1, ar_method="ols",
                    change=replace(_CHANGE_3_TO_1, tau=tau),
                    label=f"power-ar1-resid(tau={tau:g})",
                ))
        else:  # table 10: MSE of the located change for the MA design
            for tau in _POWER_TAUS:
                add(SimulationSpec(
                    model=ModelSpec("ma1", TDistParams(3.0), coef=0.5),
                    n=n, k_grid=k_grid, phi="indicator", adjust="lag1",
                    change=replace(_CHANGE_3_TO_1, tau=tau),
                    label=f"mse-ma1(tau={tau:g})",
                ))
    return specs
