"""Random variates and path simulation for heavy-tailed designs.

Samplers for the Burr and Student-t families plus i.i.d./MA(1)/AR(1) path
generation with an optional single switch of the innovation law. Everything
is reproducible: public entry points accept either an integer seed or a
``numpy.random.Generator``, and replication harnesses derive independent
streams with :func:`replication_rng`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter

__all__ = [
    "AR_BURNIN",
    "BurrParams",
    "ChangeSpec",
    "ModelSpec",
    "TDistParams",
    "as_generator",
    "burr_cdf",
    "burr_quantile",
    "burr_sample",
    "burr_sf",
    "replication_rng",
    "simulate",
    "t_sample",
]

# Presample steps discarded when starting the AR recursion from zero.
AR_BURNIN = 1000

# Smallest uniform accepted by the inverse transform; guards the u = 0.0
# endpoint of numpy's half-open uniform without biasing any realistic draw.
_MIN_UNIFORM = 1e-300


def as_generator(seed) -> np.random.Generator:
    """Return ``seed`` itself if it is a Generator, else a fresh Philox stream."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def replication_rng(seed: int, index: int) -> np.random.Generator:
    """Independent generator for replication ``index`` of a run seeded with ``seed``.

    Streams are split as ``SeedSequence((seed, index))`` feeding a counter-based
    Philox generator, so replication ``index`` sees the same stream whether the
    harness runs serially or fans replications out to workers.
    """
    return np.random.Generator(np.random.Philox(np.random.SeedSequence((int(seed), int(index)))))


@dataclass(frozen=True)
class BurrParams:
    """Burr law with survival function ``(beta / (beta + x**(-gamma)))**lam``.

    ``lam`` and ``beta`` must be positive and ``gamma`` negative; the tail
    exponent is ``alpha = -gamma * lam``.
    """

    lam: float
    beta: float = 1.0
    gamma: float = -1.0

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError(f"lam must be positive, got {self.lam}")
        if not self.beta > 0:
            raise ValueError(f"beta must be positive, got {self.beta}")
        if not self.gamma < 0:
            raise ValueError(f"gamma must be negative, got {self.gamma}")

    @property
    def alpha(self) -> float:
        return -self.gamma * self.lam

    @classmethod
    def from_alpha(cls, alpha: float, gamma: float, beta: float = 1.0) -> "BurrParams":
        """Parameters with tail exponent ``alpha`` and second-order exponent ``gamma``."""
        if not alpha > 0:
            raise ValueError(f"alpha must be positive, got {alpha}")
        return cls(lam=-alpha / gamma, beta=beta, gamma=gamma)


@dataclass(frozen=True)
class TDistParams:
    """Student-t law with ``nu`` degrees of freedom (tail exponent ``alpha = nu``)."""

    nu: float

    def __post_init__(self):
        if not self.nu > 0:
            raise ValueError(f"nu must be positive, got {self.nu}")

    @property
    def alpha(self) -> float:
        return self.nu


InnovationParams = BurrParams | TDistParams

_MODEL_KINDS = ("iid", "ma1", "ar1")


@dataclass(frozen=True)
class ModelSpec:
    """Data-generating model: i.i.d. draws, MA(1), or AR(1) over an innovation law.

    ``coef`` is the single lag-1 coefficient: the moving-average weight for
    ``kind="ma1"``, the autoregressive weight for ``kind="ar1"`` (must satisfy
    ``|coef| < 1`` for stationarity), unused for ``kind="iid"``.
    """

    kind: str
    innovation: InnovationParams
    coef: float | None = None

    def __post_init__(self):
        if self.kind not in _MODEL_KINDS:
            raise ValueError(f"kind must be one of {_MODEL_KINDS}, got {self.kind!r}")
        if self.kind == "iid":
            if self.coef is not None:
                raise ValueError("iid model takes no coefficient")
        else:
            if self.coef is None:
                raise ValueError(f"{self.kind} model requires a coefficient")
            if self.kind == "ar1" and not abs(self.coef) < 1:
                raise ValueError(f"ar1 requires |coef| < 1, got {self.coef}")


@dataclass(frozen=True)
class ChangeSpec:
    """Single abrupt switch of the innovation law after index ``floor(n * tau)``."""

    tau: float
    pre: InnovationParams
    post: InnovationParams

    def __post_init__(self):
        if not 0.0 < self.tau < 1.0:
            raise ValueError(f"tau must lie in (0, 1), got {self.tau}")


def burr_quantile(u, params: BurrParams):
    """Value ``x`` whose survival probability is ``u``, i.e. ``sf(x) = u``.

    Accepts a scalar or array of probabilities in the open interval (0, 1).
    """
    u_arr = np.asarray(u, dtype=float)
    if np.any((u_arr <= 0.0) | (u_arr >= 1.0)):
        raise ValueError("u must lie strictly inside (0, 1)")
    x = (params.beta * (u_arr ** (-1.0 / params.lam) - 1.0)) ** (-1.0 / params.gamma)
    return float(x) if u_arr.ndim == 0 else x


def burr_sf(x, params: BurrParams):
    """Survival function ``(beta / (beta + x**(-gamma)))**lam`` on ``x >= 0``."""
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr < 0.0):
        raise ValueError("the Burr law is supported on [0, inf)")
    sf = (params.beta / (params.beta + x_arr ** (-params.gamma))) ** params.lam
    return float(sf) if x_arr.ndim == 0 else sf


def burr_cdf(x, params: BurrParams):
    return 1.0 - burr_sf(x, params)


def _draw(params: InnovationParams, size: int, rng: np.random.Generator) -> np.ndarray:
    if size == 0:
        return np.empty(0)
    if isinstance(params, BurrParams):
        u = np.fmax(rng.random(size), _MIN_UNIFORM)
        return burr_quantile(u, params)
    if isinstance(params, TDistParams):
        # Exact law: standard normal over sqrt(chi-square / nu).
        z = rng.standard_normal(size)
        w = rng.chisquare(params.nu, size)
        return z / np.sqrt(w / params.nu)
    raise TypeError(f"unsupported innovation parameters: {type(params).__name__}")


def burr_sample(n: int, params: BurrParams, seed=None) -> np.ndarray:
    """``n`` i.i.d. Burr draws by inverse transform; deterministic given ``seed``."""
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    return _draw(params, n, as_generator(seed))


def t_sample(n: int, params: TDistParams, seed=None) -> np.ndarray:
    """``n`` i.i.d. Student-t draws (signed); deterministic given ``seed``."""
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    return _draw(params, n, as_generator(seed))


def simulate(model: ModelSpec, n: int, seed=None, change: ChangeSpec | None = None) -> np.ndarray:
    """Simulate a length-``n`` path of ``model``, optionally with a change.

    Under a :class:`ChangeSpec`, innovations ``1..floor(n*tau)`` follow
    ``change.pre`` and later ones ``change.post`` (``model.innovation`` is
    ignored). The MA(1) presample innovation and the AR(1) burn-in (``AR_BURNIN``
    steps from zero, discarded) use the pre-change law. Draw order is fixed --
    presample/burn-in and pre-change innovations first, then post-change --
    so a given ``(model, n, seed, change)`` always yields the same path.
    """
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    rng = as_generator(seed)
    if change is not None:
        # the epsilon keeps floor(10 * 0.7) = 7: n*tau lands a few ulps below
        # an integer whenever tau's decimal is not a binary fraction
        n_pre = math.floor(n * change.tau + 1e-9)
        pre_law, post_law = change.pre, change.post
    else:
        n_pre = n
        pre_law = post_law = model.innovation

    if model.kind == "iid":
        return np.concatenate([_draw(pre_law, n_pre, rng), _draw(post_law, n - n_pre, rng)])

    if model.kind == "ma1":
        # xi[0] is the presample innovation; xi[i] drives observation i.
        xi = np.concatenate([_draw(pre_law, n_pre + 1, rng), _draw(post_law, n - n_pre, rng)])
        return xi[1:] + model.coef * xi[:-1]

    # ar1: recursion x_i = coef * x_{i-1} + xi_i from zero, burn-in discarded.
    xi = np.concatenate(
        [_draw(pre_law, AR_BURNIN + n_pre, rng), _draw(post_law, n - n_pre, rng)]
    )
    path = lfilter([1.0], [1.0, -model.coef], xi)
    return path[AR_BURNIN:]
