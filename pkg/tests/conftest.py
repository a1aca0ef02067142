import numpy as np
import pytest

from tailshift.null_dist import mc_critical_values, simulate_L
from tailshift.variates import replication_rng

MC_SEED = 0
MC_PATHS = 10_000
MC_REPS = 10_000


@pytest.fixture(scope="session")
def bridge_sup_draws():
    """10k simulated bridge suprema at 10k path points (shared, ~2s)."""
    draws = np.empty(MC_REPS)
    for r in range(MC_REPS):
        draws[r] = simulate_L(MC_PATHS, replication_rng(MC_SEED, r))
    return draws


@pytest.fixture(scope="session")
def mc_cv_table():
    """Monte Carlo critical-value table at the standard levels (shared, ~2s)."""
    return mc_critical_values([0.90, 0.95, 0.99], MC_PATHS, MC_REPS, seed=MC_SEED)
