"""Stock benchmark configurations.

Each target ships one pinned simulated dataset (fixed seed + the stock
simulation settings) so that figures, checks, and acceptance runs all agree
on the exact same bytes. Grid windows are chosen to contain the simulated
truth with generous margins; they are recorded in every grid sidecar.

The adaptive-lasso seed is chosen so the sample mean is large enough for the
interior second mode to exist (it needs |mean(y)| > 2 sigma / sqrt(n)); the
collinear seed realizes an especially flat ridge. Both facts are checked by
the test suite rather than assumed.
"""

from __future__ import annotations

from .iv import IVTarget, simulate_iv
from .lasso import LassoTarget, simulate_lasso
from .nmixture import NMixtureTarget, simulate_nmixture
from .occupancy import OccupancyTarget, simulate_occupancy
from .regression import CollinearTarget, SpikeSlabTarget, simulate_collinear, simulate_spike_slab
from .stochvol import SVTarget, simulate_sv

TARGET_NAMES = (
    "nmixture",
    "occupancy",
    "collinear",
    "spike_slab",
    "adaptive_lasso",
    "iv",
    "stoch_vol",
)

SEEDS = {
    "nmixture": 101,
    "occupancy": 7,
    "collinear": 4,
    "spike_slab": 21,
    "adaptive_lasso": 34,
    "iv": 42,
    "stoch_vol": 3,
}

# panel letter, generative model, posterior geometry
TARGET_INFO = {
    "nmixture": ("A", "binomial N-mixture abundance/detection counts", "banana"),
    "occupancy": ("B", "site occupancy with imperfect detection", "banana"),
    "collinear": ("C", "linear regression with collinear regressors", "needle"),
    "spike_slab": ("D", "regression with spike-and-slab mixture prior", "cross"),
    "adaptive_lasso": ("E", "Laplace-prior regression with penalty hyperprior", "multimodal"),
    "iv": ("F", "weak instrumental variable with diffuse covariance prior", "singularity"),
    "stoch_vol": ("2", "stochastic volatility, AR(1) latent log-variance", "mushroom"),
}

# (x_param, x_range, y_param, y_range)
DEFAULT_GRIDS = {
    "nmixture": ("p", (0.01, 0.6), "lambda", (1.0, 120.0)),
    "occupancy": ("psi", (0.01, 0.8), "p", (0.01, 0.8)),
    "collinear": ("beta1", (-30.0, 10.0), "beta2", (-10.0, 30.0)),
    "spike_slab": ("beta1", (-2.0, 2.0), "beta2", (-2.0, 2.0)),
    "adaptive_lasso": ("beta", (-10.0, 15.0), "lambda", (0.001, 10.0)),
    "iv": ("beta", (-4.0, 4.0), "pi", (-2.0, 2.0)),
}


def reference_target(name: str):
    """The pinned stock target for ``name`` (deterministic)."""
    seed = SEEDS[name]
    if name == "nmixture":
        return NMixtureTarget(simulate_nmixture(seed))
    if name == "occupancy":
        return OccupancyTarget(simulate_occupancy(seed))
    if name == "collinear":
        return CollinearTarget(simulate_collinear(seed))
    if name == "spike_slab":
        return SpikeSlabTarget(simulate_spike_slab(seed))
    if name == "adaptive_lasso":
        return LassoTarget(simulate_lasso(seed))
    if name == "iv":
        return IVTarget(simulate_iv(seed))
    if name == "stoch_vol":
        return SVTarget(simulate_sv(seed)[0])
    raise KeyError(f"unknown target {name!r}; known: {TARGET_NAMES}")
