"""posteriorbench: hard Bayesian posterior targets with verified numerics.

Seven applied models whose posteriors exhibit classic difficult geometries
(banana, needle, cross, multimodal, singularity, mushroom), each with a
seeded simulator, an unnormalized log posterior with analytic gradients,
2-D density grids, reference RWM/HMC samplers, and independent brute-force
oracles for every nontrivial computation.
"""

from .datasets import build_target, dataset_payload, load_dataset, save_dataset
from .diagnostics import ess, split_rhat
from .dists import log_pdf, logsumexp
from .grid import (
    DensityGrid,
    GridSpec,
    conditional_argmax,
    evaluate_grid,
    find_local_maxima,
    principal_axis,
    write_grid,
)
from .iv import IVData, IVParams, IVTarget, simulate_iv
from .lasso import LassoData, LassoParams, LassoTarget, simulate_lasso
from .nmixture import NMixtureData, NMixtureParams, NMixtureTarget, simulate_nmixture
from .occupancy import OccupancyData, OccupancyParams, OccupancyTarget, simulate_occupancy
from .reference import DEFAULT_GRIDS, SEEDS, TARGET_NAMES, reference_target
from .regression import (
    CollinearPrior,
    CollinearTarget,
    RegressionData,
    SpikeSlabPrior,
    SpikeSlabTarget,
    simulate_collinear,
    simulate_spike_slab,
)
from .samplers import ChainSet, SamplerConfig, hmc_sample, rwm_sample, sample
from .stochvol import SVData, SVParams, SVTarget, simulate_sv
from .targets import MvNormalTarget, Target
from .transforms import (
    Interval,
    ParamDescriptor,
    ParamSpace,
    Positive,
    Real,
    Spd2x2,
    Support,
    UnitInterval,
)

__version__ = "0.1.0"

__all__ = [
    "ChainSet",
    "CollinearPrior",
    "CollinearTarget",
    "DEFAULT_GRIDS",
    "DensityGrid",
    "GridSpec",
    "IVData",
    "IVParams",
    "IVTarget",
    "Interval",
    "LassoData",
    "LassoParams",
    "LassoTarget",
    "MvNormalTarget",
    "NMixtureData",
    "NMixtureParams",
    "NMixtureTarget",
    "OccupancyData",
    "OccupancyParams",
    "OccupancyTarget",
    "ParamDescriptor",
    "ParamSpace",
    "Positive",
    "Real",
    "RegressionData",
    "SEEDS",
    "SVData",
    "SVParams",
    "SVTarget",
    "SamplerConfig",
    "Spd2x2",
    "SpikeSlabPrior",
    "SpikeSlabTarget",
    "Support",
    "TARGET_NAMES",
    "Target",
    "UnitInterval",
    "build_target",
    "conditional_argmax",
    "dataset_payload",
    "ess",
    "evaluate_grid",
    "find_local_maxima",
    "hmc_sample",
    "load_dataset",
    "log_pdf",
    "logsumexp",
    "principal_axis",
    "reference_target",
    "rwm_sample",
    "sample",
    "save_dataset",
    "simulate_collinear",
    "simulate_iv",
    "simulate_lasso",
    "simulate_nmixture",
    "simulate_occupancy",
    "simulate_spike_slab",
    "simulate_sv",
    "split_rhat",
    "write_grid",
]
