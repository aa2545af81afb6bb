"""Site-occupancy model with imperfect detection.

Per site i with K_i visits:

    z_i ~ Bernoulli(psi)                  latent occupancy, marginalized
    y_{i,n} | z_i ~ Bernoulli(p * z_i)
    psi, p ~ Uniform(0, 1)

Only the per-site detection total s_i = sum_n y_{i,n} enters the likelihood,
so the data are stored as sufficient statistics (s_i, K_i). A mostly-zero
dataset leaves "rare but detectable" and "common but cryptic" both plausible,
which bends the (psi, p) posterior into a banana.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .targets import Target
from .transforms import ParamDescriptor, ParamSpace, UnitInterval


@dataclass(frozen=True)
class OccupancyData:
    """Per-site detection counts s and visit counts k."""

    s: np.ndarray
    k: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.s, dtype=np.int64).ravel()
        k = np.asarray(self.k, dtype=np.int64).ravel()
        if s.size == 0 or s.shape != k.shape:
            raise ValueError("need matching nonempty s and k arrays")
        if (s < 0).any() or (s > k).any():
            raise ValueError("require 0 <= s_i <= K_i at every site")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "k", k)

    @property
    def n_sites(self) -> int:
        return self.s.size


@dataclass(frozen=True)
class OccupancyParams:
    psi: float
    p: float

    def __post_init__(self):
        if not (0.0 < self.psi < 1.0 and 0.0 < self.p < 1.0):
            raise ValueError("psi and p must lie strictly in (0, 1)")

    def as_vector(self) -> np.ndarray:
        return np.array([self.psi, self.p])


def occupancy_site_loglik(s: int, k: int, psi: float, p: float) -> float:
    """Exact two-term mixture: log[psi p^s (1-p)^(k-s) + (1-psi) 1{s=0}]."""
    if not 0 <= s <= k:
        raise ValueError(f"require 0 <= s <= k, got s={s}, k={k}")
    lik = _site_liks(np.array([s]), np.array([k]), psi, p)[0]
    with np.errstate(divide="ignore"):
        return float(np.log(lik))


def _site_liks(s, k, psi, p):
    occ = psi * np.power(p, s.astype(float)) * np.power(1.0 - p, (k - s).astype(float))
    return occ + (1.0 - psi) * (s == 0)


def occupancy_log_density(data: OccupancyData, psi: float, p: float) -> float:
    """Unnormalized log posterior; the flat priors contribute zero."""
    if not (0.0 <= psi <= 1.0 and 0.0 <= p <= 1.0):
        return -np.inf
    lik = _site_liks(data.s, data.k, psi, p)
    if (lik <= 0.0).any():
        return -np.inf
    return float(np.log(lik).sum())


def occupancy_log_density_grad(data: OccupancyData, psi: float, p: float):
    if not (0.0 < psi < 1.0 and 0.0 < p < 1.0):
        return -np.inf, np.zeros(2)
    s = data.s.astype(float)
    k = data.k.astype(float)
    occ = psi * np.power(p, s) * np.power(1.0 - p, k - s)
    emp = (1.0 - psi) * (data.s == 0)
    lik = occ + emp
    d_psi = float(np.sum((occ / psi - emp / (1.0 - psi)) / lik))
    d_p = float(np.sum(occ * (s / p - (k - s) / (1.0 - p)) / lik))
    return float(np.log(lik).sum()), np.array([d_psi, d_p])


def simulate_occupancy(seed: int, n_sites: int = 100, n_repeats: int = 8,
                       psi: float = 0.1, p: float = 0.1) -> OccupancyData:
    """Draw latent occupancy, then per-visit detections at occupied sites."""
    if n_sites < 1 or n_repeats < 1:
        raise ValueError("need at least one site and one repeat")
    if not (0.0 <= psi <= 1.0 and 0.0 <= p <= 1.0):
        raise ValueError("psi and p must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    z = rng.binomial(1, psi, size=n_sites)
    probs = np.broadcast_to((p * z)[:, None], (n_sites, n_repeats))
    y = rng.binomial(1, probs)
    return OccupancyData(s=y.sum(axis=1), k=np.full(n_sites, n_repeats))


class OccupancyTarget(Target):
    name = "occupancy"

    def __init__(self, data: OccupancyData):
        self.data = data
        self.space = ParamSpace(
            [ParamDescriptor("psi", UnitInterval()), ParamDescriptor("p", UnitInterval())]
        )

    def log_density(self, params) -> float:
        psi, p = np.asarray(params, dtype=float)
        return occupancy_log_density(self.data, psi, p)

    def log_density_grad(self, params):
        psi, p = np.asarray(params, dtype=float)
        return occupancy_log_density_grad(self.data, psi, p)
